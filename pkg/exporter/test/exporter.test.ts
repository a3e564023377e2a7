import { execFileSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { HashEncoder, makeEncoder } from "../src/encoder";
import { exportEmbeddings, readSentences } from "../src/exporter";

let workdir: string;

beforeEach(() => {
  workdir = fs.mkdtempSync(path.join(os.tmpdir(), "embed-exporter-"));
});

afterEach(() => {
  fs.rmSync(workdir, { recursive: true, force: true });
});

function writeSentences(name: string, lines: string[]): string {
  const p = path.join(workdir, name);
  fs.writeFileSync(p, lines.join("\n") + "\n", "utf-8");
  return p;
}

function makeCorpus(n: number): string[] {
  const subjects = ["Sam", "Maria", "Kofi", "Elena"];
  const verbs = ["found", "dropped", "painted", "borrowed"];
  const objects = ["keys", "ladder", "kettle", "radio", "basket"];
  const lines: string[] = [];
  for (let i = 0; i < n; i++) {
    const s = subjects[i % subjects.length];
    const v = verbs[Math.floor(i / subjects.length) % verbs.length];
    const o = objects[Math.floor(i / 16) % objects.length];
    lines.push(`${s} ${v} the ${o} number ${i}.`);
  }
  return lines;
}

function readTable(p: string): Array<{ text: string; vector: number[] }> {
  return fs
    .readFileSync(p, "utf-8")
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line));
}

function norm(vector: number[]): number {
  return Math.sqrt(vector.reduce((acc, v) => acc + v * v, 0));
}

function dot(a: number[], b: number[]): number {
  return a.reduce((acc, v, i) => acc + v * b[i], 0);
}

describe("HashEncoder", () => {
  it("produces unit vectors of the requested dimension", () => {
    const encoder = new HashEncoder(64);
    const vector = encoder.encode("Sam found the keys.");
    expect(vector).toHaveLength(64);
    expect(norm(vector)).toBeCloseTo(1.0, 6);
  });

  it("is deterministic and case/punctuation aware only through tokens", () => {
    const encoder = new HashEncoder(64);
    expect(encoder.encode("Sam found the keys.")).toEqual(encoder.encode("sam found the keys"));
  });

  it("encodes token-free strings as a deterministic unit vector", () => {
    const encoder = new HashEncoder(32);
    const vector = encoder.encode("!!!");
    expect(norm(vector)).toBeCloseTo(1.0, 9);
    expect(encoder.encode("!!!")).toEqual(vector);
  });

  it("rejects bad dimensions and unknown encoder ids", () => {
    expect(() => new HashEncoder(0)).toThrow();
    expect(() => makeEncoder("neural-giant-v9", 64)).toThrow(/cannot load encoder/);
  });
});

describe("exportEmbeddings", () => {
  it("exports 100 sentences as unit-norm rows with a manifest", () => {
    const input = writeSentences("sentences.txt", makeCorpus(100));
    const output = path.join(workdir, "table.jsonl");
    const manifest = exportEmbeddings(input, output, { dimension: 128 });

    const rows = readTable(output);
    expect(rows).toHaveLength(100);
    expect(manifest.count).toBe(100);
    expect(manifest.dimension).toBe(128);
    expect(manifest.encoder).toBe("hash-v1-d128");
    expect(manifest.input_sha256).toMatch(/^[0-9a-f]{64}$/);

    const texts = new Set(rows.map((r) => r.text));
    expect(texts.size).toBe(100);
    for (const row of rows) {
      expect(row.vector).toHaveLength(128);
      expect(Math.abs(norm(row.vector) - 1.0)).toBeLessThan(1e-4);
      // self-cosine through the table contract
      expect(Math.abs(dot(row.vector, row.vector) - 1.0)).toBeLessThan(1e-4);
    }

    const sidecar = JSON.parse(fs.readFileSync(output + ".manifest.json", "utf-8"));
    expect(sidecar).toEqual(manifest);
  });

  it("deduplicates input lines", () => {
    const story = [
      "Fred woke up late.",
      "He just missed his bus.",
      "He then went to his mom's room.",
      "His mom then drives him to school.",
      "He makes it to first class on time.",
    ];
    const statements = ["Fred wakes up late", "Fred misses his bus"];
    const input = writeSentences("dup.txt", [...story, ...statements, ...story]);
    const output = path.join(workdir, "table.jsonl");
    const manifest = exportEmbeddings(input, output);
    expect(manifest.count).toBe(7);
    expect(readTable(output)).toHaveLength(7);
  });

  it("re-exports byte-identically for the same input and encoder", () => {
    const input = writeSentences("stable.txt", makeCorpus(25));
    const out1 = path.join(workdir, "t1.jsonl");
    const out2 = path.join(workdir, "t2.jsonl");
    exportEmbeddings(input, out1, { dimension: 64 });
    exportEmbeddings(input, out2, { dimension: 64 });
    expect(fs.readFileSync(out1, "utf-8")).toBe(fs.readFileSync(out2, "utf-8"));
  });

  it("rejects empty input", () => {
    const input = writeSentences("empty.txt", ["", "   "]);
    const output = path.join(workdir, "table.jsonl");
    expect(() => exportEmbeddings(input, output)).toThrow(/no sentences/);
  });

  it("sorts keys regardless of input order", () => {
    const a = writeSentences("a.txt", ["b line", "a line", "c line"]);
    const b = writeSentences("b.txt", ["c line", "b line", "a line"]);
    expect(readSentences(a)).toEqual(readSentences(b));
  });
});

describe("round-trip through the core toolkit", () => {
  function python(script: string): string | null {
    try {
      return execFileSync("python3", ["-c", script], { encoding: "utf-8" });
    } catch {
      return null;
    }
  }

  const available = python("import cis2kit") !== null;

  it.skipIf(!available)("exported tables load cleanly and self-cosine is 1", () => {
    const sentences = makeCorpus(100);
    const input = writeSentences("rt.txt", sentences);
    const output = path.join(workdir, "rt_table.jsonl");
    exportEmbeddings(input, output, { dimension: 96 });

    const probe = sentences[13];
    const script = [
      "import json, sys",
      "from cis2kit import EmbeddingCosineSimilarity, load_embedding_table",
      `table = load_embedding_table(${JSON.stringify(output)})`,
      "backend = EmbeddingCosineSimilarity(table=table)",
      `probe = ${JSON.stringify(probe)}`,
      "print(json.dumps({'n': len(table), 'dim': table.dim, 'self': backend.similarity(probe, probe)}))",
    ].join("\n");
    const out = python(script);
    expect(out).not.toBeNull();
    const result = JSON.parse(out as string);
    expect(result.n).toBe(100);
    expect(result.dim).toBe(96);
    expect(Math.abs(result.self - 1.0)).toBeLessThan(1e-4);
  });
});
