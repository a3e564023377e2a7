/**
 * Turn a one-sentence-per-line file into the JSON-lines embedding table the
 * core toolkit loads ({"text": ..., "vector": [...]}), plus a manifest
 * sidecar recording the encoder identity, vector dimension, row count, and a
 * content hash of the input. Input lines are deduplicated and keys sorted so
 * re-exports are byte-stable.
 */

import * as crypto from "crypto";
import * as fs from "fs";

import { Encoder, makeEncoder } from "./encoder";

export interface ExportManifest {
  encoder: string;
  dimension: number;
  count: number;
  input_sha256: string;
}

export interface ExportOptions {
  encoderId?: string;
  dimension?: number;
  manifestPath?: string;
}

export function readSentences(inputPath: string): string[] {
  const raw = fs.readFileSync(inputPath, "utf-8");
  const seen = new Set<string>();
  for (const line of raw.split("\n")) {
    const sentence = line.replace(/\r$/, "");
    if (sentence.trim().length > 0) {
      seen.add(sentence);
    }
  }
  return Array.from(seen).sort();
}

export function exportEmbeddings(
  inputPath: string,
  outputPath: string,
  options: ExportOptions = {}
): ExportManifest {
  const encoder: Encoder = makeEncoder(options.encoderId ?? "hash-v1", options.dimension ?? 256);
  const sentences = readSentences(inputPath);
  if (sentences.length === 0) {
    throw new Error(`no sentences in ${inputPath}`);
  }

  const lines = sentences.map((text) =>
    JSON.stringify({ text, vector: encoder.encode(text) })
  );
  fs.writeFileSync(outputPath, lines.join("\n") + "\n", "utf-8");

  const manifest: ExportManifest = {
    encoder: encoder.id,
    dimension: encoder.dimension,
    count: sentences.length,
    input_sha256: crypto.createHash("sha256").update(fs.readFileSync(inputPath)).digest("hex"),
  };
  const manifestPath = options.manifestPath ?? outputPath + ".manifest.json";
  fs.writeFileSync(manifestPath, JSON.stringify(manifest, null, 2) + "\n", "utf-8");
  return manifest;
}
