#!/usr/bin/env node
import { exportEmbeddings } from "./exporter";

function usage(): never {
  console.error(
    "usage: embed-exporter <sentences.txt> <table.jsonl> [--dim N] [--encoder ID] [--manifest PATH]"
  );
  process.exit(2);
}

function main(): void {
  const argv = process.argv.slice(2);
  const positional: string[] = [];
  let dimension = 256;
  let encoderId = "hash-v1";
  let manifestPath: string | undefined;

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--dim") {
      dimension = Number(argv[++i]);
    } else if (arg === "--encoder") {
      encoderId = argv[++i];
    } else if (arg === "--manifest") {
      manifestPath = argv[++i];
    } else if (arg === "--help" || arg === "-h") {
      usage();
    } else if (arg.startsWith("--")) {
      console.error(`unknown option ${arg}`);
      usage();
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 2 || !Number.isFinite(dimension)) {
    usage();
  }

  try {
    const manifest = exportEmbeddings(positional[0], positional[1], {
      encoderId,
      dimension,
      manifestPath,
    });
    console.log(JSON.stringify(manifest));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
}

main();
