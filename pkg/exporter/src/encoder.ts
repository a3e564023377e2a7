/**
 * Sentence encoders. The default is a deterministic feature-hashing encoder:
 * no model download, byte-stable output, identical strings always map to
 * identical unit vectors. Real neural encoders can be plugged in behind the
 * same interface where model access exists.
 */

export interface Encoder {
  /** Identifier recorded in the export manifest. */
  readonly id: string;
  readonly dimension: number;
  encode(sentence: string): number[];
}

const FNV_OFFSET = 0x811c9dc5;
const FNV_PRIME = 0x01000193;

function fnv1a(text: string): number {
  let hash = FNV_OFFSET;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, FNV_PRIME) >>> 0;
  }
  return hash >>> 0;
}

function tokens(sentence: string): string[] {
  const matched = sentence.toLowerCase().match(/[\p{L}\p{N}]+/gu);
  return matched ?? [];
}

/** Signed feature hashing over lowercased word tokens, L2-normalized. */
export class HashEncoder implements Encoder {
  readonly id: string;
  readonly dimension: number;

  constructor(dimension = 256) {
    if (!Number.isInteger(dimension) || dimension <= 0) {
      throw new Error(`dimension must be a positive integer, got ${dimension}`);
    }
    this.dimension = dimension;
    this.id = `hash-v1-d${dimension}`;
  }

  encode(sentence: string): number[] {
    const vector = new Array<number>(this.dimension).fill(0);
    for (const token of tokens(sentence)) {
      const index = fnv1a(token) % this.dimension;
      const sign = fnv1a(token + "#sign") % 2 === 0 ? 1 : -1;
      vector[index] += sign;
    }
    let norm = Math.hypot(...vector);
    if (norm === 0) {
      // token-free input (e.g. punctuation only): deterministic unit basis vector
      vector[fnv1a(sentence) % this.dimension] = 1;
      norm = 1;
    }
    return vector.map((v) => v / norm);
  }
}

export function makeEncoder(encoderId: string, dimension: number): Encoder {
  if (encoderId === "hash-v1") {
    return new HashEncoder(dimension);
  }
  throw new Error(`cannot load encoder "${encoderId}" (available: hash-v1)`);
}
