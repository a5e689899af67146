// View state lives in the URL query string so every view is shareable and
// reproducible; in-flight queries carry a generation number and only the
// latest generation is allowed to render.

import type { QueryParams } from "./api.js";

export const DEFAULT_TOP_N = 10;

export function encodeParams(q: QueryParams): string {
  const params = new URLSearchParams();
  params.set("tag", q.tag);
  params.set("seed", String(q.seed));
  if (q.pivot && q.pivot !== q.tag) params.set("pivot", q.pivot);
  if (q.topN !== DEFAULT_TOP_N) params.set("top_n", String(q.topN));
  return params.toString();
}

export function decodeParams(query: string): QueryParams | null {
  const params = new URLSearchParams(query);
  const tag = params.get("tag");
  if (!tag) return null;
  const seed = parseIntOr(params.get("seed"), 0);
  const topN = parseIntOr(params.get("top_n"), DEFAULT_TOP_N);
  return { tag, seed, pivot: params.get("pivot") ?? tag, topN };
}

function parseIntOr(raw: string | null, fallback: number): number {
  if (raw === null) return fallback;
  const n = Number.parseInt(raw, 10);
  return Number.isFinite(n) && n >= 0 ? n : fallback;
}

// Monotone counter; a response may render only if its generation is still
// the newest one issued. Rapid re-queries can therefore never interleave
// panels from different tags.
export class QueryGeneration {
  private current = 0;

  next(): number {
    this.current += 1;
    return this.current;
  }

  isCurrent(generation: number): boolean {
    return generation === this.current;
  }
}

export function randomSeed(rng: () => number = Math.random): number {
  return Math.floor(rng() * 0x7fffffff);
}
