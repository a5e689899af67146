import { describe, expect, it } from "vitest";

import { collocUrl, freqUrl, searchUrl, statsUrl } from "../src/api.js";
import {
  DEFAULT_TOP_N,
  QueryGeneration,
  decodeParams,
  encodeParams,
  randomSeed,
} from "../src/state.js";

describe("URL view state", () => {
  it("round-trips tag/seed/pivot/top_n", () => {
    const q = { tag: "減肥", seed: 42, pivot: "吃", topN: 30 };
    expect(decodeParams(encodeParams(q))).toEqual(q);
  });

  it("omits defaults and restores them on decode", () => {
    const q = { tag: "健身", seed: 7, pivot: "健身", topN: DEFAULT_TOP_N };
    const encoded = encodeParams(q);
    expect(encoded).not.toContain("pivot");
    expect(encoded).not.toContain("top_n");
    expect(decodeParams(encoded)).toEqual(q);
  });

  it("returns null without a tag and falls back on bad numbers", () => {
    expect(decodeParams("seed=5")).toBeNull();
    const decoded = decodeParams("tag=x&seed=oops&top_n=-4");
    expect(decoded).toEqual({ tag: "x", seed: 0, pivot: "x", topN: DEFAULT_TOP_N });
  });
});

describe("query superseding", () => {
  it("only the newest generation may render", () => {
    const g = new QueryGeneration();
    const first = g.next();
    const second = g.next();
    expect(g.isCurrent(first)).toBe(false);
    expect(g.isCurrent(second)).toBe(true);
    const third = g.next();
    expect(g.isCurrent(second)).toBe(false);
    expect(g.isCurrent(third)).toBe(true);
  });

  it("a stale response resolving late is discarded", async () => {
    const g = new QueryGeneration();
    const rendered: string[] = [];
    const request = async (tag: string, gen: number, delayMs: number) => {
      await new Promise((resolve) => setTimeout(resolve, delayMs));
      if (g.isCurrent(gen)) rendered.push(tag);
    };
    // first query is slow, second is fast: panels must show only the second
    const slow = request("old-tag", g.next(), 20);
    const fast = request("new-tag", g.next(), 1);
    await Promise.all([slow, fast]);
    expect(rendered).toEqual(["new-tag"]);
  });
});

describe("api urls", () => {
  it("encodes CJK tags and pivots", () => {
    expect(searchUrl("", { tag: "健身", seed: 3, pivot: "健身", topN: 5 }))
      .toBe(`/api/search?tag=${encodeURIComponent("健身")}&seed=3&top_n=5`);
    expect(statsUrl("http://h", "減肥"))
      .toBe(`http://h/api/stats?tag=${encodeURIComponent("減肥")}`);
    expect(freqUrl("", "減肥", "weibo", 8))
      .toContain("site=weibo&top_n=8");
    const colloc = collocUrl("", "減肥", "dcard", "吃", 6);
    expect(colloc).toContain(`pivot=${encodeURIComponent("吃")}`);
    expect(colloc).toContain("min_count=3");
  });
});

describe("seed re-roll", () => {
  it("derives a bounded non-negative integer from the rng", () => {
    expect(randomSeed(() => 0)).toBe(0);
    expect(randomSeed(() => 0.999999999)).toBeLessThanOrEqual(0x7fffffff);
    expect(Number.isInteger(randomSeed(() => 0.5))).toBe(true);
  });
});
