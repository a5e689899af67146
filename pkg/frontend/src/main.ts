// DOM glue: URL-driven view state, one generation-checked fetch cycle per
// query, panels rendered from the pure functions in render.ts.

import {
  AlignmentData,
  CollocData,
  Envelope,
  FreqData,
  QueryParams,
  StatsData,
  collocUrl,
  freqUrl,
  getJson,
  searchUrl,
  statsUrl,
} from "./api.js";
import {
  DEFAULT_TOP_N,
  QueryGeneration,
  decodeParams,
  encodeParams,
  randomSeed,
} from "./state.js";
import {
  renderAlignment,
  renderColloc,
  renderError,
  renderFreq,
  renderNetworkFailure,
  renderStats,
} from "./render.js";

const BASE = "";
const generations = new QueryGeneration();

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function currentParams(): QueryParams | null {
  return decodeParams(window.location.search);
}

function pushParams(q: QueryParams): void {
  const qs = encodeParams(q);
  window.history.replaceState(null, "", `${window.location.pathname}?${qs}`);
}

async function panel<T>(
  url: string,
  target: HTMLElement,
  generation: number,
  render: (data: T) => string,
  context: string,
): Promise<void> {
  let body: Envelope<T>;
  try {
    body = await getJson<T>(url);
  } catch {
    if (generations.isCurrent(generation)) {
      target.insertAdjacentHTML("afterbegin", renderNetworkFailure(context));
    }
    return;
  }
  if (!generations.isCurrent(generation)) return; // superseded query
  target.innerHTML = body.ok ? render(body.data) : renderError(body.error, context);
}

function runQuery(q: QueryParams): void {
  pushParams(q);
  (el("tag-input") as HTMLInputElement).value = q.tag;
  (el("seed-input") as HTMLInputElement).value = String(q.seed);
  el("pivot-label").textContent = q.pivot;
  const generation = generations.next();

  void panel<AlignmentData>(searchUrl(BASE, q), el("alignment"), generation,
    renderAlignment, "alignment");
  void panel<StatsData>(statsUrl(BASE, q.tag), el("stats"), generation,
    renderStats, "stats");
  void panel<FreqData>(freqUrl(BASE, q.tag, "dcard", q.topN), el("freq-dcard"),
    generation, renderFreq, "dcard frequency");
  void panel<FreqData>(freqUrl(BASE, q.tag, "weibo", q.topN), el("freq-weibo"),
    generation, renderFreq, "weibo frequency");
  refreshColloc(q, generation);
}

function refreshColloc(q: QueryParams, generation?: number): void {
  const gen = generation ?? generations.next();
  void panel<CollocData>(collocUrl(BASE, q.tag, "dcard", q.pivot, q.topN),
    el("colloc-dcard"), gen, renderColloc, "dcard collocations");
  void panel<CollocData>(collocUrl(BASE, q.tag, "weibo", q.pivot, q.topN),
    el("colloc-weibo"), gen, renderColloc, "weibo collocations");
}

function readForm(): QueryParams {
  const prev = currentParams();
  const tag = (el("tag-input") as HTMLInputElement).value.trim();
  const seedRaw = (el("seed-input") as HTMLInputElement).value.trim();
  const seed = seedRaw === "" ? 0 : Math.max(0, Number.parseInt(seedRaw, 10) || 0);
  const pivot = prev && prev.tag === tag ? prev.pivot : tag;
  const topN = prev && prev.tag === tag ? prev.topN : DEFAULT_TOP_N;
  return { tag, seed, pivot, topN };
}

function wireEvents(): void {
  el("search-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const q = readForm();
    if (q.tag) runQuery(q);
  });

  el("reroll").addEventListener("click", () => {
    const q = readForm();
    if (q.tag) runQuery({ ...q, seed: randomSeed() });
  });

  el("load-more").addEventListener("click", () => {
    const q = currentParams();
    if (q) runQuery({ ...q, topN: q.topN + DEFAULT_TOP_N });
  });

  // a click on any frequency token makes it the collocation pivot
  for (const side of ["freq-dcard", "freq-weibo"]) {
    el(side).addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      const token = target.getAttribute("data-token");
      if (!token) return;
      event.preventDefault();
      const q = currentParams();
      if (!q) return;
      const next = { ...q, pivot: token };
      pushParams(next);
      el("pivot-label").textContent = token;
      refreshColloc(next);
    });
  }
}

document.addEventListener("DOMContentLoaded", () => {
  wireEvents();
  const q = currentParams();
  if (q) runQuery(q);
});
