// Typed client for the read-only corpus service. Every endpoint returns a
// JSON envelope {ok: true, data} | {ok: false, error}.

export interface TagEntry {
  tag: string;
  dcard: number;
  weibo: number;
}

export interface PostRecord {
  id: string;
  source: "dcard" | "weibo";
  raw_text: string;
  text: string;
  tags: string[];
  gender: "male" | "female" | "unknown";
  created_at?: string;
  likes?: number;
  comments?: number;
  school?: string;
  department?: string;
  followers?: number;
  screen_name?: string;
  tokens: string[];
}

export interface RankedPair {
  post: PostRecord;
  similarity: number;
}

export interface AlignmentData {
  tag: string;
  seed: number;
  anchor: PostRecord;
  ranked: RankedPair[];
  model_info: {
    k_eff: number;
    dcard_pool_size: number;
    weibo_pool_size: number;
    warnings: string[];
  };
}

export interface SiteStats {
  site: "dcard" | "weibo";
  total_posts: number;
  men: number;
  women: number;
  unknown_gender: number;
  avg_post_length: number;
  naive_polarity: number;
}

export interface StatsData {
  tag: string;
  dcard: SiteStats;
  weibo: SiteStats;
}

export interface FreqData {
  tag: string;
  site: string;
  entries: { token: string; count: number }[];
}

export interface CollocData {
  tag: string;
  site: string;
  pivot: string;
  min_count: number;
  rows: { token1: string; token2: string; pmi: number }[];
}

export interface ApiError {
  code: string;
  message: string;
  side?: string;
}

export type Envelope<T> =
  | { ok: true; data: T }
  | { ok: false; error: ApiError };

export interface QueryParams {
  tag: string;
  seed: number;
  pivot: string;
  topN: number;
}

const enc = encodeURIComponent;

export function searchUrl(base: string, q: QueryParams): string {
  return `${base}/api/search?tag=${enc(q.tag)}&seed=${q.seed}&top_n=${q.topN}`;
}

export function statsUrl(base: string, tag: string): string {
  return `${base}/api/stats?tag=${enc(tag)}`;
}

export function freqUrl(base: string, tag: string, site: string, topN: number): string {
  return `${base}/api/freq?tag=${enc(tag)}&site=${site}&top_n=${topN}`;
}

export function collocUrl(base: string, tag: string, site: string, pivot: string,
                          topN: number): string {
  return `${base}/api/colloc?tag=${enc(tag)}&site=${site}&pivot=${enc(pivot)}` +
    `&min_count=3&top_n=${topN}`;
}

export async function getJson<T>(url: string,
                                 fetcher: typeof fetch = fetch): Promise<Envelope<T>> {
  const resp = await fetcher(url);
  return (await resp.json()) as Envelope<T>;
}
