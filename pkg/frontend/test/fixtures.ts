// Fixture API responses shaped exactly like the service's data payloads.

import type { AlignmentData, CollocData, FreqData, StatsData } from "../src/api.js";

export const STATS: StatsData = {
  tag: "健身",
  dcard: {
    site: "dcard",
    total_posts: 623,
    men: 462,
    women: 161,
    unknown_gender: 0,
    avg_post_length: 128.8,
    naive_polarity: 0.0481,
  },
  weibo: {
    site: "weibo",
    total_posts: 725,
    men: 267,
    women: 458,
    unknown_gender: 0,
    avg_post_length: 51.8,
    naive_polarity: 0.0157,
  },
};

export const ALIGNMENT: AlignmentData = {
  tag: "健身",
  seed: 42,
  anchor: {
    id: "w007",
    source: "weibo",
    raw_text: "#健身#今天打卡",
    text: "健身今天打卡",
    tags: ["健身"],
    gender: "female",
    followers: 1234,
    screen_name: "卡卡",
    tokens: ["健身", "今天", "打卡"],
  },
  ranked: [
    {
      post: {
        id: "d001",
        source: "dcard",
        raw_text: "今天去健身房",
        text: "今天去健身房",
        tags: ["健身"],
        gender: "male",
        likes: 17,
        school: "台大",
        tokens: ["今天", "去", "健身房"],
      },
      similarity: 0.7071,
    },
    {
      post: {
        id: "d002",
        source: "dcard",
        raw_text: "健身好累",
        text: "健身好累",
        tags: ["健身"],
        gender: "female",
        tokens: ["健身", "好", "累"],
      },
      similarity: 0.3333,
    },
  ],
  model_info: {
    k_eff: 4,
    dcard_pool_size: 6,
    weibo_pool_size: 2,
    warnings: [],
  },
};

export const FREQ_DCARD: FreqData = {
  tag: "健身",
  site: "dcard",
  entries: [
    { token: "會", count: 757 },
    { token: "健身", count: 641 },
    { token: "想", count: 603 },
  ],
};

export const COLLOC_DCARD: CollocData = {
  tag: "健身",
  site: "dcard",
  pivot: "會",
  min_count: 3,
  rows: [
    { token1: "會", token2: "觸發", pmi: 5.12345 },
    { token1: "變笨", token2: "會", pmi: 4.5 },
  ],
};

export function collectNumbers(value: unknown, out: Set<string> = new Set()): Set<string> {
  if (typeof value === "number") {
    out.add(String(value));
  } else if (Array.isArray(value)) {
    for (const item of value) collectNumbers(item, out);
  } else if (value !== null && typeof value === "object") {
    for (const item of Object.values(value)) collectNumbers(item, out);
  }
  return out;
}

export function visibleText(html: string): string {
  return html.replace(/<[^>]*>/g, " ");
}
