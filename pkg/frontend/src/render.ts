// Pure HTML-string renderers. The UI never computes on corpus data: every
// number below is interpolated verbatim (String(x)) from an API response,
// so a screenshot can be traced byte-for-byte back to the service.

import type {
  AlignmentData,
  ApiError,
  CollocData,
  FreqData,
  PostRecord,
  SiteStats,
  StatsData,
} from "./api.js";

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function statsRow(stats: SiteStats): string {
  return (
    `<tr><th>${escapeHtml(stats.site)}</th>` +
    `<td>${stats.total_posts}</td><td>${stats.men}</td><td>${stats.women}</td>` +
    `<td>${stats.unknown_gender}</td><td>${stats.avg_post_length}</td>` +
    `<td>${stats.naive_polarity}</td></tr>`
  );
}

export function renderStats(data: StatsData): string {
  return (
    `<table class="stats-table"><thead><tr>` +
    `<th>site</th><th>total posts</th><th>men</th><th>women</th>` +
    `<th>unknown</th><th>avg. post length</th><th>naive polarity</th>` +
    `</tr></thead><tbody>` +
    statsRow(data.dcard) +
    statsRow(data.weibo) +
    `</tbody></table>`
  );
}

function postMeta(post: PostRecord): string {
  const bits: string[] = [escapeHtml(post.id), escapeHtml(post.gender)];
  if (post.screen_name) bits.push(escapeHtml(post.screen_name));
  if (post.school) bits.push(escapeHtml(post.school));
  if (post.department) bits.push(escapeHtml(post.department));
  if (post.created_at) bits.push(escapeHtml(post.created_at));
  if (post.likes !== undefined) bits.push(`likes ${post.likes}`);
  if (post.comments !== undefined) bits.push(`comments ${post.comments}`);
  if (post.followers !== undefined) bits.push(`followers ${post.followers}`);
  return bits.join(" · ");
}

export function renderAlignment(data: AlignmentData): string {
  const info = data.model_info;
  const warnings = info.warnings.length
    ? `<div class="warnings">${info.warnings.map(escapeHtml).join("<br>")}</div>`
    : "";
  const ranked = data.ranked
    .map(
      (pair) =>
        `<li class="pair"><span class="sim">${pair.similarity}</span>` +
        `<span class="text">${escapeHtml(pair.post.text)}</span>` +
        `<span class="meta">${postMeta(pair.post)}</span></li>`,
    )
    .join("");
  return (
    `<div class="anchor"><h3>Weibo anchor (seed ${data.seed})</h3>` +
    `<p class="text">${escapeHtml(data.anchor.text)}</p>` +
    `<p class="meta">${postMeta(data.anchor)}</p></div>` +
    warnings +
    `<p class="meta">latent dims ${info.k_eff} · dcard pool ` +
    `${info.dcard_pool_size} · weibo pool ${info.weibo_pool_size}</p>` +
    `<ol class="ranked">${ranked}</ol>`
  );
}

export function renderFreq(data: FreqData): string {
  const rows = data.entries
    .map(
      (e) =>
        `<tr><td><a href="#" class="token" data-token="${escapeHtml(e.token)}">` +
        `${escapeHtml(e.token)}</a></td><td>${e.count}</td></tr>`,
    )
    .join("");
  return (
    `<table class="freq-table"><thead><tr><th>token</th><th>n</th></tr>` +
    `</thead><tbody>${rows}</tbody></table>`
  );
}

export function renderColloc(data: CollocData): string {
  if (data.rows.length === 0) {
    return `<p class="empty">no collocations for ${escapeHtml(data.pivot)}` +
      ` (min count ${data.min_count})</p>`;
  }
  const rows = data.rows
    .map(
      (r) =>
        `<tr><td>${escapeHtml(r.token1)}</td><td>${escapeHtml(r.token2)}</td>` +
        `<td>${r.pmi}</td></tr>`,
    )
    .join("");
  return (
    `<table class="colloc-table"><thead><tr>` +
    `<th>token 1</th><th>token 2</th><th>pmi</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderError(err: ApiError, context: string): string {
  const where = err.side ? ` on ${escapeHtml(err.side)}` : "";
  if (err.code === "tag_not_found") {
    return `<p class="error">tag not found${where}</p>`;
  }
  return `<p class="error">${escapeHtml(context)}: ${escapeHtml(err.message)}</p>`;
}

export function renderNetworkFailure(context: string): string {
  return `<p class="error">network failure while loading ` +
    `${escapeHtml(context)}; previous results kept</p>`;
}
