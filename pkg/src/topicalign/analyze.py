"""Per-tag contrastive analysis: quick stats, frequency lists, PMI bigrams.

All functions are pure over tokenized topic pools. Nothing is stopword-
filtered by default; counting functions accept an optional stoplist for
exploration.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .align import TopicPool
from .ingest import Gender, SourceSite


@dataclass(frozen=True)
class PolarityLexicon:
    scores: dict[str, float]

    def __len__(self) -> int:
        return len(self.scores)


def load_lexicon(path) -> PolarityLexicon:
    """Tab-separated token and signed decimal score, '#' comment lines."""
    scores: dict[str, float] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{line_no}: expected 'token<TAB>score'")
        token, score = parts[0].strip(), parts[1].strip()
        if not token:
            raise ValueError(f"{path}:{line_no}: empty token")
        scores[token] = float(score)
    return PolarityLexicon(scores=scores)


def polarity(tokens, lexicon: PolarityLexicon) -> float:
    """Mean lexicon score over the tokens; unmatched tokens score 0."""
    tokens = list(tokens)
    if not tokens:
        return 0.0
    return sum(lexicon.scores.get(t, 0.0) for t in tokens) / len(tokens)


@dataclass(frozen=True)
class TagStats:
    site: SourceSite
    total_posts: int
    men: int
    women: int
    unknown_gender: int
    avg_post_length: float  # characters of cleaned text
    naive_polarity: float


def quick_stats(pool: TopicPool, lexicon: PolarityLexicon,
                polarity_mode: str = "post_mean") -> TagStats:
    """Table-style overview of one pool.

    naive_polarity defaults to the mean over posts of each post's mean token
    score ("post_mean"); "token_mean" instead averages the lexicon score over
    every token in the pool.
    """
    if polarity_mode not in ("post_mean", "token_mean"):
        raise ValueError(f"unknown polarity mode: {polarity_mode}")
    n = len(pool)
    if n == 0:
        return TagStats(pool.source, 0, 0, 0, 0, 0.0, 0.0)
    men = sum(1 for p in pool.posts if p.gender == Gender.MALE)
    women = sum(1 for p in pool.posts if p.gender == Gender.FEMALE)
    avg_len = sum(len(p.text) for p in pool.posts) / n
    if polarity_mode == "post_mean":
        pol = sum(polarity(p.tokens, lexicon) for p in pool.posts) / n
    else:
        all_tokens = [t for p in pool.posts for t in p.tokens]
        pol = polarity(all_tokens, lexicon)
    return TagStats(
        site=pool.source,
        total_posts=n,
        men=men,
        women=women,
        unknown_gender=n - men - women,
        avg_post_length=avg_len,
        naive_polarity=pol,
    )


@dataclass(frozen=True)
class FrequencyList:
    site: SourceSite
    entries: list[tuple[str, int]]  # descending count, codepoint tie-break


def frequency_list(pool: TopicPool, top_n: int | None = None,
                   stopwords: set[str] | None = None) -> FrequencyList:
    counts = Counter()
    for post in pool.posts:
        for tok in post.tokens:
            if stopwords and tok in stopwords:
                continue
            counts[tok] += 1
    entries = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    if top_n is not None:
        entries = entries[: max(0, top_n)]
    return FrequencyList(site=pool.source, entries=entries)


@dataclass(frozen=True)
class BigramStats:
    total_tokens: int                     # T
    total_bigrams: int                    # B = sum over posts of max(0, len-1)
    unigrams: dict[str, int]              # c(x)
    bigrams: dict[tuple[str, str], int]   # c(x, y), adjacent within one post


def build_bigram_stats(pool: TopicPool,
                       stopwords: set[str] | None = None) -> BigramStats:
    """Adjacent token pairs within each post; pairs never cross posts."""
    unigrams = Counter()
    bigrams = Counter()
    total_tokens = 0
    total_bigrams = 0
    for post in pool.posts:
        tokens = post.tokens
        if stopwords:
            tokens = [t for t in tokens if t not in stopwords]
        total_tokens += len(tokens)
        total_bigrams += max(0, len(tokens) - 1)
        unigrams.update(tokens)
        bigrams.update(zip(tokens, tokens[1:]))
    return BigramStats(
        total_tokens=total_tokens,
        total_bigrams=total_bigrams,
        unigrams=dict(unigrams),
        bigrams=dict(bigrams),
    )


@dataclass(frozen=True)
class CollocationTable:
    pivot: str
    min_count: int
    rows: list[tuple[str, str, float]]  # (token1, token2, pmi) descending


def pmi(stats: BigramStats, x: str, y: str) -> float:
    """log2 of observed bigram probability over the independence baseline."""
    cxy = stats.bigrams.get((x, y), 0)
    if cxy == 0:
        raise ValueError(f"bigram ({x!r}, {y!r}) unseen")
    t = stats.total_tokens
    b = stats.total_bigrams
    return math.log2((cxy / b) / ((stats.unigrams[x] / t) * (stats.unigrams[y] / t)))


def collocations(stats: BigramStats, pivot: str, min_count: int = 3,
                 top_n: int | None = None) -> CollocationTable:
    """PMI-ranked bigrams containing the pivot on either side.

    Bigrams below min_count are dropped; ties break on (token1, token2)
    codepoint order. An unseen pivot yields an empty table.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    rows = []
    for (x, y), c in stats.bigrams.items():
        if c < min_count or (x != pivot and y != pivot):
            continue
        rows.append((x, y, pmi(stats, x, y)))
    rows.sort(key=lambda r: (-r[2], r[0], r[1]))
    if top_n is not None:
        rows = rows[: max(0, top_n)]
    return CollocationTable(pivot=pivot, min_count=min_count, rows=rows)


@dataclass(frozen=True)
class SideBySideReport:
    tag: str
    pivot: str
    dcard_stats: TagStats
    weibo_stats: TagStats
    dcard_freq: FrequencyList
    weibo_freq: FrequencyList
    dcard_colloc: CollocationTable
    weibo_colloc: CollocationTable


@dataclass(frozen=True)
class ReportParams:
    pivot: str
    freq_top_n: int | None = None
    colloc_top_n: int | None = None
    min_count: int = 3
    polarity_mode: str = "post_mean"
    stopwords: set[str] | None = field(default=None, hash=False)


def compare_sites(tag: str, dcard_pool: TopicPool, weibo_pool: TopicPool,
                  lexicon: PolarityLexicon,
                  params: ReportParams) -> SideBySideReport:
    """Pure composition of the per-pool analyses for a side-by-side view."""
    def colloc(pool: TopicPool) -> CollocationTable:
        stats = build_bigram_stats(pool, stopwords=params.stopwords)
        return collocations(stats, params.pivot, params.min_count,
                            params.colloc_top_n)

    return SideBySideReport(
        tag=tag,
        pivot=params.pivot,
        dcard_stats=quick_stats(dcard_pool, lexicon, params.polarity_mode),
        weibo_stats=quick_stats(weibo_pool, lexicon, params.polarity_mode),
        dcard_freq=frequency_list(dcard_pool, params.freq_top_n, params.stopwords),
        weibo_freq=frequency_list(weibo_pool, params.freq_top_n, params.stopwords),
        dcard_colloc=colloc(dcard_pool),
        weibo_colloc=colloc(weibo_pool),
    )
