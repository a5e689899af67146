"""Topic pooling and cross-source alignment.

A topic pool is the per-source subset of posts carrying a tag (exact match
after trim + casefold). Weighting/LSI models are always fitted on the Dcard
pool; a seeded Weibo anchor is projected through them and the Dcard pool is
ranked by cosine similarity against it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ingest import Corpus, Post, SourceSite
from .vectorspace import (
    LsiModel,
    SimilarityIndex,
    TfIdfModel,
    build_index,
    build_vocabulary,
    fit_lsi,
    fit_tfidf,
    project_lsi,
    rank_by_similarity,
    to_bow,
    transform_tfidf,
)


class AlignError(Exception):
    pass


class EmptyPoolError(AlignError):
    def __init__(self, source: SourceSite):
        super().__init__(f"no posts for this tag on {source.value}")
        self.source = source


def normalize_tag(tag: str) -> str:
    return tag.strip().casefold()


@dataclass(frozen=True)
class TopicPool:
    tag: str
    source: SourceSite
    posts: list[Post]

    @property
    def post_ids(self) -> list[str]:
        return [p.id for p in self.posts]

    def __len__(self) -> int:
        return len(self.posts)


def pool_by_tag(corpus: Corpus, tag: str, source: SourceSite,
                script_map: dict[str, str] | None = None) -> TopicPool:
    """Posts from `source` whose normalized tag set contains the query tag.

    `script_map` optionally maps characters before comparison (e.g. a
    simplified/traditional bridge); by default tags must match natively.
    """
    want = _map_chars(normalize_tag(tag), script_map)
    posts = [
        p for p in corpus.posts
        if p.source == source
        and any(_map_chars(normalize_tag(t), script_map) == want for t in p.tags)
    ]
    return TopicPool(tag=tag, source=source, posts=posts)


def _map_chars(s: str, script_map: dict[str, str] | None) -> str:
    if not script_map:
        return s
    return "".join(script_map.get(c, c) for c in s)


def load_script_map(path) -> dict[str, str]:
    """Per-character tag-bridging table: "from<TAB>to" per line, '#' comments."""
    from pathlib import Path

    mapping: dict[str, str] = {}
    for line_no, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or len(parts[0]) != 1 or len(parts[1]) != 1:
            raise ValueError(f"{path}:{line_no}: expected 'char<TAB>char'")
        mapping[parts[0]] = parts[1]
    return mapping


# --- Seeded anchor choice ------------------------------------------------
#
# splitmix64: the 64-bit seed is advanced by the golden-gamma constant and
# the result is mixed through two xor-shift multiplies. Pure integer math,
# so the same seed picks the same anchor on any platform.

_MASK64 = (1 << 64) - 1


def splitmix64(seed: int) -> int:
    z = (seed + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def anchor_index(seed: int, pool_size: int) -> int:
    if pool_size < 1:
        raise ValueError("pool_size must be >= 1")
    return splitmix64(seed & _MASK64) % pool_size


# --- Models fitted on one Dcard pool --------------------------------------

@dataclass(frozen=True)
class PoolModels:
    tfidf: TfIdfModel
    lsi: LsiModel
    index: SimilarityIndex
    warnings: tuple[str, ...] = ()


def fit_pool_models(dcard_pool: TopicPool, k: int = 300) -> PoolModels:
    """vocabulary -> tf-idf -> LSI -> similarity index, all from one pool."""
    if len(dcard_pool) == 0:
        raise EmptyPoolError(SourceSite.DCARD)
    warnings = []
    if len(dcard_pool) < 3:
        warnings.append(f"dcard pool has only {len(dcard_pool)} posts; "
                        "latent space collapses accordingly")
    vocab = build_vocabulary([p.tokens for p in dcard_pool.posts])
    bows = [to_bow(p.tokens, vocab) for p in dcard_pool.posts]
    tfidf = fit_tfidf(bows, vocab)
    columns = [transform_tfidf(b, tfidf) for b in bows]
    lsi = fit_lsi(columns, vocab.size, k)
    refs = [(p.id, p.source.value) for p in dcard_pool.posts]
    index = build_index(columns, refs, lsi)
    return PoolModels(tfidf=tfidf, lsi=lsi, index=index,
                      warnings=tuple(warnings))


def project_post(post: Post, models: PoolModels):
    bow = to_bow(post.tokens, models.tfidf.vocab)
    weighted = transform_tfidf(bow, models.tfidf)
    return project_lsi(weighted, models.lsi)


@dataclass(frozen=True)
class ModelInfo:
    k_eff: int
    dcard_pool_size: int
    weibo_pool_size: int
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class AlignmentResult:
    tag: str
    seed: int
    anchor: Post
    ranked: list[tuple[Post, float]]  # descending similarity
    model_info: ModelInfo


def align_query(tag: str, dcard_pool: TopicPool, weibo_pool: TopicPool,
                models: PoolModels, seed: int, top_n: int) -> AlignmentResult:
    """Pick a seeded Weibo anchor and rank the Dcard pool against it."""
    if len(dcard_pool) == 0:
        raise EmptyPoolError(SourceSite.DCARD)
    if len(weibo_pool) == 0:
        raise EmptyPoolError(SourceSite.WEIBO)
    anchor = weibo_pool.posts[anchor_index(seed, len(weibo_pool))]
    query = project_post(anchor, models)
    ranked_refs = rank_by_similarity(query, models.index, top_n)
    by_id = {p.id: p for p in dcard_pool.posts}
    ranked = [(by_id[ref[0]], sim) for ref, sim in ranked_refs]
    info = ModelInfo(
        k_eff=models.lsi.k_eff,
        dcard_pool_size=len(dcard_pool),
        weibo_pool_size=len(weibo_pool),
        warnings=models.warnings,
    )
    return AlignmentResult(tag=tag, seed=seed, anchor=anchor, ranked=ranked,
                           model_info=info)


def align_all(weibo_pool: TopicPool, models: PoolModels, threshold: float,
              top_n: int) -> list[tuple[str, list[tuple[str, float]]]]:
    """For every Weibo post: its top_n Dcard ids with similarity >= threshold.

    Output keeps the Weibo pool order; posts with no qualifying pair get an
    empty list.
    """
    if not -1.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [-1, 1]")
    out = []
    for post in weibo_pool.posts:
        query = project_post(post, models)
        ranked = rank_by_similarity(query, models.index, top_n)
        pairs = [(ref[0], sim) for ref, sim in ranked if sim >= threshold]
        out.append((post.id, pairs))
    return out
