"""Read-only HTTP facade over tokenized corpora.

All state is loaded at startup and never mutated afterwards except an
append-only per-tag model cache, so responses are a pure function of
(startup data, query string). Every response body is a JSON envelope
{"ok": true, "data": ...} or {"ok": false, "error": {...}}.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .align import (
    EmptyPoolError,
    PoolModels,
    TopicPool,
    align_query,
    fit_pool_models,
    normalize_tag,
    pool_by_tag,
)
from .analyze import (
    PolarityLexicon,
    build_bigram_stats,
    collocations,
    frequency_list,
    load_lexicon,
    quick_stats,
)
from .ingest import Corpus, SourceSite, read_corpus
from .segment import load_dictionary, make_fmm_tokenizer, tokenize_corpus
from .serialize import (
    alignment_to_json,
    colloc_to_json,
    freq_to_json,
    stats_pair_to_json,
)
from .vectorspace import DegenerateMatrixError, EmptyCorpusError

DEFAULT_TOP_N = 10
DEFAULT_MIN_COUNT = 3


@dataclass
class TagEntry:
    tag: str
    dcard: int = 0
    weibo: int = 0


@dataclass
class ServiceState:
    dcard: Corpus
    weibo: Corpus
    lexicon: PolarityLexicon
    lsi_k: int = 300
    polarity_mode: str = "post_mean"
    _tags: dict[str, TagEntry] = field(default_factory=dict)
    _pools: dict[str, tuple[TopicPool, TopicPool]] = field(default_factory=dict)
    _models: dict[str, PoolModels] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def __post_init__(self) -> None:
        for corpus, attr in ((self.dcard, "dcard"), (self.weibo, "weibo")):
            for post in corpus.posts:
                for tag in post.tags:
                    key = normalize_tag(tag)
                    if not key:
                        continue
                    entry = self._tags.setdefault(key, TagEntry(tag=key))
                    setattr(entry, attr, getattr(entry, attr) + 1)

    def tags_with_prefix(self, prefix: str) -> list[TagEntry]:
        want = normalize_tag(prefix)
        keys = sorted(k for k in self._tags if k.startswith(want))
        return [self._tags[k] for k in keys]

    def knows_tag(self, tag: str) -> bool:
        return normalize_tag(tag) in self._tags

    def pools(self, tag: str) -> tuple[TopicPool, TopicPool]:
        key = normalize_tag(tag)
        with self._lock:
            if key not in self._pools:
                self._pools[key] = (
                    pool_by_tag(self.dcard, tag, SourceSite.DCARD),
                    pool_by_tag(self.weibo, tag, SourceSite.WEIBO),
                )
            return self._pools[key]

    def models(self, tag: str) -> PoolModels:
        key = normalize_tag(tag)
        dcard_pool, _ = self.pools(tag)
        with self._lock:
            if key not in self._models:
                self._models[key] = fit_pool_models(dcard_pool, k=self.lsi_k)
            return self._models[key]


def build_state(
    dcard_path,
    weibo_path,
    lexicon_path=None,
    dict_dcard=None,
    dict_weibo=None,
    lsi_k: int = 300,
    polarity_mode: str = "post_mean",
) -> ServiceState:
    """Load corpora (tokenizing them when dictionaries are supplied)."""
    dcard = read_corpus(dcard_path)
    weibo = read_corpus(weibo_path)
    if dict_dcard is not None:
        dcard = tokenize_corpus(dcard, make_fmm_tokenizer(load_dictionary(dict_dcard)))
    if dict_weibo is not None:
        weibo = tokenize_corpus(weibo, make_fmm_tokenizer(load_dictionary(dict_weibo)))
    lexicon = load_lexicon(lexicon_path) if lexicon_path else PolarityLexicon({})
    return ServiceState(dcard=dcard, weibo=weibo, lexicon=lexicon,
                        lsi_k=lsi_k, polarity_mode=polarity_mode)


def _ok(data) -> JSONResponse:
    return JSONResponse({"ok": True, "data": data})


def _err(status: int, code: str, message: str, **extra) -> JSONResponse:
    error = {"code": code, "message": message}
    error.update(extra)
    return JSONResponse({"ok": False, "error": error}, status_code=status)


class _BadParam(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


def _require(params, name: str) -> str:
    value = params.get(name)
    if value is None or value == "":
        raise _BadParam(f"missing required parameter: {name}")
    return value


def _int_param(params, name: str, default: int | None,
               minimum: int | None = None) -> int:
    raw = params.get(name)
    if raw is None or raw == "":
        if default is None:
            raise _BadParam(f"missing required parameter: {name}")
        return default
    try:
        value = int(raw)
    except ValueError:
        raise _BadParam(f"parameter {name} must be an integer, got {raw!r}")
    if minimum is not None and value < minimum:
        raise _BadParam(f"parameter {name} must be >= {minimum}")
    return value


def _site_param(params) -> SourceSite:
    raw = _require(params, "site")
    try:
        return SourceSite(raw)
    except ValueError:
        raise _BadParam(f"unknown site: {raw!r} (expected dcard or weibo)")


def create_app(state: ServiceState, ui_dir=None) -> FastAPI:
    app = FastAPI(title="topicalign", docs_url=None, redoc_url=None)
    # read-only API; allow a separately served UI to call it
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(_BadParam)
    async def bad_param_handler(request: Request, exc: _BadParam):
        return _err(400, "bad_request", exc.message)

    @app.get("/api/tags")
    def tags(request: Request):
        prefix = request.query_params.get("prefix", "")
        entries = state.tags_with_prefix(prefix)
        return _ok([{"tag": e.tag, "dcard": e.dcard, "weibo": e.weibo}
                    for e in entries])

    @app.get("/api/search")
    def search(request: Request):
        params = request.query_params
        tag = _require(params, "tag")
        seed = _int_param(params, "seed", default=0)
        top_n = _int_param(params, "top_n", default=DEFAULT_TOP_N, minimum=0)
        dcard_pool, weibo_pool = state.pools(tag)
        if len(dcard_pool) == 0 or len(weibo_pool) == 0:
            side = ("both" if len(dcard_pool) == 0 and len(weibo_pool) == 0
                    else "dcard" if len(dcard_pool) == 0 else "weibo")
            return _err(404, "tag_not_found",
                        f"tag {tag!r} has no posts on {side}", side=side)
        try:
            models = state.models(tag)
            result = align_query(tag, dcard_pool, weibo_pool, models,
                                 seed=seed, top_n=top_n)
        except (EmptyCorpusError, DegenerateMatrixError) as exc:
            return _err(400, "degenerate_pool", str(exc))
        except EmptyPoolError as exc:
            return _err(404, "tag_not_found", str(exc), side=exc.source.value)
        return _ok(alignment_to_json(result))

    @app.get("/api/stats")
    def stats(request: Request):
        tag = _require(request.query_params, "tag")
        if not state.knows_tag(tag):
            return _err(404, "tag_not_found", f"unknown tag: {tag!r}")
        dcard_pool, weibo_pool = state.pools(tag)
        return _ok(stats_pair_to_json(
            tag,
            quick_stats(dcard_pool, state.lexicon, state.polarity_mode),
            quick_stats(weibo_pool, state.lexicon, state.polarity_mode),
        ))

    @app.get("/api/freq")
    def freq(request: Request):
        params = request.query_params
        tag = _require(params, "tag")
        site = _site_param(params)
        top_n = _int_param(params, "top_n", default=DEFAULT_TOP_N, minimum=0)
        if not state.knows_tag(tag):
            return _err(404, "tag_not_found", f"unknown tag: {tag!r}")
        dcard_pool, weibo_pool = state.pools(tag)
        pool = dcard_pool if site == SourceSite.DCARD else weibo_pool
        return _ok(freq_to_json(tag, frequency_list(pool, top_n)))

    @app.get("/api/colloc")
    def colloc(request: Request):
        params = request.query_params
        tag = _require(params, "tag")
        site = _site_param(params)
        pivot = _require(params, "pivot")
        min_count = _int_param(params, "min_count", default=DEFAULT_MIN_COUNT,
                               minimum=1)
        top_n = _int_param(params, "top_n", default=DEFAULT_TOP_N, minimum=0)
        if not state.knows_tag(tag):
            return _err(404, "tag_not_found", f"unknown tag: {tag!r}")
        dcard_pool, weibo_pool = state.pools(tag)
        pool = dcard_pool if site == SourceSite.DCARD else weibo_pool
        table = collocations(build_bigram_stats(pool), pivot, min_count, top_n)
        return _ok(colloc_to_json(tag, site.value, table))

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
