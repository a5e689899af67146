"""Batch entry points: ingest, tokenize, align, report, serve.

Exit codes: 0 success, 1 usage error, 2 data error. All output is UTF-8
with LF line endings and is deterministic for fixed inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .align import (
    EmptyPoolError,
    align_all,
    align_query,
    fit_pool_models,
    load_script_map,
    pool_by_tag,
)
from .analyze import (
    PolarityLexicon,
    ReportParams,
    SideBySideReport,
    compare_sites,
    load_lexicon,
)
from .ingest import (
    Corpus,
    IngestError,
    IngestStats,
    SourceSite,
    load_dcard_file,
    parse_weibo_page,
    read_corpus,
    write_corpus,
)
from .segment import SegmentError, load_dictionary, make_fmm_tokenizer, tokenize_corpus
from .serialize import report_to_json
from .vectorspace import VectorSpaceError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """argparse's default usage-error exit code is 2; this tool reserves 2
    for data errors, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _out(line: str) -> None:
    sys.stdout.write(line + "\n")


def _diag(line: str) -> None:
    sys.stderr.write(line + "\n")


class DataError(Exception):
    pass


class UsageError(Exception):
    pass


# --- ingest ----------------------------------------------------------------

def cmd_ingest(args) -> int:
    stats = IngestStats()
    posts = []
    for raw_path in args.inputs:
        path = Path(raw_path)
        try:
            if args.source == "dcard":
                posts.extend(load_dcard_file(path, stats=stats))
            else:
                html = path.read_text(encoding="utf-8")
                posts.extend(parse_weibo_page(html, stats=stats,
                                              id_prefix=path.stem))
        except (OSError, json.JSONDecodeError, IngestError) as exc:
            raise DataError(f"{path}: {exc}") from exc
    try:
        corpus = Corpus(posts)
    except IngestError as exc:
        raise DataError(str(exc)) from exc
    write_corpus(corpus, args.out)
    for note in stats.rejections:
        _diag(note)
    rejected = stats.rejected + stats.skipped_blocks
    _out(f"posts={stats.posts} rejected={rejected}")
    return EXIT_OK


# --- tokenize --------------------------------------------------------------

def cmd_tokenize(args) -> int:
    try:
        dictionary = load_dictionary(args.dict)
    except (OSError, SegmentError) as exc:
        raise DataError(f"{args.dict}: {exc}") from exc
    corpus = _read_corpus_or_die(args.corpus)
    if any(p.tokens for p in corpus.posts):
        _diag(f"warning: {args.corpus} already has tokens; overwriting")
    tokenized = tokenize_corpus(corpus, make_fmm_tokenizer(dictionary))
    write_corpus(tokenized, args.out)
    _out(f"tokenized={len(tokenized)}")
    return EXIT_OK


def _read_corpus_or_die(path) -> Corpus:
    try:
        return read_corpus(path)
    except (OSError, IngestError) as exc:
        raise DataError(f"{path}: {exc}") from exc


# --- align -----------------------------------------------------------------

def _pools_for_tag(args):
    script_map = None
    if getattr(args, "script_map", None):
        try:
            script_map = load_script_map(args.script_map)
        except (OSError, ValueError) as exc:
            raise DataError(f"{args.script_map}: {exc}") from exc
    dcard = _read_corpus_or_die(args.dcard)
    weibo = _read_corpus_or_die(args.weibo)
    return (pool_by_tag(dcard, args.tag, SourceSite.DCARD, script_map=script_map),
            pool_by_tag(weibo, args.tag, SourceSite.WEIBO, script_map=script_map))


def _pair_line(tag: str, weibo_id: str, pairs) -> str:
    # sims fixed at 6 decimals in the batch format
    rendered = ",".join(
        '{"dcard_id":%s,"sim":%.6f}' % (json.dumps(d, ensure_ascii=False), s)
        for d, s in pairs
    )
    return '{"tag":%s,"weibo_id":%s,"pairs":[%s]}' % (
        json.dumps(tag, ensure_ascii=False),
        json.dumps(weibo_id, ensure_ascii=False),
        rendered,
    )


def cmd_align(args) -> int:
    if args.all and args.threshold is None:
        raise UsageError("--all requires --threshold")
    if args.all and args.seed_given:
        _diag("warning: --seed is ignored with --all")
    dcard_pool, weibo_pool = _pools_for_tag(args)
    for pool, source in ((dcard_pool, "dcard"), (weibo_pool, "weibo")):
        if len(pool) == 0:
            raise DataError(f"tag {args.tag!r} has no posts on {source}")
    try:
        models = fit_pool_models(dcard_pool, k=args.lsi_k)
    except (VectorSpaceError, EmptyPoolError) as exc:
        raise DataError(str(exc)) from exc
    if args.all:
        for weibo_id, pairs in align_all(weibo_pool, models,
                                         threshold=args.threshold,
                                         top_n=args.top_n):
            _out(_pair_line(args.tag, weibo_id, pairs))
        return EXIT_OK
    result = align_query(args.tag, dcard_pool, weibo_pool, models,
                         seed=args.seed, top_n=args.top_n)
    from .serialize import post_to_json

    doc = {
        "tag": result.tag,
        "seed": result.seed,
        "anchor": post_to_json(result.anchor),
        "ranked": [
            {"post": post_to_json(p), "sim": round(s, 6)}
            for p, s in result.ranked
        ],
        "model_info": {
            "k_eff": result.model_info.k_eff,
            "dcard_pool_size": result.model_info.dcard_pool_size,
            "weibo_pool_size": result.model_info.weibo_pool_size,
            "warnings": list(result.model_info.warnings),
        },
    }
    _out(json.dumps(doc, ensure_ascii=False, separators=(",", ":")))
    return EXIT_OK


# --- report ----------------------------------------------------------------

def _render_text_report(report: SideBySideReport) -> list[str]:
    lines = [f"tag: {report.tag}", ""]
    header = ["site", "total_posts", "men", "women", "unknown",
              "avg_post_length", "naive_polarity"]
    rows = []
    for st in (report.dcard_stats, report.weibo_stats):
        rows.append([
            st.site.value, str(st.total_posts), str(st.men), str(st.women),
            str(st.unknown_gender), f"{st.avg_post_length:.1f}",
            f"{st.naive_polarity:.4f}",
        ])
    lines.extend(_columns([header] + rows))
    lines.append("")
    lines.append("frequency")
    freq_rows = [["#", "dcard", "n", "weibo", "n"]]
    d_entries = report.dcard_freq.entries
    w_entries = report.weibo_freq.entries
    for i in range(max(len(d_entries), len(w_entries))):
        d_tok, d_n = d_entries[i] if i < len(d_entries) else ("", "")
        w_tok, w_n = w_entries[i] if i < len(w_entries) else ("", "")
        freq_rows.append([str(i + 1), d_tok, str(d_n), w_tok, str(w_n)])
    lines.extend(_columns(freq_rows))
    lines.append("")
    lines.append(f"collocations (pivot: {report.pivot}, "
                 f"min_count: {report.dcard_colloc.min_count})")
    for site, table in (("dcard", report.dcard_colloc),
                        ("weibo", report.weibo_colloc)):
        lines.append(f"[{site}]")
        if not table.rows:
            lines.append("  (none)")
            continue
        colloc_rows = [[x, y, f"{v:.5f}"] for x, y, v in table.rows]
        lines.extend("  " + ln for ln in _columns(colloc_rows))
    return lines

def _columns(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
            for row in rows]


def cmd_report(args) -> int:
    dcard_pool, weibo_pool = _pools_for_tag(args)
    lexicon = PolarityLexicon({})
    if args.lexicon:
        try:
            lexicon = load_lexicon(args.lexicon)
        except (OSError, ValueError) as exc:
            raise DataError(f"{args.lexicon}: {exc}") from exc
    stopwords = None
    if args.stoplist:
        try:
            stoplist_text = Path(args.stoplist).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"{args.stoplist}: {exc}") from exc
        stopwords = {w.strip() for w in stoplist_text.splitlines()
                     if w.strip() and not w.startswith("#")}
    params = ReportParams(
        pivot=args.pivot if args.pivot is not None else args.tag,
        freq_top_n=args.top_n,
        colloc_top_n=args.top_n,
        min_count=args.min_count,
        polarity_mode=args.polarity_mode,
        stopwords=stopwords,
    )
    report = compare_sites(args.tag, dcard_pool, weibo_pool, lexicon, params)
    if args.format == "structured":
        _out(json.dumps(report_to_json(report), ensure_ascii=False,
                        separators=(",", ":")))
    else:
        for line in _render_text_report(report):
            _out(line)
    return EXIT_OK


# --- serve -----------------------------------------------------------------

def cmd_serve(args) -> int:
    import uvicorn

    from .service import build_state, create_app

    try:
        state = build_state(
            args.dcard, args.weibo,
            lexicon_path=args.lexicon,
            dict_dcard=args.dict_dcard,
            dict_weibo=args.dict_weibo,
            lsi_k=args.lsi_k,
            polarity_mode=args.polarity_mode,
        )
    except (OSError, IngestError, SegmentError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise DataError(f"--bind expects host:port, got {args.bind!r}")
    app = create_app(state, ui_dir=args.ui_dir)
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="topicalign",
                     description="Topic-pooled comparable corpus toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse source dumps into a corpus file")
    p.add_argument("--source", required=True, choices=["dcard", "weibo"])
    p.add_argument("--in", dest="inputs", required=True, nargs="+",
                   metavar="PATH", help="dump file(s) to parse")
    p.add_argument("--out", required=True, help="corpus file to write")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("tokenize", help="segment corpus text into tokens")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dict", required=True, help="dictionary file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("align", help="rank Dcard posts against a Weibo anchor")
    p.add_argument("--tag", required=True)
    p.add_argument("--dcard", required=True, help="tokenized Dcard corpus")
    p.add_argument("--weibo", required=True, help="tokenized Weibo corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top-n", type=int, default=10, dest="top_n")
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--all", action="store_true",
                   help="batch mode: pairs for every Weibo post in the pool")
    p.add_argument("--lsi-k", type=int, default=300, dest="lsi_k")
    p.add_argument("--script-map", default=None, dest="script_map",
                   help="per-character tag-bridging table (from<TAB>to)")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("report", help="side-by-side stats/frequency/collocations")
    p.add_argument("--tag", required=True)
    p.add_argument("--dcard", required=True)
    p.add_argument("--weibo", required=True)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--pivot", default=None,
                   help="collocation pivot token (default: the tag itself)")
    p.add_argument("--min-count", type=int, default=3, dest="min_count")
    p.add_argument("--top-n", type=int, default=10, dest="top_n")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.add_argument("--polarity-mode", choices=["post_mean", "token_mean"],
                   default="post_mean", dest="polarity_mode")
    p.add_argument("--stoplist", default=None,
                   help="optional stopword file for freq/colloc counting")
    p.add_argument("--script-map", default=None, dest="script_map",
                   help="per-character tag-bridging table (from<TAB>to)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the read-only HTTP service")
    p.add_argument("--dcard", required=True)
    p.add_argument("--weibo", required=True)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--dict-dcard", default=None, dest="dict_dcard")
    p.add_argument("--dict-weibo", default=None, dest="dict_weibo")
    p.add_argument("--lsi-k", type=int, default=300, dest="lsi_k")
    p.add_argument("--polarity-mode", choices=["post_mean", "token_mean"],
                   default="post_mean", dest="polarity_mode")
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--ui-dir", default=None, dest="ui_dir",
                   help="serve a static UI build from this directory at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is cmd_align:
        args.seed_given = "--seed" in argv
    try:
        return args.func(args)
    except UsageError as exc:
        _diag(f"error: {exc}")
        return EXIT_USAGE
    except DataError as exc:
        _diag(f"error: {exc}")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
