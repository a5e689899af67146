"""JSON shapes shared by the HTTP service and the CLI's structured output.

Machine-facing floats carry fixed presentation precision: polarity and
similarity round to 4 decimals, average post length to 4, PMI to 5. The
library itself always computes at full precision; rounding happens only
here, so the two surfaces stay byte-compatible with each other.
"""

from __future__ import annotations

from .align import AlignmentResult
from .analyze import CollocationTable, FrequencyList, SideBySideReport, TagStats
from .ingest import Post, post_to_record

POLARITY_DECIMALS = 4
SIMILARITY_DECIMALS = 4
AVG_LENGTH_DECIMALS = 4
PMI_DECIMALS = 5


def stats_to_json(stats: TagStats) -> dict:
    return {
        "site": stats.site.value,
        "total_posts": stats.total_posts,
        "men": stats.men,
        "women": stats.women,
        "unknown_gender": stats.unknown_gender,
        "avg_post_length": round(stats.avg_post_length, AVG_LENGTH_DECIMALS),
        "naive_polarity": round(stats.naive_polarity, POLARITY_DECIMALS),
    }


def freq_to_json(tag: str, freq: FrequencyList) -> dict:
    return {
        "tag": tag,
        "site": freq.site.value,
        "entries": [{"token": t, "count": c} for t, c in freq.entries],
    }


def colloc_to_json(tag: str, site: str, table: CollocationTable) -> dict:
    return {
        "tag": tag,
        "site": site,
        "pivot": table.pivot,
        "min_count": table.min_count,
        "rows": [
            {"token1": x, "token2": y, "pmi": round(v, PMI_DECIMALS)}
            for x, y, v in table.rows
        ],
    }


def stats_pair_to_json(tag: str, dcard: TagStats, weibo: TagStats) -> dict:
    return {
        "tag": tag,
        "dcard": stats_to_json(dcard),
        "weibo": stats_to_json(weibo),
    }


def post_to_json(post: Post) -> dict:
    return post_to_record(post)


def alignment_to_json(result: AlignmentResult) -> dict:
    return {
        "tag": result.tag,
        "seed": result.seed,
        "anchor": post_to_json(result.anchor),
        "ranked": [
            {"post": post_to_json(p), "similarity": round(s, SIMILARITY_DECIMALS)}
            for p, s in result.ranked
        ],
        "model_info": {
            "k_eff": result.model_info.k_eff,
            "dcard_pool_size": result.model_info.dcard_pool_size,
            "weibo_pool_size": result.model_info.weibo_pool_size,
            "warnings": list(result.model_info.warnings),
        },
    }


def report_to_json(report: SideBySideReport) -> dict:
    return {
        "tag": report.tag,
        "pivot": report.pivot,
        "stats": stats_pair_to_json(report.tag, report.dcard_stats,
                                    report.weibo_stats),
        "freq": {
            "dcard": freq_to_json(report.tag, report.dcard_freq),
            "weibo": freq_to_json(report.tag, report.weibo_freq),
        },
        "colloc": {
            "dcard": colloc_to_json(report.tag, "dcard", report.dcard_colloc),
            "weibo": colloc_to_json(report.tag, "weibo", report.weibo_colloc),
        },
    }
