"""Shared fixture data: a small two-source corpus exercised end to end.

The Dcard/Weibo pair is built so that post d3 and post w4 clean to the
exact same text (perfect alignment pair under the 減肥 tag) and both tags
appear on both sites.
"""

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import pytest


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1].replace("test_", "", 1)
        status = "PASS" if report.passed else "FAIL"
        sys.stderr.write(f"[{status}] {name}\n")

DICT_WORDS = [
    "健身房", "健身", "減肥", "運動", "今天", "打卡", "喝水", "日記", "吃",
    "飯", "好", "累", "想", "去", "慢跑", "堅持", "開心", "很",
]

LEXICON_LINES = ["# demo sentiment lexicon", "好\t1.0", "開心\t1.0",
                 "累\t-0.5", "想\t0.25"]

DCARD_RECORDS = [
    {"id": "d1", "content": "今天去健身房運動 https://x.co/a", "tags": ["健身"],
     "gender": "M", "school": "NTU", "department": "Linguistics",
     "likeCount": 10, "commentCount": 2, "createdAt": "2020-01-02T10:00:00Z"},
    {"id": "d2", "content": "健身好累", "tags": ["健身"], "gender": "F"},
    {"id": "d3", "content": "減肥運動打卡喝水", "tags": ["健身", "減肥"],
     "gender": "M"},
    {"id": "d4", "content": "減肥日記今天吃飯", "tags": ["減肥"], "gender": "F"},
    {"id": "d5", "content": "想減肥去慢跑", "tags": ["減肥"], "gender": "M"},
    {"id": "d6", "content": "堅持健身很開心", "tags": ["健身"]},
]

WEIBO_HTML = """<html><body>
<div class="post" data-id="w1" data-gender="f" data-followers="321"
     data-screen-name="卡卡" data-created-at="2020-03-04T20:00:00+08:00">#健身#打卡開心</div>
<div class="post" data-id="w2" data-gender="m">今天#健身#好累</div>
<div class="post" data-id="w3" data-gender="f">#減肥#想吃飯</div>
<div class="post" data-id="w4" data-gender="f">#減肥#運動打卡喝水</div>
<div class="post" data-id="w5">https://only.url/x</div>
</body></html>
"""


@dataclass
class DemoFiles:
    root: Path
    dcard_json: Path
    weibo_html: Path
    dict_file: Path
    lexicon: Path
    dcard_corpus: Path       # ingested, not tokenized
    weibo_corpus: Path
    dcard_tokenized: Path
    weibo_tokenized: Path


def build_demo_files(root: Path) -> DemoFiles:
    from topicalign.ingest import Corpus, load_dcard_file, parse_weibo_page, write_corpus
    from topicalign.segment import load_dictionary, make_fmm_tokenizer, tokenize_corpus

    root.mkdir(parents=True, exist_ok=True)
    dcard_json = root / "dcard.json"
    dcard_json.write_text(json.dumps(DCARD_RECORDS, ensure_ascii=False, indent=1),
                          encoding="utf-8")
    weibo_html = root / "weibo.html"
    weibo_html.write_text(WEIBO_HTML, encoding="utf-8")
    dict_file = root / "dict.txt"
    dict_file.write_text("\n".join(DICT_WORDS) + "\n", encoding="utf-8")
    lexicon = root / "lexicon.tsv"
    lexicon.write_text("\n".join(LEXICON_LINES) + "\n", encoding="utf-8")

    dcard_corpus = root / "dcard.jsonl"
    weibo_corpus = root / "weibo.jsonl"
    write_corpus(Corpus(load_dcard_file(dcard_json)), dcard_corpus)
    write_corpus(Corpus(parse_weibo_page(WEIBO_HTML, id_prefix="weibo")),
                 weibo_corpus)

    tokenizer = make_fmm_tokenizer(load_dictionary(dict_file))
    from topicalign.ingest import read_corpus

    dcard_tokenized = root / "dcard.tok.jsonl"
    weibo_tokenized = root / "weibo.tok.jsonl"
    write_corpus(tokenize_corpus(read_corpus(dcard_corpus), tokenizer),
                 dcard_tokenized)
    write_corpus(tokenize_corpus(read_corpus(weibo_corpus), tokenizer),
                 weibo_tokenized)
    return DemoFiles(
        root=root,
        dcard_json=dcard_json,
        weibo_html=weibo_html,
        dict_file=dict_file,
        lexicon=lexicon,
        dcard_corpus=dcard_corpus,
        weibo_corpus=weibo_corpus,
        dcard_tokenized=dcard_tokenized,
        weibo_tokenized=weibo_tokenized,
    )


@pytest.fixture(scope="session")
def demo_files(tmp_path_factory) -> DemoFiles:
    return build_demo_files(tmp_path_factory.mktemp("demo"))


@pytest.fixture(scope="session")
def demo_state(demo_files):
    from topicalign.service import build_state

    return build_state(
        demo_files.dcard_tokenized,
        demo_files.weibo_tokenized,
        lexicon_path=demo_files.lexicon,
        lsi_k=50,
    )


@pytest.fixture(scope="session")
def client(demo_state):
    from fastapi.testclient import TestClient

    from topicalign.service import create_app

    with TestClient(create_app(demo_state)) as c:
        yield c
