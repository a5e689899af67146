import json
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topicalign.ingest import (
    Corpus,
    Gender,
    IngestStats,
    MissingFieldError,
    Post,
    SchemaViolationError,
    SourceSite,
    extract_hashtags,
    ingest_dcard_records,
    parse_dcard_record,
    parse_weibo_page,
    post_to_record,
    read_corpus,
    record_to_post,
    strip_urls,
    write_corpus,
)

from .oracles import oracle_extract_hashtags, oracle_strip_urls

# Expected outputs computed with oracle_strip_urls and frozen.
URL_CASES = [
    ("看這個 https://t.cn/AbC123 超讚", "看這個 超讚"),
    ("", ""),
    ("www.dcard.tw好站", "好站"),
    ("no url here", "no url here"),
    ("運動 https://x.co/a", "運動"),
    ("https://x.co 早安", "早安"),
    ("前 http://a.b/c?d=1&e=2 後", "前 後"),
    ("雙 https://a.co https://b.co 連", "雙 連"),
    ("夾www.x.tw中", "夾中"),
    ("結尾www.x.tw", "結尾"),
    ("混 www.x.tw，接著", "混 ，接著"),
    ("tabs\thttp://x.y\tkeep", "tabs keep"),
    ("newline\nwww.a.b\nnext", "newline next"),
    ("wwwww.x", "ww"),
    ("http:// 空前綴", "空前綴"),
    ("a  b", "a  b"),
    ("雙空  www.x  尾字", "雙空 尾字"),
    ("WWW.UPPER.case", "WWW.UPPER.case"),
    ("內嵌https://貼", "內嵌貼"),
    ("多 www.a.b 中 www.c.d 尾", "多 中 尾"),
]


@pytest.mark.parametrize("text,expected", URL_CASES)
def test_strip_urls_frozen_fixture(text, expected):
    assert strip_urls(text) == expected
    assert oracle_strip_urls(text) == expected


_url_text = st.text(
    alphabet=st.sampled_from(list("abwz.:/ 減肥運動好站художw") + ["\t", "\n", "#"]),
    max_size=40,
)


@given(_url_text)
def test_strip_urls_idempotent(text):
    once = strip_urls(text)
    assert strip_urls(once) == once


@given(_url_text)
def test_strip_urls_matches_oracle(text):
    assert strip_urls(text) == oracle_strip_urls(text)


@given(_url_text)
def test_strip_urls_leaves_no_url(text):
    cleaned = strip_urls(text)
    for prefix in ("http://", "https://", "www."):
        assert prefix not in cleaned


# Expected outputs computed with oracle_extract_hashtags over all 2^4
# marker placements on the template [m0]a[m1]b[m2]c[m3], frozen.
HASHTAG_CASES = [
    ("abc", [], "abc"),
    ("#abc", [], "#abc"),
    ("a#bc", [], "a#bc"),
    ("#a#bc", ["a"], "abc"),
    ("ab#c", [], "ab#c"),
    ("#ab#c", ["ab"], "abc"),
    ("a#b#c", ["b"], "abc"),
    ("#a#b#c", ["a"], "ab#c"),
    ("abc#", [], "abc#"),
    ("#abc#", ["abc"], "abc"),
    ("a#bc#", ["bc"], "abc"),
    ("#a#bc#", ["a"], "abc#"),
    ("ab#c#", ["c"], "abc"),
    ("#ab#c#", ["ab"], "abc#"),
    ("a#b#c#", ["b"], "abc#"),
    ("#a#b#c#", ["a", "c"], "abc"),
]


@pytest.mark.parametrize("text,tags,cleaned", HASHTAG_CASES)
def test_extract_hashtags_template_fixture(text, tags, cleaned):
    assert extract_hashtags(text) == (tags, cleaned)
    assert oracle_extract_hashtags(text) == (tags, cleaned)


def test_extract_hashtags_spec_examples():
    assert extract_hashtags("今天#減肥#加油") == (["減肥"], "今天減肥加油")
    assert extract_hashtags("no tags here") == ([], "no tags here")


def test_extract_hashtags_blank_inner_pair_dropped():
    tags, cleaned = extract_hashtags("a# #b")
    assert tags == []
    assert cleaned == "a b"


@given(st.text(alphabet=list("ab#減 "), max_size=30))
def test_extract_hashtags_leaves_at_most_trailing_marker(text):
    tags, cleaned = extract_hashtags(text)
    assert cleaned.count("#") <= 1
    assert all(tag and "#" not in tag for tag in tags)
    assert extract_hashtags(text) == oracle_extract_hashtags(text)


@given(st.lists(st.text(alphabet=list("ab減肥"), min_size=1, max_size=3),
                min_size=1, max_size=6))
def test_extract_hashtags_pair_count(inners):
    # non-blank inner text between every marker pair: tag count = pair count
    text = "#" + "#".join(inners) + "#"
    n_pairs = (len(inners) + 1) // 2
    tags, cleaned = extract_hashtags(text)
    if len(inners) % 2 == 1:  # all markers paired
        assert len(tags) == n_pairs
        assert "#" not in cleaned
    assert "".join(c for c in cleaned if c != "#") == "".join(inners)


# --- Dcard records ---------------------------------------------------------

def test_parse_dcard_record_field_mapping():
    post = parse_dcard_record(
        {"id": "1", "content": "運動 https://x.co/a", "tags": ["健身"], "gender": "M"}
    )
    assert post.source == SourceSite.DCARD
    assert post.text == "運動"
    assert post.raw_text == "運動 https://x.co/a"
    assert post.tags == ["健身"]
    assert post.gender == Gender.MALE
    assert post.tokens == []


def test_parse_dcard_record_minimal():
    post = parse_dcard_record({"id": "2", "content": "hi", "tags": []})
    assert post.tags == []
    assert post.gender == Gender.UNKNOWN
    assert post.created_at is None
    assert post.likes is None


def test_parse_dcard_record_sanitizes_metadata_tags():
    post = parse_dcard_record(
        {"id": "9", "content": "x", "tags": ["#健身", "  ", "fit ", "#"]})
    assert post.tags == ["健身", "fit"]


def test_parse_dcard_record_metadata():
    post = parse_dcard_record(
        {
            "id": "3",
            "content": "hello",
            "tags": ["考試"],
            "gender": "F",
            "school": "NTU",
            "department": "Linguistics",
            "likeCount": 12,
            "commentCount": 3,
            "createdAt": "2020-01-02T08:30:45.123Z",
        }
    )
    assert post.gender == Gender.FEMALE
    assert post.school == "NTU"
    assert post.department == "Linguistics"
    assert post.likes == 12 and post.comments == 3
    assert post.created_at == datetime(2020, 1, 2, 8, 30, 45, tzinfo=timezone.utc)


def test_parse_dcard_record_naive_timestamp_is_utc8():
    post = parse_dcard_record(
        {"id": "4", "content": "x", "tags": [], "createdAt": "2020-01-02T08:00:00"}
    )
    assert post.created_at == datetime(2020, 1, 2, 0, 0, 0, tzinfo=timezone.utc)


def test_parse_dcard_record_bad_timestamp_counted():
    stats = IngestStats()
    post = parse_dcard_record(
        {"id": "5", "content": "x", "tags": [], "createdAt": "not a date"},
        stats=stats,
    )
    assert post.created_at is None
    assert stats.bad_timestamps == 1


def test_parse_dcard_record_missing_fields():
    with pytest.raises(MissingFieldError):
        parse_dcard_record({"content": "x", "tags": []})
    with pytest.raises(MissingFieldError):
        parse_dcard_record({"id": "1", "tags": []})


def test_ingest_dcard_records_counts_rejections():
    records = [{"id": str(i), "content": f"post {i}", "tags": []} for i in range(10)]
    del records[3]["content"]
    del records[7]["content"]
    stats = IngestStats()
    posts = ingest_dcard_records(records, stats=stats)
    assert len(posts) == 8
    assert stats.posts == 8
    assert stats.rejected == 2
    assert any("record 3" in r for r in stats.rejections)
    assert any("record 7" in r for r in stats.rejections)


# --- Weibo pages -----------------------------------------------------------

def test_parse_weibo_single_block():
    posts = parse_weibo_page("<div class='post'>今天#健身#打卡</div>")
    assert len(posts) == 1
    assert posts[0].text == "今天健身打卡"
    assert posts[0].tags == ["健身"]
    assert posts[0].source == SourceSite.WEIBO


def test_parse_weibo_entities_decoded():
    posts = parse_weibo_page("<div class='post'>&lt;3 減肥</div>")
    assert posts[0].text == "<3 減肥"


WEIBO_FIXTURE = """
<html><body>
<div class="post" data-id="w1" data-gender="f" data-followers="120"
     data-screen-name="瘦瘦" data-created-at="2020-05-01T12:00:00+08:00">
  今天#減肥#開始 www.diet.example 加油
</div>
<article class="post feed" data-id="w2">運動<br>打卡</article>
<div class="post" data-id="w3">https://only.a.url/x</div>
<div class="post" data-id="w4"><span>嵌套 &amp; 文本</span>之後</div>
<div class="post" data-id="w5">沒有標籤</div>
<div class="post" data-id="skipme"><img src="a.png"></div>
</body></html>
"""


def test_parse_weibo_fixture_page():
    stats = IngestStats()
    posts = parse_weibo_page(WEIBO_FIXTURE, stats=stats)
    assert [p.id for p in posts] == ["w1", "w2", "w3", "w4", "w5"]
    w1 = posts[0]
    assert w1.tags == ["減肥"]
    assert "www.diet.example" not in w1.text
    assert w1.gender == Gender.FEMALE
    assert w1.followers == 120
    assert w1.screen_name == "瘦瘦"
    assert w1.created_at == datetime(2020, 5, 1, 4, 0, 0, tzinfo=timezone.utc)
    assert posts[1].text == "運動打卡"
    assert posts[2].text == ""  # URL-only block still yields a post
    assert posts[3].text == "嵌套 & 文本之後"
    assert stats.skipped_blocks == 1  # the text-less img block
    assert stats.posts == 5


def test_parse_weibo_generated_ids():
    posts = parse_weibo_page(
        "<div class='post'>一</div><div class='post'>二</div>", id_prefix="pg"
    )
    assert [p.id for p in posts] == ["pg-0", "pg-1"]


def test_parse_weibo_no_blocks():
    assert parse_weibo_page("<html><p>nothing here</p></html>") == []


@given(st.lists(st.text(alphabet=list("ab#減肥 www.xyz/"), max_size=20), max_size=5))
def test_parse_weibo_posts_satisfy_post_invariants(texts):
    html = "".join(f"<div class='post'>{t.replace('<', '')}</div>" for t in texts)
    for post in parse_weibo_page(html):
        for prefix in ("http://", "https://", "www."):
            assert prefix not in post.text
        assert post.text.count("#") <= 1
        assert all(t and "#" not in t for t in post.tags)


# --- corpus round-trip -----------------------------------------------------

def _sample_posts():
    return [
        Post(id="1", source=SourceSite.DCARD, raw_text="a http://x", text="a",
             tags=["健身"], gender=Gender.MALE, likes=3, school="NTU",
             tokens=["a"]),
        Post(id="2", source=SourceSite.WEIBO, raw_text="#b#", text="b",
             tags=["b"], gender=Gender.FEMALE, followers=10, screen_name="s",
             created_at=datetime(2021, 3, 4, 5, 6, 7, tzinfo=timezone.utc)),
        Post(id="3", source=SourceSite.DCARD, raw_text="", text="",
             tags=[], gender=Gender.UNKNOWN),
    ]


def test_corpus_roundtrip(tmp_path):
    corpus = Corpus(_sample_posts())
    path = tmp_path / "corpus.jsonl"
    write_corpus(corpus, path)
    back = read_corpus(path)
    assert back.posts == corpus.posts
    assert back.source_counts == {SourceSite.DCARD: 2, SourceSite.WEIBO: 1}


def test_corpus_read_reports_line_number(tmp_path):
    corpus = Corpus(
        [Post(id=str(i), source=SourceSite.DCARD, raw_text="x", text="x")
         for i in range(10)]
    )
    path = tmp_path / "corpus.jsonl"
    write_corpus(corpus, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    lines[6] = '{"id": "oops"}'
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(SchemaViolationError) as err:
        read_corpus(path)
    assert err.value.line_no == 7


def test_corpus_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    corpus = read_corpus(path)
    assert corpus.posts == []


def test_corpus_rejects_unknown_field():
    with pytest.raises(ValueError):
        record_to_post({"id": "1", "source": "dcard", "raw_text": "", "text": "",
                        "tags": [], "gender": "male", "tokens": [], "bogus": 1})


def test_corpus_optional_fields_omitted():
    record = post_to_record(_sample_posts()[2])
    assert set(record) == {"id", "source", "raw_text", "text", "tags", "gender",
                           "tokens"}


def test_duplicate_post_ids_rejected():
    posts = [
        Post(id="1", source=SourceSite.DCARD, raw_text="", text=""),
        Post(id="1", source=SourceSite.DCARD, raw_text="", text=""),
    ]
    with pytest.raises(Exception):
        Corpus(posts)
    # same id on different sources is fine
    Corpus([Post(id="1", source=SourceSite.DCARD, raw_text="", text=""),
            Post(id="1", source=SourceSite.WEIBO, raw_text="", text="")])


_cjk_text = st.text(alphabet=list("減肥運動abc #，"), max_size=15)


@st.composite
def _post_payload(draw):
    source = draw(st.sampled_from(list(SourceSite)))
    created = None
    if draw(st.booleans()):
        created = datetime.fromtimestamp(
            draw(st.integers(min_value=0, max_value=2**31 - 1)), tz=timezone.utc
        )
    opt_int = st.one_of(st.none(), st.integers(min_value=0, max_value=10**6))
    opt_str = st.one_of(st.none(), st.text(alphabet=list("ab中文"), min_size=1,
                                           max_size=5))
    return dict(
        source=source,
        raw_text=draw(_cjk_text),
        text=draw(_cjk_text),
        tags=draw(st.lists(st.text(alphabet=list("ab健身"), min_size=1, max_size=4),
                           max_size=3)),
        gender=draw(st.sampled_from(list(Gender))),
        created_at=created,
        likes=draw(opt_int),
        comments=draw(opt_int),
        school=draw(opt_str),
        department=draw(opt_str),
        followers=draw(opt_int),
        screen_name=draw(opt_str),
        tokens=draw(st.lists(st.text(alphabet=list("ab減"), min_size=1, max_size=3),
                             max_size=4)),
    )


@settings(max_examples=40)
@given(st.lists(_post_payload(), max_size=6))
def test_corpus_roundtrip_randomized(tmp_path_factory, payloads):
    posts = [Post(id=f"p{i}", **pl) for i, pl in enumerate(payloads)]
    corpus = Corpus(posts)
    path = tmp_path_factory.mktemp("rt") / "c.jsonl"
    write_corpus(corpus, path)
    assert read_corpus(path).posts == corpus.posts
