"""Source dumps -> unified Post schema -> line-delimited corpus files.

Two sources are supported: Dcard JSON exports (list of records or one record
per line) and Weibo HTML dumps (one container element per post, class "post").
Cleaning = URL removal plus hashtag-marker handling; posts are persisted one
JSON object per line, UTF-8, optional fields omitted when absent.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from enum import Enum
from html.parser import HTMLParser
from pathlib import Path


class SourceSite(str, Enum):
    DCARD = "dcard"
    WEIBO = "weibo"


class Gender(str, Enum):
    MALE = "male"
    FEMALE = "female"
    UNKNOWN = "unknown"


@dataclass
class Post:
    """One normalized social-media post.

    `raw_text` is the text as found in the dump; `text` is the cleaned form
    (no URLs, hashtag markers handled per source). `tokens` stays empty until
    segmentation. Instances are treated as immutable after construction.
    """

    id: str
    source: SourceSite
    raw_text: str
    text: str
    tags: list[str] = field(default_factory=list)
    gender: Gender = Gender.UNKNOWN
    created_at: datetime | None = None
    likes: int | None = None
    comments: int | None = None
    school: str | None = None
    department: str | None = None
    followers: int | None = None
    screen_name: str | None = None
    tokens: list[str] = field(default_factory=list)


@dataclass
class Corpus:
    """Ordered collection of posts; (id, source) must be unique."""

    posts: list[Post]

    def __post_init__(self) -> None:
        seen = set()
        for p in self.posts:
            key = (p.id, p.source)
            if key in seen:
                raise DuplicatePostError(f"duplicate post {key[1].value}:{key[0]}")
            seen.add(key)

    @property
    def source_counts(self) -> dict[SourceSite, int]:
        counts = {s: 0 for s in SourceSite}
        for p in self.posts:
            counts[p.source] += 1
        return counts

    def __len__(self) -> int:
        return len(self.posts)


class IngestError(Exception):
    pass


class MissingFieldError(IngestError):
    def __init__(self, field_name: str):
        super().__init__(f"missing required field: {field_name}")
        self.field_name = field_name


class DuplicatePostError(IngestError):
    pass


class SchemaViolationError(IngestError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


@dataclass
class IngestStats:
    """Counters accumulated while parsing one or more dump files."""

    posts: int = 0
    rejected: int = 0
    skipped_blocks: int = 0
    bad_timestamps: int = 0
    rejections: list[str] = field(default_factory=list)


# --- URL stripping ---------------------------------------------------------

# A URL starts with one of these prefixes and runs through contiguous
# characters that are neither whitespace nor CJK (hostnames cannot contain
# CJK, so a following Chinese clause survives: "www.dcard.tw好站" -> "好站").
_CJK_RANGES = (
    (0x2E80, 0x2EFF),    # radicals
    (0x3000, 0x303F),    # CJK symbols & punctuation (incl. ideographic space)
    (0x3400, 0x4DBF),    # ideograph extension A
    (0x4E00, 0x9FFF),    # unified ideographs
    (0xF900, 0xFAFF),    # compatibility ideographs
    (0xFF00, 0xFFEF),    # full-width forms (，！？ etc.)
    (0x20000, 0x2FA1F),  # extensions B..F
)


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _CJK_RANGES)


_URL_START = re.compile(r"https?://|www\.")


def _url_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    pos = 0
    while True:
        m = _URL_START.search(text, pos)
        if m is None:
            break
        end = m.end()
        while end < len(text) and not text[end].isspace() and not _is_cjk(text[end]):
            end += 1
        spans.append((m.start(), end))
        pos = end
    return spans


def strip_urls(text: str) -> str:
    """Delete every URL-shaped substring from `text`.

    Each deleted span absorbs the whitespace touching it; that whitespace
    collapses to a single space, or to nothing when the span butts against
    the start/end of the string or had no whitespace at all. Everything
    outside the deleted spans is preserved verbatim.
    """
    spans = _url_spans(text)
    if not spans:
        return text
    # grow each span over surrounding whitespace, merging spans that meet
    groups: list[list[int]] = []
    for start, end in spans:
        while start > 0 and text[start - 1].isspace():
            start -= 1
        while end < len(text) and text[end].isspace():
            end += 1
        if groups and start <= groups[-1][1]:
            groups[-1][1] = max(end, groups[-1][1])
        else:
            groups.append([start, end])
    out = []
    pos = 0
    for start, end in groups:
        out.append(text[pos:start])
        had_ws = any(c.isspace() for c in text[start:end])
        if had_ws and start > 0 and end < len(text):
            out.append(" ")
        pos = end
    out.append(text[pos:])
    return "".join(out)


# --- Hashtag extraction ----------------------------------------------------

def extract_hashtags(text: str) -> tuple[list[str], str]:
    """Pair '#' markers greedily left to right.

    Returns (tags, cleaned): the trimmed, non-empty inner text of each pair
    becomes a tag; cleaned is `text` with the paired marker characters
    removed (inner text stays in place). An unpaired final '#' is kept
    literally.
    """
    marks = [i for i, c in enumerate(text) if c == "#"]
    tags = []
    drop = set()
    for k in range(0, len(marks) - 1, 2):
        open_i, close_i = marks[k], marks[k + 1]
        inner = text[open_i + 1 : close_i].strip()
        if inner:
            tags.append(inner)
        drop.add(open_i)
        drop.add(close_i)
    cleaned = "".join(c for i, c in enumerate(text) if i not in drop)
    return tags, cleaned


# --- Dcard records ---------------------------------------------------------

def _normalize_gender(value) -> Gender:
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("m", "male"):
            return Gender.MALE
        if v in ("f", "female"):
            return Gender.FEMALE
    return Gender.UNKNOWN


_SOURCE_UTC_OFFSET = timedelta(hours=8)  # both sites operate on UTC+8


def _parse_timestamp(value) -> datetime | None:
    """Parse a timestamp to UTC at seconds precision.

    Accepts RFC 3339 / ISO 8601 strings and integer epoch seconds. Naive
    datetimes are interpreted as source-local UTC+8. Returns None when the
    value cannot be parsed.
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        try:
            return datetime.fromtimestamp(int(value), tz=timezone.utc)
        except (OverflowError, OSError, ValueError):
            return None
    if not isinstance(value, str):
        return None
    raw = value.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError:
        return None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone(_SOURCE_UTC_OFFSET))
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def _opt_count(value) -> int | None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return None
    n = int(value)
    return n if n >= 0 else None


def parse_dcard_record(record: dict, stats: IngestStats | None = None) -> Post:
    """Map one Dcard API record onto a Post.

    `id` and `content` are required (MissingFieldError otherwise); tags come
    from the record's tag list, never from the body. A malformed createdAt
    leaves created_at unset and bumps the bad-timestamp counter.
    """
    if "id" not in record or record["id"] in (None, ""):
        raise MissingFieldError("id")
    if "content" not in record or record["content"] is None:
        raise MissingFieldError("content")
    content = str(record["content"])
    # metadata tags are sanitized to the corpus tag invariant: no '#', non-empty
    tags = []
    for raw in record.get("tags") or []:
        cleaned = str(raw).replace("#", "").strip()
        if cleaned:
            tags.append(cleaned)
    created = None
    if "createdAt" in record and record["createdAt"] is not None:
        created = _parse_timestamp(record["createdAt"])
        if created is None and stats is not None:
            stats.bad_timestamps += 1
    return Post(
        id=str(record["id"]),
        source=SourceSite.DCARD,
        raw_text=content,
        text=strip_urls(content),
        tags=tags,
        gender=_normalize_gender(record.get("gender")),
        created_at=created,
        likes=_opt_count(record.get("likeCount")),
        comments=_opt_count(record.get("commentCount")),
        school=record.get("school") or None,
        department=record.get("department") or None,
    )


def ingest_dcard_records(records, stats: IngestStats | None = None) -> list[Post]:
    """Parse an iterable of Dcard records, collecting rejections by index."""
    stats = stats if stats is not None else IngestStats()
    posts = []
    for i, record in enumerate(records):
        try:
            posts.append(parse_dcard_record(record, stats=stats))
            stats.posts += 1
        except MissingFieldError as exc:
            stats.rejected += 1
            stats.rejections.append(f"record {i}: {exc}")
    return posts


def load_dcard_file(path, stats: IngestStats | None = None) -> list[Post]:
    """Read a Dcard dump: a JSON array, or one JSON record per line."""
    text = Path(path).read_text(encoding="utf-8-sig")
    stripped = text.lstrip()
    if not stripped:
        return []
    if stripped.startswith("["):
        records = json.loads(text)
        if not isinstance(records, list):
            raise IngestError(f"{path}: expected a JSON array of records")
    else:
        records = []
        for line in text.splitlines():
            if line.strip():
                records.append(json.loads(line))
    return ingest_dcard_records(records, stats=stats)


# --- Weibo HTML pages ------------------------------------------------------

_VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)


class _WeiboPageParser(HTMLParser):
    """Collects text + attributes from every element carrying class "post".

    Nested markup inside a block contributes its text; the block ends when
    its container element closes. Entity references are decoded by the base
    parser (convert_charrefs).
    """

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.blocks: list[tuple[dict, list[str]]] = []
        self._depth = 0          # open-tag depth inside the current block
        self._current: tuple[dict, list[str]] | None = None

    def _is_post_container(self, attrs) -> bool:
        for name, value in attrs:
            if name == "class" and value:
                return "post" in value.split()
        return False

    def handle_starttag(self, tag, attrs):
        if tag in _VOID_TAGS:
            return
        if self._current is None and self._is_post_container(attrs):
            self._current = (dict(attrs), [])
            self._depth = 1
        elif self._current is not None:
            self._depth += 1

    def handle_endtag(self, tag):
        if tag in _VOID_TAGS or self._current is None:
            return
        self._depth -= 1
        if self._depth <= 0:
            self.blocks.append(self._current)
            self._current = None

    def handle_data(self, data):
        if self._current is not None and data:
            self._current[1].append(data)

    def close(self):
        super().close()
        if self._current is not None:  # unclosed container at EOF
            self.blocks.append(self._current)
            self._current = None


def parse_weibo_page(
    html: str,
    stats: IngestStats | None = None,
    id_prefix: str = "weibo",
) -> list[Post]:
    """Extract posts from one Weibo HTML dump, in document order.

    Each block's visible text is cleaned (strip_urls, then hashtag
    extraction, extracted hashtags become the tags). Blocks with no text
    nodes at all are skipped and counted; a block whose text merely cleans
    to "" still yields a Post. Post ids come from data-id, falling back to
    "<id_prefix>-<ordinal>". Unparseable documents yield an empty list and
    a diagnostic in `stats`.
    """
    stats = stats if stats is not None else IngestStats()
    parser = _WeiboPageParser()
    try:
        parser.feed(html)
        parser.close()
    except Exception as exc:  # html.parser almost never raises; be safe
        stats.rejections.append(f"unparseable html: {exc}")
        return []
    posts = []
    for ordinal, (attrs, chunks) in enumerate(parser.blocks):
        if not chunks:
            stats.skipped_blocks += 1
            continue
        raw_text = "".join(chunks)
        tags, cleaned = extract_hashtags(strip_urls(raw_text))
        created = None
        if attrs.get("data-created-at"):
            created = _parse_timestamp(attrs["data-created-at"])
            if created is None:
                stats.bad_timestamps += 1
        posts.append(
            Post(
                id=attrs.get("data-id") or f"{id_prefix}-{ordinal}",
                source=SourceSite.WEIBO,
                raw_text=raw_text,
                text=cleaned,
                tags=tags,
                gender=_normalize_gender(attrs.get("data-gender")),
                created_at=created,
                likes=_opt_count(_int_attr(attrs, "data-likes")),
                comments=_opt_count(_int_attr(attrs, "data-comments")),
                followers=_opt_count(_int_attr(attrs, "data-followers")),
                screen_name=attrs.get("data-screen-name") or None,
            )
        )
        stats.posts += 1
    return posts


def _int_attr(attrs: dict, name: str):
    value = attrs.get(name)
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        return None


# --- Corpus persistence ----------------------------------------------------

# Serialized field order is fixed so identical corpora give identical bytes.
_FIELD_ORDER = (
    "id", "source", "raw_text", "text", "tags", "gender", "created_at",
    "likes", "comments", "school", "department", "followers", "screen_name",
    "tokens",
)
_OPTIONAL_FIELDS = frozenset(
    ("created_at", "likes", "comments", "school", "department", "followers",
     "screen_name")
)


def post_to_record(post: Post) -> dict:
    """Post -> plain dict in the documented field order, optionals omitted."""
    values = {
        "id": post.id,
        "source": post.source.value,
        "raw_text": post.raw_text,
        "text": post.text,
        "tags": list(post.tags),
        "gender": post.gender.value,
        "created_at": (
            post.created_at.strftime("%Y-%m-%dT%H:%M:%SZ")
            if post.created_at is not None
            else None
        ),
        "likes": post.likes,
        "comments": post.comments,
        "school": post.school,
        "department": post.department,
        "followers": post.followers,
        "screen_name": post.screen_name,
        "tokens": list(post.tokens),
    }
    return {
        k: values[k]
        for k in _FIELD_ORDER
        if not (k in _OPTIONAL_FIELDS and values[k] is None)
    }


def record_to_post(record: dict) -> Post:
    if not isinstance(record, dict):
        raise ValueError("record is not an object")
    unknown = set(record) - set(_FIELD_ORDER)
    if unknown:
        raise ValueError(f"unknown fields: {sorted(unknown)}")
    for req in ("id", "source", "raw_text", "text", "tags", "gender", "tokens"):
        if req not in record:
            raise ValueError(f"missing field: {req}")
    try:
        source = SourceSite(record["source"])
    except ValueError:
        raise ValueError(f"bad source: {record['source']!r}")
    try:
        gender = Gender(record["gender"])
    except ValueError:
        raise ValueError(f"bad gender: {record['gender']!r}")
    tags = record["tags"]
    tokens = record["tokens"]
    if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
        raise ValueError("tags must be a list of strings")
    if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
        raise ValueError("tokens must be a list of strings")
    created = None
    if "created_at" in record:
        created = _parse_timestamp(record["created_at"])
        if created is None:
            raise ValueError(f"bad created_at: {record['created_at']!r}")
    for count_field in ("likes", "comments", "followers"):
        if count_field in record:
            v = record[count_field]
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValueError(f"bad {count_field}: {v!r}")
    return Post(
        id=str(record["id"]),
        source=source,
        raw_text=record["raw_text"],
        text=record["text"],
        tags=list(tags),
        gender=gender,
        created_at=created,
        likes=record.get("likes"),
        comments=record.get("comments"),
        school=record.get("school"),
        department=record.get("department"),
        followers=record.get("followers"),
        screen_name=record.get("screen_name"),
        tokens=list(tokens),
    )


def write_corpus(corpus: Corpus, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for post in corpus.posts:
            fh.write(json.dumps(post_to_record(post), ensure_ascii=False,
                                separators=(",", ":")))
            fh.write("\n")


def read_corpus(path) -> Corpus:
    path = Path(path)
    posts = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if line.strip() == "":
                raise SchemaViolationError(line_no, "blank line")
            try:
                record = json.loads(line)
                posts.append(record_to_post(record))
            except (json.JSONDecodeError, ValueError) as exc:
                raise SchemaViolationError(line_no, str(exc)) from exc
    return Corpus(posts)


def with_tokens(post: Post, tokens: list[str]) -> Post:
    return replace(post, tokens=list(tokens))
