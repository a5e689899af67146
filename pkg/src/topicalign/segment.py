"""Dictionary-driven forward-maximum-matching segmentation.

The tokenizer contract is any callable mapping text -> list of tokens whose
concatenation reproduces the input's non-whitespace characters in order.
The built-in FMM segmenter fulfils it deterministically; external segmenters
can be plugged in wherever a tokenizer is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

from .ingest import Corpus, with_tokens


class SegmentError(Exception):
    pass


class EmptyDictionaryError(SegmentError):
    pass


@dataclass(frozen=True)
class Dictionary:
    entries: frozenset[str]
    max_word_len: int

    @classmethod
    def from_words(cls, words) -> "Dictionary":
        entries = frozenset(w for w in words if w)
        if not entries:
            raise EmptyDictionaryError("dictionary has no entries")
        return cls(entries=entries, max_word_len=max(len(w) for w in entries))


class Tokenizer(Protocol):
    def __call__(self, text: str) -> list[str]: ...


def load_dictionary(path) -> Dictionary:
    """One word per line; trailing whitespace-separated frequency ignored;
    '#'-prefixed lines are comments."""
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.append(line.split()[0])
    if not words:
        raise EmptyDictionaryError(f"no dictionary entries in {path}")
    return Dictionary.from_words(words)


def _is_ascii_alnum(ch: str) -> bool:
    return ("a" <= ch <= "z") or ("A" <= ch <= "Z") or ("0" <= ch <= "9")


def segment_fmm(text: str, dictionary: Dictionary) -> list[str]:
    """Greedy longest-match scan over whitespace-separated chunks.

    At each position the longest dictionary word wins (window capped at the
    dictionary's max word length). With no match, an ASCII letter/digit run
    is emitted whole; any other character is emitted alone. Whitespace only
    separates, it is never emitted.
    """
    if not dictionary.entries:
        raise EmptyDictionaryError("dictionary has no entries")
    tokens: list[str] = []
    for chunk in text.split():
        i = 0
        n = len(chunk)
        while i < n:
            match = None
            for length in range(min(dictionary.max_word_len, n - i), 0, -1):
                candidate = chunk[i : i + length]
                if candidate in dictionary.entries:
                    match = candidate
                    break
            if match is not None:
                tokens.append(match)
                i += len(match)
            elif _is_ascii_alnum(chunk[i]):
                j = i + 1
                while j < n and _is_ascii_alnum(chunk[j]):
                    j += 1
                tokens.append(chunk[i:j])
                i = j
            else:
                tokens.append(chunk[i])
                i += 1
    return tokens


def make_fmm_tokenizer(dictionary: Dictionary) -> Callable[[str], list[str]]:
    def tokenize(text: str) -> list[str]:
        return segment_fmm(text, dictionary)

    tokenize.name = f"fmm[{len(dictionary.entries)} words]"  # type: ignore[attr-defined]
    return tokenize


def tokenize_corpus(corpus: Corpus, tokenizer: Callable[[str], list[str]]) -> Corpus:
    """Populate every post's tokens from its cleaned text; order preserved."""
    return Corpus([with_tokens(p, tokenizer(p.text)) for p in corpus.posts])
