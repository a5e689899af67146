"""tf-idf weighting, truncated-SVD latent indexing, cosine ranking.

Documents are bags of words over a first-appearance vocabulary. Weighting is
count * log2(N/df) with document-level L2 normalization; the weighted
term-document matrix (terms as rows) is reduced to a k-dimensional latent
space via truncated SVD and documents are compared by cosine similarity of
their projections U_k^T x.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class VectorSpaceError(Exception):
    pass


class EmptyCorpusError(VectorSpaceError):
    pass


class DegenerateMatrixError(VectorSpaceError):
    pass


# Sparse vectors are plain dicts: term id -> count (bow) or weight (tf-idf).
BowVector = dict
DocRef = tuple  # (post id, source name)


@dataclass(frozen=True)
class Vocabulary:
    term_to_id: dict[str, int]
    id_to_term: list[str]

    @property
    def size(self) -> int:
        return len(self.id_to_term)


def build_vocabulary(token_lists) -> Vocabulary:
    """Assign ids in order of first appearance across all documents."""
    term_to_id: dict[str, int] = {}
    for tokens in token_lists:
        for tok in tokens:
            if tok not in term_to_id:
                term_to_id[tok] = len(term_to_id)
    if not term_to_id:
        raise EmptyCorpusError("no tokens in any document")
    id_to_term = [""] * len(term_to_id)
    for term, idx in term_to_id.items():
        id_to_term[idx] = term
    return Vocabulary(term_to_id=term_to_id, id_to_term=id_to_term)


def to_bow(tokens, vocab: Vocabulary) -> BowVector:
    """Token list -> {term id: count}; out-of-vocabulary tokens are dropped."""
    bow: BowVector = {}
    for tok in tokens:
        idx = vocab.term_to_id.get(tok)
        if idx is not None:
            bow[idx] = bow.get(idx, 0) + 1
    return bow


@dataclass(frozen=True)
class TfIdfModel:
    vocab: Vocabulary
    doc_count: int
    df: np.ndarray   # per-term document frequency, int64
    idf: np.ndarray  # log2(doc_count / df), float64


def fit_tfidf(bows, vocab: Vocabulary) -> TfIdfModel:
    bows = list(bows)
    if not bows:
        raise EmptyCorpusError("no documents to fit")
    df = np.zeros(vocab.size, dtype=np.int64)
    for bow in bows:
        for term_id in bow:
            df[term_id] += 1
    n = len(bows)
    idf = np.zeros(vocab.size, dtype=np.float64)
    present = df > 0
    idf[present] = np.log2(n / df[present])
    return TfIdfModel(vocab=vocab, doc_count=n, df=df, idf=idf)


def transform_tfidf(bow: BowVector, model: TfIdfModel) -> dict:
    """count * idf, then L2-normalize; all-zero weights give the zero vector."""
    weights = {}
    for term_id, count in bow.items():
        w = count * model.idf[term_id]
        if w != 0.0:
            weights[term_id] = w
    norm = np.sqrt(sum(w * w for w in weights.values()))
    if norm == 0.0:
        return {}
    return {t: w / norm for t, w in weights.items()}


@dataclass(frozen=True)
class LsiModel:
    k: int           # requested dimensionality
    k_eff: int       # min(k, rank of the fitted matrix)
    u: np.ndarray    # V x k_eff, orthonormal columns, sign-canonical
    sigma: np.ndarray  # k_eff singular values, non-increasing, positive


def _canonicalize_signs(u: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    u = u.copy()
    for j in range(u.shape[1]):
        i = int(np.argmax(np.abs(u[:, j])))
        if u[i, j] < 0:
            u[:, j] = -u[:, j]
    return u


def _dense_matrix(columns, n_rows: int) -> np.ndarray:
    x = np.zeros((n_rows, len(columns)), dtype=np.float64)
    for j, col in enumerate(columns):
        for term_id, w in col.items():
            if term_id >= n_rows:
                raise VectorSpaceError(f"term id {term_id} out of range")
            x[term_id, j] = w
    return x


def fit_lsi(tfidf_columns, n_terms: int, k: int) -> LsiModel:
    """Truncated SVD of the V x D weighted matrix built from sparse columns.

    k_eff = min(k, rank); signs canonicalized so results are reproducible.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    columns = list(tfidf_columns)
    if not columns:
        raise EmptyCorpusError("no documents to fit")
    x = _dense_matrix(columns, n_terms)
    if not np.any(x):
        raise DegenerateMatrixError("all-zero term-document matrix")
    u, s, _vt = np.linalg.svd(x, full_matrices=False)
    tol = s.max() * max(x.shape) * np.finfo(np.float64).eps
    rank = int(np.sum(s > tol))
    k_eff = min(k, rank)
    return LsiModel(k=k, k_eff=k_eff, u=_canonicalize_signs(u[:, :k_eff]),
                    sigma=s[:k_eff].copy())


def project_lsi(weighted_vec: dict, lsi: LsiModel) -> np.ndarray:
    """U_k^T x for a sparse weighted vector; zero in, zero out."""
    out = np.zeros(lsi.k_eff, dtype=np.float64)
    for term_id, w in weighted_vec.items():
        if term_id >= lsi.u.shape[0]:
            raise VectorSpaceError(f"term id {term_id} out of range")
        out += w * lsi.u[term_id, :]
    return out


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """a.b / (|a||b|), 0.0 when either norm is zero.

    Operands are normalized before the dot product and the result clamped,
    so the value stays inside [-1, 1] even for denormal-scale inputs where
    squared norms lose precision.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    value = float(np.dot(np.asarray(a) / na, np.asarray(b) / nb))
    return max(-1.0, min(1.0, value))


@dataclass(frozen=True)
class SimilarityIndex:
    vectors: np.ndarray      # pool size x k_eff
    refs: list[DocRef]       # parallel (post id, source name)

    def __len__(self) -> int:
        return len(self.refs)


def build_index(weighted_vecs, refs, lsi: LsiModel) -> SimilarityIndex:
    weighted_vecs = list(weighted_vecs)
    refs = list(refs)
    if len(weighted_vecs) != len(refs):
        raise ValueError("vectors and refs differ in length")
    vectors = np.zeros((len(weighted_vecs), lsi.k_eff), dtype=np.float64)
    for i, vec in enumerate(weighted_vecs):
        vectors[i, :] = project_lsi(vec, lsi)
    return SimilarityIndex(vectors=vectors, refs=refs)


def rank_by_similarity(query: np.ndarray, index: SimilarityIndex,
                       top_n: int) -> list[tuple[DocRef, float]]:
    """All similarities, sorted descending; ties broken by post id ascending."""
    if len(index) == 0:
        raise VectorSpaceError("empty index")
    if len(query) != index.vectors.shape[1]:
        raise ValueError("query dimension mismatch")
    qnorm = float(np.linalg.norm(query))
    norms = np.linalg.norm(index.vectors, axis=1)
    sims = np.zeros(len(index))
    if qnorm != 0.0:
        nz = norms > 0.0
        unit_rows = index.vectors[nz] / norms[nz, np.newaxis]
        sims[nz] = np.clip(unit_rows @ (query / qnorm), -1.0, 1.0)
    order = sorted(range(len(index)), key=lambda i: (-sims[i], index.refs[i][0]))
    top_n = max(0, top_n)
    return [(index.refs[i], float(sims[i])) for i in order[:top_n]]


# --- Index persistence -----------------------------------------------------
#
# A saved index is a directory:
#   vocab.txt     one term per line, line number = term id, UTF-8
#   docrefs.txt   one JSON array [post id, source] per line, row order
#   arrays.bin    "LSIX" magic, u32 version, u64 V/D/k_eff, then df, idf,
#                 sigma as little-endian float64
#   matrices.bin  U (V x k_eff) then document matrix (D x k_eff),
#                 row-major little-endian float64

_MAGIC = b"LSIX"
_VERSION = 1


def _write_f64(fh, arr: np.ndarray) -> None:
    fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def save_index(path, tfidf: TfIdfModel, lsi: LsiModel,
               index: SimilarityIndex) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    vocab_lines = "\n".join(tfidf.vocab.id_to_term)
    (path / "vocab.txt").write_text(vocab_lines + "\n", encoding="utf-8")
    with (path / "docrefs.txt").open("w", encoding="utf-8", newline="\n") as fh:
        for ref in index.refs:
            fh.write(json.dumps(list(ref), ensure_ascii=False))
            fh.write("\n")
    v = tfidf.vocab.size
    d = len(index)
    with (path / "arrays.bin").open("wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IQQQ", _VERSION, v, d, lsi.k_eff))
        _write_f64(fh, tfidf.df.astype(np.float64))
        _write_f64(fh, tfidf.idf)
        _write_f64(fh, lsi.sigma)
    with (path / "matrices.bin").open("wb") as fh:
        _write_f64(fh, lsi.u)
        _write_f64(fh, index.vectors)


def load_index(path) -> tuple[TfIdfModel, LsiModel, SimilarityIndex]:
    path = Path(path)
    terms = (path / "vocab.txt").read_text(encoding="utf-8").splitlines()
    refs = []
    for line in (path / "docrefs.txt").read_text(encoding="utf-8").splitlines():
        pid, source = json.loads(line)
        refs.append((pid, source))
    blob = (path / "arrays.bin").read_bytes()
    if blob[:4] != _MAGIC:
        raise VectorSpaceError("bad magic in arrays.bin")
    version, v, d, k_eff = struct.unpack_from("<IQQQ", blob, 4)
    if version != _VERSION:
        raise VectorSpaceError(f"unsupported index version {version}")
    if v != len(terms):
        raise VectorSpaceError("vocabulary size mismatch")
    if d != len(refs):
        raise VectorSpaceError("document count mismatch")
    offset = 4 + struct.calcsize("<IQQQ")
    nums = np.frombuffer(blob, dtype="<f8", offset=offset)
    if len(nums) != 2 * v + k_eff:
        raise VectorSpaceError("arrays.bin truncated")
    df = nums[:v].astype(np.int64)
    idf = nums[v : 2 * v].copy()
    sigma = nums[2 * v :].copy()
    mats = np.frombuffer((path / "matrices.bin").read_bytes(), dtype="<f8")
    if len(mats) != (v + d) * k_eff:
        raise VectorSpaceError("matrices.bin truncated")
    u = mats[: v * k_eff].reshape(v, k_eff).copy()
    doc_vecs = mats[v * k_eff :].reshape(d, k_eff).copy()
    vocab = Vocabulary(term_to_id={t: i for i, t in enumerate(terms)},
                       id_to_term=terms)
    tfidf = TfIdfModel(vocab=vocab, doc_count=d, df=df, idf=idf)
    lsi = LsiModel(k=k_eff, k_eff=k_eff, u=u, sigma=sigma)
    return tfidf, lsi, SimilarityIndex(vectors=doc_vecs, refs=refs)
