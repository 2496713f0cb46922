"""Vocabulary construction, frequency filters and TF / TFIDF weighting."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

ALPHAS = (0.9, 0.95, 0.99, 1.0)
MIN_FREQS = (1, 3, 5, 10)
SCHEMES = ("TF", "TFIDF")


class DegenerateVocabularyError(ValueError):
    """The filters left no token in the vocabulary."""


@dataclass(frozen=True)
class WeightingConfig:
    max_filter_alpha: float = 1.0
    min_filter_freq: int = 1
    scheme: str = "TF"

    def __post_init__(self):
        if self.max_filter_alpha not in ALPHAS:
            raise ValueError(f"max_filter_alpha must be one of {ALPHAS}")
        if self.min_filter_freq not in MIN_FREQS:
            raise ValueError(f"min_filter_freq must be one of {MIN_FREQS}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")

    def to_dict(self) -> dict:
        return {
            "max_filter_alpha": self.max_filter_alpha,
            "min_filter_freq": self.min_filter_freq,
            "scheme": self.scheme,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WeightingConfig":
        return cls(float(d["max_filter_alpha"]), int(d["min_filter_freq"]), d["scheme"])


@dataclass(frozen=True, eq=False)
class Vocabulary:
    """Sorted token table with collection and document frequencies.

    Token ids are positions in ``tokens``, which is kept in lexicographic order.
    """

    tokens: tuple[str, ...]
    collection_freq: np.ndarray
    doc_freq: np.ndarray
    n_docs: int
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.tokens)})

    def __len__(self) -> int:
        return len(self.tokens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return (
            self.tokens == other.tokens
            and self.n_docs == other.n_docs
            and np.array_equal(self.collection_freq, other.collection_freq)
            and np.array_equal(self.doc_freq, other.doc_freq)
        )

    def stats(self, token: str) -> tuple[int, int, int]:
        """(id, collection_freq, doc_freq) of ``token``."""
        i = self.index[token]
        return i, int(self.collection_freq[i]), int(self.doc_freq[i])

    def idf(self) -> np.ndarray:
        return np.log(self.n_docs / self.doc_freq)

    def subset(self, keep: np.ndarray) -> "Vocabulary":
        """Vocabulary restricted to the boolean mask ``keep``; ids recompacted."""
        return Vocabulary(
            tuple(t for t, k in zip(self.tokens, keep) if k),
            self.collection_freq[keep],
            self.doc_freq[keep],
            self.n_docs,
        )

    @classmethod
    def from_counts(cls, tokens: Sequence[str], counts: sp.spmatrix) -> "Vocabulary":
        """Build from a (docs x tokens) count matrix whose columns are sorted tokens.

        Columns with no occurrence are dropped.
        """
        counts = sp.csc_matrix(counts)
        cf = np.asarray(counts.sum(axis=0)).ravel().astype(np.int64)
        df = np.diff(counts.indptr).astype(np.int64)
        if counts.nnz and counts.data.min() <= 0:
            counts.eliminate_zeros()
            df = np.diff(counts.indptr).astype(np.int64)
        keep = df > 0
        return cls(
            tuple(t for t, k in zip(tokens, keep) if k),
            cf[keep],
            df[keep],
            counts.shape[0],
        )


@dataclass(frozen=True)
class SparseVector:
    """Sorted (index, weight) pairs over a vocabulary of size ``dim``."""

    indices: np.ndarray
    weights: np.ndarray
    dim: int

    def to_dict(self) -> dict[int, float]:
        return dict(zip(self.indices.tolist(), self.weights.tolist()))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.weights
        return out


def build_vocabulary(corpus: Sequence[Counter]) -> Vocabulary:
    if not corpus:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    cf: Counter = Counter()
    df: Counter = Counter()
    for bag in corpus:
        for tok, c in bag.items():
            if c > 0:
                cf[tok] += c
                df[tok] += 1
    if not cf:
        raise DegenerateVocabularyError("corpus contains no tokens")
    tokens = tuple(sorted(cf))
    return Vocabulary(
        tokens,
        np.array([cf[t] for t in tokens], dtype=np.int64),
        np.array([df[t] for t in tokens], dtype=np.int64),
        len(corpus),
    )


def frequency_mask(collection_freq: np.ndarray, cfg: WeightingConfig) -> np.ndarray:
    """Boolean mask of tokens surviving the max-filter then the min-filter."""
    cf = collection_freq
    if len(cf) == 0:
        return np.zeros(0, dtype=bool)
    keep = cf <= cfg.max_filter_alpha * cf.max()
    keep &= cf >= cfg.min_filter_freq
    return keep


def filter_mask(vocab: Vocabulary, cfg: WeightingConfig) -> np.ndarray:
    return frequency_mask(vocab.collection_freq, cfg)


def apply_filters(vocab: Vocabulary, cfg: WeightingConfig) -> Vocabulary:
    keep = filter_mask(vocab, cfg)
    if not keep.any():
        raise DegenerateVocabularyError(
            f"filters (alpha={cfg.max_filter_alpha}, freq={cfg.min_filter_freq}) "
            "removed every token"
        )
    return vocab.subset(keep)


def weight_matrix(counts: sp.csr_matrix, idf: np.ndarray | None) -> sp.csr_matrix:
    """Relative term frequency, optionally times ``idf``, then row L2 norm.

    Rows with no in-vocabulary token stay all-zero.
    """
    X = sp.csr_matrix(counts, dtype=np.float64, copy=True)
    X.eliminate_zeros()
    totals = np.asarray(X.sum(axis=1)).ravel()
    rows = np.repeat(np.arange(X.shape[0]), np.diff(X.indptr))
    with np.errstate(divide="ignore", invalid="ignore"):
        X.data /= totals[rows]
    if idf is not None:
        X.data *= idf[X.indices]
    X.eliminate_zeros()
    norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
    rows = np.repeat(np.arange(X.shape[0]), np.diff(X.indptr))
    X.data /= norms[rows]
    X.sort_indices()
    return X


def count_matrix(bags: Sequence[Counter], vocab: Vocabulary) -> sp.csr_matrix:
    """Rows of in-vocabulary token counts; out-of-vocabulary tokens ignored."""
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    index = vocab.index
    for bag in bags:
        for tok, c in bag.items():
            j = index.get(tok)
            if j is not None and c > 0:
                indices.append(j)
                data.append(c)
        indptr.append(len(indices))
    X = sp.csr_matrix(
        (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int64), indptr),
        shape=(len(bags), len(vocab)),
    )
    X.sum_duplicates()
    return X


def vectorize_many(
    vocab: Vocabulary, cfg: WeightingConfig, bags: Sequence[Counter]
) -> sp.csr_matrix:
    idf = vocab.idf() if cfg.scheme == "TFIDF" else None
    return weight_matrix(count_matrix(bags, vocab), idf)


def vectorize(vocab: Vocabulary, cfg: WeightingConfig, bag: Counter) -> SparseVector:
    row = vectorize_many(vocab, cfg, [bag])
    return SparseVector(row.indices.astype(np.int64), row.data.copy(), len(vocab))
