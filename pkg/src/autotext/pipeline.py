"""The text classifier induced by a configuration, and its cached building blocks."""

from __future__ import annotations

import threading
from collections import Counter, OrderedDict
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .classifier import LinearModel, TrainOptions, train
from .space import Configuration
from .tokenize import TokenizerSet, run_tokenizer, tokenize
from .transform import PreprocessConfig, apply_transform_chain
from .vectorize import (
    DegenerateVocabularyError,
    Vocabulary,
    WeightingConfig,
    frequency_mask,
    vectorize_many,
    weight_matrix,
)

FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class TextModel:
    """A trained classifier: transforms, tokenizers, vocabulary, weighting and SVM."""

    prep: PreprocessConfig
    tokenizers: TokenizerSet
    weighting: WeightingConfig
    vocab: Vocabulary
    classifier: LinearModel
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if len(self.vocab) != self.classifier.dim:
            raise ValueError(
                f"vocabulary size {len(self.vocab)} != classifier dimension {self.classifier.dim}"
            )

    def bags(self, texts: Sequence[str]) -> list[Counter]:
        return [tokenize(self.tokenizers, apply_transform_chain(self.prep, t)) for t in texts]

    def vectors(self, texts: Sequence[str]) -> sp.csr_matrix:
        return vectorize_many(self.vocab, self.weighting, self.bags(texts))

    def decision_values(self, texts: Sequence[str]) -> np.ndarray:
        return self.classifier.decision_matrix(self.vectors(texts))

    def predict(self, texts: Sequence[str]) -> list[str]:
        return self.classifier.predict_many(self.vectors(texts))


def _counts_for(texts: Sequence[str], tokenizer: str) -> tuple[list[str], sp.csr_matrix]:
    bags = [Counter(run_tokenizer(tokenizer, t)) for t in texts]
    tokens = sorted(set().union(*bags)) if bags else []
    index = {t: i for i, t in enumerate(tokens)}
    indptr = np.cumsum([0] + [len(b) for b in bags])
    indices = np.fromiter((index[t] for b in bags for t in b), dtype=np.int64, count=indptr[-1])
    data = np.fromiter((c for b in bags for c in b.values()), dtype=np.float64, count=indptr[-1])
    X = sp.csr_matrix((data, indices, indptr), shape=(len(texts), len(tokens)))
    X.sort_indices()
    return tokens, X


class FeatureCache:
    """Token count matrices over a fixed list of texts.

    Counts are cached per (preprocessing, tokenizer) pair, so configurations
    that differ only in weighting or in other tokenizer switches reuse them.
    """

    def __init__(self, texts: Sequence[str], maxsize: int = 256):
        self.texts = list(texts)
        self.maxsize = maxsize
        self._transformed: OrderedDict = OrderedDict()
        self._counts: OrderedDict = OrderedDict()
        self._lock = threading.RLock()

    def _lru(self, table: OrderedDict, key, build):
        with self._lock:
            if key in table:
                table.move_to_end(key)
                return table[key]
            value = build()
            table[key] = value
            if len(table) > self.maxsize:
                table.popitem(last=False)
            return value

    def transformed(self, prep: PreprocessConfig) -> list[str]:
        return self._lru(
            self._transformed,
            prep,
            lambda: [apply_transform_chain(prep, t) for t in self.texts],
        )

    def counts(self, prep: PreprocessConfig, tokenizer: str) -> tuple[list[str], sp.csr_matrix]:
        return self._lru(
            self._counts,
            (prep, tokenizer),
            lambda: _counts_for(self.transformed(prep), tokenizer),
        )

    def matrix(self, prep: PreprocessConfig, tokenizers: TokenizerSet) -> tuple[list[str], sp.csr_matrix]:
        """Columns are namespaced tokens in lexicographic order."""
        tokenizers.validate()
        # namespace prefixes never prefix one another, so sorting by
        # tokenizer name keeps the concatenated columns sorted
        parts = [self.counts(prep, name) for name in sorted(tokenizers.enabled)]
        tokens = [t for toks, _ in parts for t in toks]
        X = sp.hstack([X for _, X in parts], format="csr")
        return tokens, X


@dataclass
class FittedSplit:
    columns: np.ndarray  # selected columns of the full count matrix
    idf: np.ndarray | None
    classifier: LinearModel


def fit_counts(
    X_train: sp.csr_matrix,
    labels: Sequence[str],
    weighting: WeightingConfig,
    opts: TrainOptions,
) -> FittedSplit:
    """Fit filters, weighting and classifier on a training count matrix.

    Raises DegenerateVocabularyError when no column survives the filters.
    """
    X_train = sp.csr_matrix(X_train)
    cf = np.asarray(X_train.sum(axis=0)).ravel()
    present = np.flatnonzero(X_train.getnnz(axis=0) > 0)
    keep = frequency_mask(cf[present], weighting)
    columns = present[keep]
    if len(columns) == 0:
        raise DegenerateVocabularyError("no token survives the frequency filters")
    sub = X_train[:, columns]
    idf = None
    if weighting.scheme == "TFIDF":
        df = sub.getnnz(axis=0)
        idf = np.log(X_train.shape[0] / df)
    clf = train(weight_matrix(sub, idf), labels, opts)
    return FittedSplit(columns, idf, clf)


def predict_counts(fitted: FittedSplit, X: sp.csr_matrix) -> list[str]:
    return fitted.classifier.predict_many(weight_matrix(X[:, fitted.columns], fitted.idf))


def fit_model(
    config: Configuration,
    texts: Sequence[str],
    labels: Sequence[str],
    opts: TrainOptions = TrainOptions(),
    cache: FeatureCache | None = None,
) -> TextModel:
    """Train the full pipeline of ``config`` on every given example."""
    prep, toks, weighting = config.prep, config.tokenizers, config.weighting
    toks.validate()
    cache = cache or FeatureCache(texts)
    tokens, X = cache.matrix(prep, toks)
    fitted = fit_counts(X, labels, weighting, opts)
    sub = X[:, fitted.columns]
    vocab = Vocabulary(
        tuple(tokens[j] for j in fitted.columns),
        np.asarray(sub.sum(axis=0)).ravel().astype(np.int64),
        sub.getnnz(axis=0).astype(np.int64),
        X.shape[0],
    )
    return TextModel(prep, toks, weighting, vocab, fitted.classifier)
