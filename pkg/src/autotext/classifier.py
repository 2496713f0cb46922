"""One-vs-rest linear SVM trained by dual coordinate descent.

Each binary problem solves the dual of the L2-regularized hinge-loss SVM

    min_a  0.5 a'Qa - sum(a)   s.t.  0 <= a_i <= C,   Q_ij = y_i y_j x_i.x_j

updating one dual variable at a time (Hsieh et al., 2008).  The bias is a
constant feature of value 1 appended to every example, so it is regularized
like any other weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np
import scipy.sparse as sp

from .vectorize import SparseVector


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class TrainOptions:
    hyper_c: float = 1.0
    tolerance: float = 1e-3
    max_epochs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not self.hyper_c > 0:
            raise ValueError("hyper_c must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")


@dataclass(frozen=True, eq=False)
class LinearModel:
    classes: tuple[str, ...]
    weights: np.ndarray  # (n_classes, dim)
    bias: np.ndarray  # (n_classes,)
    hyper_c: float = 1.0

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def decision_matrix(self, X) -> np.ndarray:
        """Decision values for every row of ``X`` (sparse or dense)."""
        X = _as_matrix(X, self.dim)
        return np.asarray(X @ self.weights.T) + self.bias

    def predict_many(self, X) -> list[str]:
        # np.argmax returns the first maximum, i.e. the lowest class index
        idx = np.argmax(self.decision_matrix(X), axis=1)
        return [self.classes[i] for i in idx]


def _as_matrix(X, dim: int):
    if isinstance(X, SparseVector):
        X = [X]
    if isinstance(X, (list, tuple)):
        if X and isinstance(X[0], SparseVector):
            return _stack(X, dim)
        X = np.asarray(X, dtype=np.float64)
    if not sp.issparse(X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] < dim:
        # shorter inputs are zero-padded
        X = sp.hstack([sp.csr_matrix(X), sp.csr_matrix((X.shape[0], dim - X.shape[1]))])
    elif X.shape[1] > dim:
        raise ValueError(f"input dimension {X.shape[1]} exceeds model dimension {dim}")
    return sp.csr_matrix(X)


def _stack(vectors: Sequence[SparseVector], dim: int | None = None) -> sp.csr_matrix:
    width = dim if dim is not None else max(v.dim for v in vectors)
    indptr = np.cumsum([0] + [len(v.indices) for v in vectors])
    indices = np.concatenate([v.indices for v in vectors]) if vectors else np.zeros(0)
    data = np.concatenate([v.weights for v in vectors]) if vectors else np.zeros(0)
    return sp.csr_matrix((data, indices.astype(np.int64), indptr), shape=(len(vectors), width))


@numba.njit(cache=True, nogil=True)
def _dcd_epoch(indptr, indices, data, qdiag, y, alpha, w, order, C):
    """One sweep over ``order``; returns (max projected gradient, min projected gradient)."""
    pg_max = -np.inf
    pg_min = np.inf
    dim = w.shape[0] - 1
    for i in order:
        start, stop = indptr[i], indptr[i + 1]
        wx = w[dim]
        for p in range(start, stop):
            wx += w[indices[p]] * data[p]
        g = y[i] * wx - 1.0
        a = alpha[i]
        if a == 0.0:
            pg = min(g, 0.0)
        elif a == C:
            pg = max(g, 0.0)
        else:
            pg = g
        if pg > pg_max:
            pg_max = pg
        if pg < pg_min:
            pg_min = pg
        if pg != 0.0 and qdiag[i] > 0.0:
            new = min(max(a - g / qdiag[i], 0.0), C)
            d = (new - a) * y[i]
            alpha[i] = new
            for p in range(start, stop):
                w[indices[p]] += d * data[p]
            w[dim] += d
    return pg_max, pg_min


def fit_binary(X: sp.csr_matrix, y: np.ndarray, opts: TrainOptions) -> tuple[np.ndarray, float]:
    """Fit one separator for labels ``y`` in {-1, +1}; returns (weights, bias)."""
    n, dim = X.shape
    X = sp.csr_matrix(X, dtype=np.float64)
    qdiag = np.asarray(X.multiply(X).sum(axis=1)).ravel() + 1.0
    alpha = np.zeros(n)
    w = np.zeros(dim + 1)
    rng = np.random.default_rng(opts.seed)
    indptr = X.indptr.astype(np.int64)
    indices = X.indices.astype(np.int64)
    y = y.astype(np.float64)
    for _ in range(opts.max_epochs):
        order = rng.permutation(n)
        pg_max, pg_min = _dcd_epoch(indptr, indices, X.data, qdiag, y, alpha, w, order, opts.hyper_c)
        if pg_max - pg_min < opts.tolerance:
            break
    return w[:dim], float(w[dim])


def train(X, labels: Sequence[str], opts: TrainOptions = TrainOptions()) -> LinearModel:
    """Train a one-vs-rest linear SVM.

    ``X`` is a sparse or dense (n, dim) matrix, or a list of SparseVector all
    sharing one dimension.  Classes are ordered by sorted label.
    """
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], SparseVector):
        dims = {v.dim for v in X}
        if len(dims) != 1:
            raise TrainingError(f"vectors have mismatched dimensions: {sorted(dims)}")
        X = _stack(X)
    X = sp.csr_matrix(X, dtype=np.float64)
    labels = list(labels)
    if X.shape[0] != len(labels):
        raise TrainingError("number of vectors and labels differ")
    classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise TrainingError("training data needs at least two distinct labels")
    y_all = np.array(labels, dtype=object)
    weights = np.zeros((len(classes), X.shape[1]))
    bias = np.zeros(len(classes))
    for k, cls in enumerate(classes):
        y = np.where(y_all == cls, 1.0, -1.0)
        weights[k], bias[k] = fit_binary(X, y, opts)
    return LinearModel(classes, weights, bias, opts.hyper_c)


def decision_values(model: LinearModel, x) -> list[float]:
    return model.decision_matrix(x)[0].tolist()


def predict(model: LinearModel, x) -> str:
    return model.predict_many(x)[0]
