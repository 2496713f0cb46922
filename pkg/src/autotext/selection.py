"""Score function, validation schemes and the Random Search + Hill Climbing optimizer."""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .classifier import TrainOptions, TrainingError
from .metrics import METRICS, score_labels
from .pipeline import FeatureCache, TextModel, fit_counts, fit_model, predict_counts
from .space import Configuration, SpaceDescriptor, neighborhood, random_config, space_size
from .vectorize import DegenerateVocabularyError

logger = logging.getLogger(__name__)

Objective = Callable[[Configuration], float]


class Record(NamedTuple):
    text: str
    label: str


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class ValidationScheme:
    kind: str = "kfold"
    k: int = 3
    beta: float = 0.7
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("kfold", "binary_partition"):
            raise ValidationError(f"unknown validation scheme: {self.kind!r}")
        if self.k < 2:
            raise ValidationError("k must be >= 2")
        if not 0 < self.beta < 1:
            raise ValidationError("beta must lie in (0, 1)")

    def splits(self, data: Sequence[Record]) -> list[tuple[np.ndarray, np.ndarray]]:
        if self.kind == "kfold":
            return stratified_kfold(data, self.k, self.seed)
        return [binary_partition(data, self.beta, self.seed)]


def _class_sequences(data: Sequence[Record], seed: int) -> dict[str, list[int]]:
    """Per-class index lists in a seeded order that ignores input order.

    Items are first sorted by content, so permuting the dataset does not
    change which items end up together.
    """
    order = sorted(range(len(data)), key=lambda i: (data[i][1], data[i][0]))
    random.Random(seed).shuffle(order)
    by_class: dict[str, list[int]] = {}
    for i in order:
        by_class.setdefault(data[i][1], []).append(i)
    return {c: by_class[c] for c in sorted(by_class)}


def stratified_kfold(data: Sequence[Record], k: int, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """k (train, test) index pairs; test folds partition the data by class."""
    if k < 2:
        raise ValidationError("k must be >= 2")
    groups = _class_sequences(data, seed)
    for label, members in groups.items():
        if len(members) < k:
            raise ValidationError(f"class {label!r} has {len(members)} examples, fewer than k={k}")
    folds: list[list[int]] = [[] for _ in range(k)]
    # dealing continues across classes so fold sizes also stay within one
    j = 0
    for members in groups.values():
        for i in members:
            folds[j % k].append(i)
            j += 1
    out = []
    for f in range(k):
        train = [i for g in range(k) if g != f for i in folds[g]]
        out.append((np.array(train, dtype=np.int64), np.array(folds[f], dtype=np.int64)))
    return out


def binary_partition(data: Sequence[Record], beta: float, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Stratified split with round-half-up ``beta * n_class`` items per class in train."""
    if not 0 < beta < 1:
        raise ValidationError("beta must lie in (0, 1)")
    train, test = [], []
    for members in _class_sequences(data, seed).values():
        n_train = math.floor(beta * len(members) + 0.5)
        train += members[:n_train]
        test += members[n_train:]
    if not train or not test:
        raise ValidationError(
            f"beta={beta} leaves the {'train' if not train else 'test'} side empty"
        )
    return np.array(train, dtype=np.int64), np.array(test, dtype=np.int64)


class TextScorer:
    """Cross-validated score of the text classifier induced by a configuration.

    Splits are computed once; degenerate splits (empty vocabulary, a single
    class in train) contribute 0 to the mean.
    """

    def __init__(
        self,
        data: Sequence[Record],
        scheme: ValidationScheme = ValidationScheme(),
        metric: str = "macro_f1",
        train_opts: TrainOptions = TrainOptions(),
        cache: FeatureCache | None = None,
    ):
        if metric not in METRICS:
            raise ValueError(f"unknown metric: {metric!r}")
        if not data:
            raise ValidationError("dataset is empty")
        self.data = list(data)
        self.labels = [r[1] for r in self.data]
        self.scheme = scheme
        self.metric = metric
        self.train_opts = train_opts
        self.splits = scheme.splits(self.data)
        self.cache = cache or FeatureCache([r[0] for r in self.data])

    def __call__(self, config: Configuration) -> float:
        _, X = self.cache.matrix(config.prep, config.tokenizers)
        values = []
        for train_idx, test_idx in self.splits:
            y_train = [self.labels[i] for i in train_idx]
            try:
                fitted = fit_counts(X[train_idx], y_train, config.weighting, self.train_opts)
            except (DegenerateVocabularyError, TrainingError):
                values.append(0.0)
                continue
            pred = predict_counts(fitted, X[test_idx])
            values.append(score_labels(self.metric, [self.labels[i] for i in test_idx], pred))
        return float(np.mean(values))


def score(
    config: Configuration,
    data: Sequence[Record],
    scheme: ValidationScheme = ValidationScheme(),
    metric: str = "macro_f1",
) -> float:
    return TextScorer(data, scheme, metric)(config)


class Evaluation(NamedTuple):
    config: Configuration
    score: float
    phase: str


def _rank(item: tuple[float, str]) -> tuple[float, str]:
    # max score first, then the smallest canonical key
    return (-item[0], item[1])


@dataclass
class SearchState:
    """Evaluation memory shared by the search phases."""

    memo: dict[str, float] = field(default_factory=dict)
    configs: dict[str, Configuration] = field(default_factory=dict)
    trajectory: list[Evaluation] = field(default_factory=list)
    pipeline_calls: int = 0
    threads: int = 1

    @property
    def evaluations(self) -> int:
        return len(self.memo)

    @property
    def best(self) -> tuple[Configuration, float] | None:
        if not self.memo:
            return None
        key = min(self.memo, key=lambda k: _rank((self.memo[k], k)))
        return self.configs[key], self.memo[key]

    def evaluate(self, configs: Sequence[Configuration], objective: Objective, phase: str) -> list[float]:
        """Scores of ``configs``; only keys missing from the memo reach ``objective``.

        New results enter the memo and trajectory in input order, whatever
        order the worker threads finish in.
        """
        fresh: dict[str, Configuration] = {}
        for c in configs:
            k = c.key()
            if k not in self.memo and k not in fresh:
                fresh[k] = c
        todo = list(fresh.values())
        if self.threads > 1 and len(todo) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                results = list(pool.map(objective, todo))
        else:
            results = [objective(c) for c in todo]
        self.pipeline_calls += len(todo)
        for (k, c), s in zip(fresh.items(), results):
            self.memo[k] = float(s)
            self.configs[k] = c
            self.trajectory.append(Evaluation(c, float(s), phase))
        return [self.memo[c.key()] for c in configs]

    def report(self, final: Configuration | None = None, wall_time: float | None = None) -> dict:
        final = final or self.best[0]
        summary = {
            "best_config": final.to_json(),
            "best_score": self.memo[final.key()],
            "evaluations": self.evaluations,
        }
        if wall_time is not None:
            summary["wall_time"] = wall_time
        return {
            "evaluations": [
                {"config": e.config.to_json(), "score": e.score, "phase": e.phase}
                for e in self.trajectory
            ],
            "summary": summary,
        }


def random_search(
    space: SpaceDescriptor,
    objective: Objective,
    m: int,
    state: SearchState,
    seed: int | random.Random = 0,
) -> Configuration:
    """Best of ``m`` distinct, not yet memoized, uniformly sampled configurations.

    Stops early once every configuration of the space has been seen.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    total = space_size(space)
    seen = set(state.memo)
    sample: list[Configuration] = []
    while len(sample) < m and len(seen) < total:
        c = random_config(space, rng)
        k = c.key()
        if k in seen:
            continue
        seen.add(k)
        sample.append(c)
    if not sample:
        return state.best[0]
    scores = state.evaluate(sample, objective, "random")
    best = min(zip(scores, (c.key() for c in sample), sample), key=lambda t: _rank(t[:2]))
    logger.info("random search: best %.6f over %d samples", best[0], len(sample))
    return best[2]


def hill_climbing(start: Configuration, objective: Objective, state: SearchState) -> Configuration:
    """Greedy ascent over unit-distance neighbors until none strictly improves."""
    current = start
    current_score = state.evaluate([start], objective, "climb")[0]
    while True:
        nbrs = neighborhood(current, 1)
        if not nbrs:
            return current
        scores = state.evaluate(nbrs, objective, "climb")
        top_score, _, top = min(
            zip(scores, (c.key() for c in nbrs), nbrs), key=lambda t: _rank(t[:2])
        )
        if top_score <= current_score:
            return current
        logger.info("hill climbing: %.6f -> %.6f", current_score, top_score)
        current, current_score = top, top_score


def search(
    space: SpaceDescriptor,
    objective: Objective,
    m: int = 32,
    seed: int = 0,
    threads: int = 1,
) -> tuple[Configuration, SearchState]:
    """Random Search followed by Hill Climbing from its best configuration."""
    state = SearchState(threads=threads)
    start = random_search(space, objective, m, state, seed)
    final = hill_climbing(start, objective, state)
    return final, state


def optimize(
    space: SpaceDescriptor,
    data: Sequence[Record],
    m: int = 32,
    scheme: ValidationScheme = ValidationScheme(),
    metric: str = "macro_f1",
    seed: int = 0,
    threads: int = 1,
    train_opts: TrainOptions = TrainOptions(),
    cache: FeatureCache | None = None,
) -> tuple[Configuration, SearchState]:
    scorer = TextScorer(data, scheme, metric, train_opts, cache)
    t0 = time.perf_counter()
    final, state = search(space, scorer, m, seed, threads)
    logger.info(
        "optimize: score %.6f after %d evaluations in %.1fs",
        state.memo[final.key()], state.evaluations, time.perf_counter() - t0,
    )
    return final, state


def fit_final(
    config: Configuration,
    data: Sequence[Record],
    train_opts: TrainOptions = TrainOptions(),
) -> TextModel:
    """Train ``config`` on all of ``data``; degenerate pipelines raise."""
    return fit_model(config, [r[0] for r in data], [r[1] for r in data], train_opts)
