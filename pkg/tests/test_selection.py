import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from autotext.classifier import TrainOptions, train
from autotext.pipeline import FeatureCache, fit_counts, predict_counts
from autotext.selection import (
    Record,
    SearchState,
    TextScorer,
    ValidationError,
    ValidationScheme,
    binary_partition,
    fit_final,
    hill_climbing,
    optimize,
    random_search,
    score,
    search,
    stratified_kfold,
)
from autotext.space import SpaceDescriptor, neighborhood, space_size
from autotext.tokenize import ConfigurationError, tokenize
from autotext.transform import apply_transform_chain
from autotext.vectorize import DegenerateVocabularyError, apply_filters, build_vocabulary, vectorize_many

DEFAULT = SpaceDescriptor.default()


def labeled(counts: dict) -> list[Record]:
    return [Record(f"{lab} item {i}", lab) for lab, n in counts.items() for i in range(n)]


def good_bad_corpus(n=20):
    rng = random.Random(0)
    filler = "the movie was plot actors scene long short".split()
    data = []
    for i in range(n):
        words = rng.sample(filler, 4)
        data.append(Record(" ".join(words + ["good"]), "pos"))
        data.append(Record(" ".join(rng.sample(filler, 4) + ["bad"]), "neg"))
    return data


# -- validation schemes ------------------------------------------------------


def test_kfold_one_per_class_per_fold():
    data = labeled({"a": 3, "b": 3, "c": 3})
    folds = stratified_kfold(data, 3, seed=0)
    for _, test in folds:
        assert sorted(data[i].label for i in test) == ["a", "b", "c"]


@given(sizes=st.lists(st.integers(3, 12), min_size=2, max_size=4), k=st.integers(2, 3), seed=st.integers(0, 99))
def test_kfold_partition_and_balance(sizes, k, seed):
    data = labeled({f"c{j}": n for j, n in enumerate(sizes)})
    folds = stratified_kfold(data, k, seed)
    tests = [set(t.tolist()) for _, t in folds]
    assert sum(len(t) for t in tests) == len(data)
    assert set().union(*tests) == set(range(len(data)))
    for train, test in folds:
        assert set(train.tolist()) == set(range(len(data))) - set(test.tolist())
    for lab in {r.label for r in data}:
        per_fold = [sum(data[i].label == lab for i in t) for t in tests]
        assert max(per_fold) - min(per_fold) <= 1
    assert max(map(len, tests)) - min(map(len, tests)) <= 1


def test_kfold_rejects_small_class():
    with pytest.raises(ValidationError, match="'b'"):
        stratified_kfold(labeled({"a": 5, "b": 1}), 2, 0)


def test_binary_partition_balanced():
    data = labeled({"a": 50, "b": 50})
    train, test = binary_partition(data, 0.5, seed=1)
    assert len(train) == len(test) == 50
    assert Counter(data[i].label for i in train) == {"a": 25, "b": 25}
    assert set(train) | set(test) == set(range(100))
    again = binary_partition(data, 0.5, seed=1)
    assert np.array_equal(train, again[0]) and np.array_equal(test, again[1])


def test_binary_partition_rounding_and_empty_side():
    # round half up: 0.5 * 5 = 2.5 -> 3 in train
    train, test = binary_partition(labeled({"a": 5}), 0.5, 0)
    assert (len(train), len(test)) == (3, 2)
    with pytest.raises(ValidationError):
        binary_partition(labeled({"a": 5, "b": 5}), 0.99, 0)


def test_scheme_validation():
    with pytest.raises(ValidationError):
        ValidationScheme(k=1)
    with pytest.raises(ValidationError):
        ValidationScheme(kind="binary_partition", beta=1.0)
    with pytest.raises(ValidationError):
        ValidationScheme(kind="bagging")


def test_splits_ignore_input_order():
    data = labeled({"a": 7, "b": 8})
    shuffled = data[:]
    random.Random(3).shuffle(shuffled)
    a = [(sorted(data[i] for i in tr), sorted(data[i] for i in te)) for tr, te in stratified_kfold(data, 3, 4)]
    b = [(sorted(shuffled[i] for i in tr), sorted(shuffled[i] for i in te)) for tr, te in stratified_kfold(shuffled, 3, 4)]
    assert a == b


# -- score ---------------------------------------------------------------------


def test_score_separable_corpus():
    c = DEFAULT.make(w1=True)
    assert score(c, good_bad_corpus(), ValidationScheme(k=2)) == 1.0


def test_score_degenerate_vocabulary_is_zero():
    c = DEFAULT.make(w1=True, min_filter_freq=10)
    data = [Record(f"w{i} x{i}", "ab"[i % 2]) for i in range(12)]
    assert score(c, data, ValidationScheme(k=2)) == 0.0


def test_score_deterministic_and_order_invariant(small_corpus):
    c = DEFAULT.make(w1=True, c3=True, scheme="TFIDF", case="apply")
    first = score(c, small_corpus)
    assert score(c, small_corpus) == first
    shuffled = small_corpus[:]
    random.Random(11).shuffle(shuffled)
    assert score(c, shuffled) == first


def test_scorer_rejects_bad_metric(small_corpus):
    with pytest.raises(ValueError):
        TextScorer(small_corpus, metric="auc")


def test_cached_path_matches_dictionary_path(small_corpus):
    """Scoring features equal those of the vocabulary/vectorize path on one fold."""
    c = DEFAULT.make(**{"w1": True, "c2": True, "s2.1": True, "duplication": "apply",
                        "max_filter_alpha": 0.95, "min_filter_freq": 3, "scheme": "TFIDF"})
    texts = [r.text for r in small_corpus]
    labels = [r.label for r in small_corpus]
    train_idx, test_idx = stratified_kfold(small_corpus, 3, 0)[0]
    cache = FeatureCache(texts)
    _, X = cache.matrix(c.prep, c.tokenizers)
    fitted = fit_counts(X[train_idx], [labels[i] for i in train_idx], c.weighting, TrainOptions())

    bags = [tokenize(c.tokenizers, apply_transform_chain(c.prep, t)) for t in texts]
    vocab = apply_filters(build_vocabulary([bags[i] for i in train_idx]), c.weighting)
    assert len(vocab) == len(fitted.columns)
    Xtr = vectorize_many(vocab, c.weighting, [bags[i] for i in train_idx])
    Xte = vectorize_many(vocab, c.weighting, [bags[i] for i in test_idx])
    clf = train(Xtr, [labels[i] for i in train_idx])
    assert np.allclose(clf.weights, fitted.classifier.weights, atol=1e-12)
    assert clf.predict_many(Xte) == predict_counts(fitted, X[test_idx])


# -- search on synthetic objectives -------------------------------------------


def toy_space():
    return SpaceDescriptor.of(a=(0, 1, 2), b=(0, 1, 2), c=(0, 1), d=(0, 1), e=(0, 1, 2, 3))


def slot_match(target):
    def objective(c):
        return sum(x == y for x, y in zip(c.values, target)) / len(target)

    return objective


def counting(objective):
    def wrapped(c):
        wrapped.calls += 1
        return objective(c)

    wrapped.calls = 0
    return wrapped


def brute_force_argmax(space, objective):
    return min(space, key=lambda c: (-objective(c), c.key()))


def test_random_search_single_sample():
    space = toy_space()
    state = SearchState()
    best = random_search(space, slot_match((0,) * 5), 1, state, seed=3)
    assert state.evaluations == 1 and state.trajectory[0].config == best


@pytest.mark.parametrize("seed", range(5))
def test_random_search_exhaustive_matches_brute_force(seed):
    space = toy_space()
    rng = random.Random(seed)
    table = {c.key(): rng.choice([0.1, 0.5, 0.9]) for c in space}  # many ties

    def objective(c):
        return table[c.key()]

    state = SearchState()
    best = random_search(space, objective, space_size(space), state, seed)
    assert state.evaluations == space_size(space)
    assert best == brute_force_argmax(space, objective)


def test_random_search_skips_memoized():
    space = toy_space()
    obj = counting(slot_match((1, 1, 1, 1, 1)))
    state = SearchState()
    random_search(space, obj, 30, state, 0)
    random_search(space, obj, 30, state, 1)
    assert obj.calls == state.evaluations == len(state.memo) == 60


def test_hill_climbing_stops_at_strict_local_max():
    space = toy_space()
    target = (2, 1, 0, 1, 3)
    obj = counting(slot_match(target))
    state = SearchState()
    start = space.config(target)
    assert hill_climbing(start, obj, state) == start
    assert obj.calls == 1 + len(neighborhood(start))


def test_hill_climbing_reaches_target_from_every_start():
    space = toy_space()
    target = (1, 2, 1, 0, 2)
    for start in space:
        state = SearchState()
        assert hill_climbing(start, slot_match(target), state).values == target
        keys = [e.config.key() for e in state.trajectory]
        assert len(keys) == len(set(keys))


@pytest.mark.parametrize("seed", range(8))
def test_hill_climbing_local_optimality(seed):
    space = toy_space()
    rng = random.Random(seed)
    table = {c.key(): rng.random() for c in space}
    obj = counting(lambda c: table[c.key()])
    state = SearchState()
    end = hill_climbing(space.config([0, 0, 0, 0, 0]), obj, state)
    assert all(table[end.key()] >= table[u.key()] for u in neighborhood(end))
    assert obj.calls == state.evaluations


def test_search_never_worse_than_random_phase():
    space = toy_space()
    rng = random.Random(9)
    table = {c.key(): rng.random() for c in space}

    def objective(c):
        return table[c.key()]

    for seed in range(10):
        final, state = search(space, objective, m=5, seed=seed)
        random_best = max(e.score for e in state.trajectory if e.phase == "random")
        assert table[final.key()] >= random_best
        assert len(state.trajectory) == len(state.memo)
        running = np.maximum.accumulate([e.score for e in state.trajectory])
        assert np.all(np.diff(running) >= 0)
        assert search(space, objective, m=5, seed=seed)[0] == final


def test_threads_do_not_change_results():
    space = toy_space()
    rng = random.Random(2)
    table = {c.key(): rng.random() for c in space}
    a = search(space, lambda c: table[c.key()], m=6, seed=1, threads=1)
    b = search(space, lambda c: table[c.key()], m=6, seed=1, threads=4)
    assert a[0] == b[0]
    assert [e.config.key() for e in a[1].trajectory] == [e.config.key() for e in b[1].trajectory]


def test_state_report_shape():
    space = toy_space()
    final, state = search(space, slot_match((0, 1, 0, 1, 0)), m=3, seed=0)
    rep = state.report(final)
    assert rep["summary"]["evaluations"] == len(rep["evaluations"]) == state.evaluations
    assert rep["summary"]["best_score"] == 1.0
    assert "wall_time" not in rep["summary"]
    assert {e["phase"] for e in rep["evaluations"]} == {"random", "climb"}


# -- end to end on text ------------------------------------------------------------


def test_optimize_on_text(small_corpus):
    space = DEFAULT.restrict(**{n: (False,) for n in ("c6", "c7", "c8", "c9", "w3", "s3.1")})
    final, state = optimize(space, small_corpus, m=4, seed=2)
    assert state.pipeline_calls == state.evaluations
    assert 0.0 <= state.memo[final.key()] <= 1.0
    assert all(state.memo[final.key()] >= state.memo.get(u.key(), -1) for u in neighborhood(final))
    again, _ = optimize(space, small_corpus, m=4, seed=2)
    assert again == final


def test_fit_final_predicts_training_items():
    data = good_bad_corpus()
    model = fit_final(DEFAULT.make(w1=True), data)
    assert model.predict([r.text for r in data]) == [r.label for r in data]
    assert model.vocab.n_docs == len(data)


def test_fit_final_is_strict():
    data = [Record(f"w{i}", "ab"[i % 2]) for i in range(6)]
    with pytest.raises(DegenerateVocabularyError):
        fit_final(DEFAULT.make(w1=True, min_filter_freq=10), data)
    with pytest.raises(ConfigurationError):
        DEFAULT.make()
