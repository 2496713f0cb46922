import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from autotext.vectorize import (
    ALPHAS,
    MIN_FREQS,
    SCHEMES,
    DegenerateVocabularyError,
    WeightingConfig,
    apply_filters,
    build_vocabulary,
    vectorize,
)

bag_st = st.dictionaries(st.sampled_from("abcdefgh"), st.integers(1, 5), max_size=6).map(Counter)
corpus_st = st.lists(bag_st, min_size=1, max_size=8).filter(lambda c: any(c))
cfg_st = st.builds(
    WeightingConfig, st.sampled_from(ALPHAS), st.sampled_from(MIN_FREQS), st.sampled_from(SCHEMES)
)


def test_weighting_domain_size():
    import itertools

    assert len({WeightingConfig(*v) for v in itertools.product(ALPHAS, MIN_FREQS, SCHEMES)}) == 32
    with pytest.raises(ValueError):
        WeightingConfig(0.5, 1, "TF")


def test_build_vocabulary():
    v = build_vocabulary([Counter(a=2, b=1), Counter(a=1)])
    assert v.tokens == ("a", "b")
    assert v.stats("a") == (0, 3, 2)
    assert v.stats("b") == (1, 1, 1)
    assert v.n_docs == 2
    v = build_vocabulary([Counter(x=1)])
    assert v.stats("x") == (0, 1, 1) and v.n_docs == 1


def test_build_vocabulary_errors():
    with pytest.raises(ValueError):
        build_vocabulary([])
    with pytest.raises(DegenerateVocabularyError):
        build_vocabulary([Counter()])


def test_max_filter_removes_most_frequent():
    v = build_vocabulary([Counter(the=100, cat=40, sat=10)])
    out = apply_filters(v, WeightingConfig(0.9, 1, "TF"))
    # threshold 0.9 * 100 = 90
    assert out.tokens == ("cat", "sat")
    assert out.stats("sat")[0] == 1


def test_no_filtering_at_neutral_values():
    v = build_vocabulary([Counter(the=100, cat=40, sat=10)])
    assert apply_filters(v, WeightingConfig(1.0, 1, "TF")) == v


def test_filters_can_empty_vocabulary():
    v = build_vocabulary([Counter(a=2, b=1)])
    with pytest.raises(DegenerateVocabularyError):
        apply_filters(v, WeightingConfig(1.0, 3, "TF"))


def test_tfidf_worked_example():
    v = build_vocabulary([Counter(a=2, b=1), Counter(a=1)])
    cfg = WeightingConfig(scheme="TFIDF")
    x = vectorize(v, cfg, Counter(a=2, b=1))
    # idf(a) = ln(2/2) = 0, so only b survives and normalizes to 1
    assert x.to_dict() == {1: pytest.approx(1.0, abs=1e-12)}
    x = vectorize(v, WeightingConfig(scheme="TF"), Counter(a=1))
    assert x.to_dict() == {0: pytest.approx(1.0)}
    x = vectorize(v, cfg, Counter(z=5))
    assert len(x.indices) == 0 and x.dim == 2


def test_tf_values_by_hand():
    v = build_vocabulary([Counter(a=3, b=1), Counter(b=1, c=2)])
    x = vectorize(v, WeightingConfig(), Counter(a=3, b=1, zzz=7))
    norm = math.sqrt(0.75**2 + 0.25**2)
    assert x.to_dense() == pytest.approx([0.75 / norm, 0.25 / norm, 0.0])


@given(corpus=corpus_st, cfg=cfg_st)
def test_filter_monotone_and_compact(corpus, cfg):
    v = build_vocabulary(corpus)
    try:
        out = apply_filters(v, cfg)
    except DegenerateVocabularyError:
        return
    assert len(out) <= len(v)
    assert list(out.tokens) == sorted(out.tokens)
    assert sorted(out.index.values()) == list(range(len(out)))
    assert (out.doc_freq >= 1).all() and (out.doc_freq <= out.n_docs).all()
    assert (out.collection_freq >= out.doc_freq).all()


@given(corpus=corpus_st, cfg=cfg_st, bag=bag_st)
def test_vectors_unit_norm(corpus, cfg, bag):
    v = build_vocabulary(corpus)
    try:
        v = apply_filters(v, cfg)
    except DegenerateVocabularyError:
        return
    x = vectorize(v, cfg, bag)
    assert np.all(np.diff(x.indices) > 0)
    assert np.all(np.isfinite(x.weights))
    if len(x.weights):
        assert abs(np.linalg.norm(x.weights) - 1.0) <= 1e-9
    y = vectorize(v, cfg, bag)
    assert np.array_equal(x.indices, y.indices) and np.array_equal(x.weights, y.weights)


@given(corpus=corpus_st)
def test_tfidf_zero_for_ubiquitous_tokens(corpus):
    v = build_vocabulary(corpus)
    idf = v.idf()
    assert np.all(idf[v.doc_freq == v.n_docs] == 0.0)
