"""Automatic text classifier construction by search over preprocessing,
tokenization and weighting configurations."""

from .classifier import LinearModel, TrainOptions, train
from .metrics import confusion, evaluate, score_labels
from .pipeline import FeatureCache, TextModel
from .selection import (
    Record,
    SearchState,
    TextScorer,
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
from .space import (
    Configuration,
    SpaceDescriptor,
    Slot,
    hamming_distance,
    neighborhood,
    random_config,
    space_size,
)
from .tokenize import TokenizerSet, tokenize
from .transform import PreprocessConfig, apply_transform_chain
from .vectorize import Vocabulary, WeightingConfig, apply_filters, build_vocabulary, vectorize

__version__ = "0.1.0"
