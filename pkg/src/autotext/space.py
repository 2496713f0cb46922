"""The configuration space, its Hamming geometry and random sampling.

A configuration is a tuple with one value per slot.  Slots flagged as
tokenizer switches must not be all off at once; such tuples are excluded
from the space.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import transform, vectorize
from .tokenize import TOKENIZER_NAMES, ConfigurationError, TokenizerSet

CLASSIFIERS = ("linear_svm",)


@dataclass(frozen=True)
class Slot:
    name: str
    domain: tuple
    switch: bool = False  # tokenizer on/off slot, part of the at-least-one rule
    neutral: object = None  # value used by SpaceDescriptor.make when unspecified

    def __post_init__(self):
        if not self.domain:
            raise ValueError(f"slot {self.name!r} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError(f"slot {self.name!r} has repeated values")


@dataclass(frozen=True)
class SpaceDescriptor:
    slots: tuple[Slot, ...]
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pos = {s.name: i for i, s in enumerate(self.slots)}
        if len(pos) != len(self.slots):
            raise ValueError("slot names must be unique")
        object.__setattr__(self, "_pos", pos)

    def __len__(self) -> int:
        return len(self.slots)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.slots)

    def position(self, name: str) -> int:
        return self._pos[name]

    def slot(self, name: str) -> Slot:
        return self.slots[self._pos[name]]

    @classmethod
    def of(cls, **domains: Sequence) -> "SpaceDescriptor":
        """Unconstrained space from keyword slot domains, in argument order."""
        return cls(tuple(Slot(name, tuple(d)) for name, d in domains.items()))

    @classmethod
    def default(cls) -> "SpaceDescriptor":
        slots = [Slot(kind, transform.modes_for(kind), neutral="identity") for kind in transform.SLOTS]
        slots += [Slot(name, (False, True), switch=True, neutral=False) for name in TOKENIZER_NAMES]
        slots += [
            Slot("max_filter_alpha", vectorize.ALPHAS, neutral=1.0),
            Slot("min_filter_freq", vectorize.MIN_FREQS, neutral=1),
            Slot("scheme", vectorize.SCHEMES),
            Slot("classifier", CLASSIFIERS),
        ]
        return cls(tuple(slots))

    def restrict(self, **domains: Sequence) -> "SpaceDescriptor":
        """Copy of this space with some slot domains narrowed."""
        slots = []
        for s in self.slots:
            if s.name in domains:
                narrowed = tuple(domains[s.name])
                bad = [v for v in narrowed if v not in s.domain]
                if bad:
                    raise ValueError(f"values {bad} not in domain of {s.name!r}")
                s = Slot(s.name, narrowed, s.switch, s.neutral)
            slots.append(s)
        unknown = set(domains) - set(self.names)
        if unknown:
            raise ValueError(f"unknown slots: {sorted(unknown)}")
        return SpaceDescriptor(tuple(slots))

    def is_valid(self, values: Sequence) -> bool:
        if len(values) != len(self.slots):
            return False
        if any(v not in s.domain for v, s in zip(values, self.slots)):
            return False
        switches = [v for v, s in zip(values, self.slots) if s.switch]
        return not switches or any(switches)

    def config(self, values: Sequence) -> "Configuration":
        values = tuple(values)
        if not self.is_valid(values):
            raise ConfigurationError(f"invalid configuration values: {values}")
        return Configuration(self, values)

    def make(self, **values) -> "Configuration":
        """Configuration from keyword values.

        Missing slots take their neutral value when it is in the domain (the
        identity transform, no filtering, tokenizer off), else the first one.
        """
        unknown = set(values) - set(self.names)
        if unknown:
            raise ValueError(f"unknown slots: {sorted(unknown)}")

        def fallback(s: Slot):
            return s.neutral if s.neutral is not None and s.neutral in s.domain else s.domain[0]

        return self.config(values.get(s.name, fallback(s)) for s in self.slots)

    def __iter__(self) -> Iterator["Configuration"]:
        """Every valid configuration, in slot-major domain order."""
        for values in itertools.product(*(s.domain for s in self.slots)):
            if self.is_valid(values):
                yield Configuration(self, values)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)


@dataclass(frozen=True)
class Configuration:
    space: SpaceDescriptor = field(repr=False)
    values: tuple

    def __getitem__(self, name: str):
        return self.values[self.space.position(name)]

    def key(self) -> str:
        """Canonical encoding used for memo keys and tie-breaking."""
        return "|".join(f"{s.name}={_fmt(v)}" for s, v in zip(self.space.slots, self.values))

    def replace(self, **changes) -> "Configuration":
        vals = list(self.values)
        for name, v in changes.items():
            vals[self.space.position(name)] = v
        return self.space.config(vals)

    # views for configurations of the text classification space

    @property
    def prep(self) -> transform.PreprocessConfig:
        return transform.PreprocessConfig(**{k: self[k] for k in transform.SLOTS})

    @property
    def tokenizers(self) -> TokenizerSet:
        return TokenizerSet(tuple(n for n in TOKENIZER_NAMES if self[n]))

    @property
    def weighting(self) -> vectorize.WeightingConfig:
        return vectorize.WeightingConfig(
            self["max_filter_alpha"], self["min_filter_freq"], self["scheme"]
        )

    def to_json(self) -> dict:
        if set(self.space.names) != set(SpaceDescriptor.default().names):
            return {s.name: v for s, v in zip(self.space.slots, self.values)}
        return {
            "prep": self.prep.to_dict(),
            "tokenizers": self.tokenizers.to_list(),
            "weighting": self.weighting.to_dict(),
            "classifier": self["classifier"],
        }


def from_json(d: dict, space: SpaceDescriptor | None = None) -> Configuration:
    """Inverse of :meth:`Configuration.to_json` for the text classification space."""
    space = space or SpaceDescriptor.default()
    try:
        prep = transform.PreprocessConfig.from_dict(d["prep"])
        toks = TokenizerSet.of(d["tokenizers"])
        weighting = vectorize.WeightingConfig.from_dict(d["weighting"])
        classifier = d.get("classifier", CLASSIFIERS[0])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed configuration: {exc}") from exc
    toks.validate()
    values = dict(prep.to_dict())
    values.update({n: n in toks.enabled for n in TOKENIZER_NAMES})
    values.update(weighting.to_dict())
    values["classifier"] = classifier
    try:
        return space.config(values[name] for name in space.names)
    except KeyError as exc:
        raise ConfigurationError(f"configuration lacks slot {exc}") from exc


def config_from_parts(
    prep: transform.PreprocessConfig,
    tokenizers: TokenizerSet,
    weighting: vectorize.WeightingConfig,
    space: SpaceDescriptor | None = None,
) -> Configuration:
    return from_json(
        {"prep": prep.to_dict(), "tokenizers": tokenizers.to_list(), "weighting": weighting.to_dict()},
        space,
    )


def space_size(space: SpaceDescriptor) -> int:
    """Number of valid configurations, computed from slot cardinalities."""
    free = math.prod(len(s.domain) for s in space.slots if not s.switch)
    switches = [s for s in space.slots if s.switch]
    if not switches:
        return free
    all_off = int(all(False in s.domain for s in switches))
    return free * (math.prod(len(s.domain) for s in switches) - all_off)


def delta(a: tuple[str, object], b: tuple[str, object]) -> int:
    """1 if two values of the same slot differ, 0 if they are the same."""
    if a[0] != b[0]:
        raise ValueError(f"cannot compare values of slots {a[0]!r} and {b[0]!r}")
    return int(a[1] != b[1])


def hamming_distance(u: Configuration, v: Configuration) -> int:
    if u.space != v.space:
        raise ValueError("configurations belong to different spaces")
    return sum(
        delta((s.name, x), (s.name, y)) for s, x, y in zip(u.space.slots, u.values, v.values)
    )


def neighborhood(c: Configuration, r: int = 1) -> list[Configuration]:
    """Valid configurations at Hamming distance 1..r from ``c``.

    Ordered by distance, then slot order, then domain order.
    """
    if r < 1:
        raise ValueError("radius must be >= 1")
    space = c.space
    out = []
    for d in range(1, min(r, len(space)) + 1):
        for positions in itertools.combinations(range(len(space)), d):
            alternatives = [
                [v for v in space.slots[i].domain if v != c.values[i]] for i in positions
            ]
            for choice in itertools.product(*alternatives):
                vals = list(c.values)
                for i, v in zip(positions, choice):
                    vals[i] = v
                if space.is_valid(vals):
                    out.append(Configuration(space, tuple(vals)))
    return out


def random_config(space: SpaceDescriptor, rng: random.Random | int) -> Configuration:
    """Uniform independent choice per slot; switches resampled until one is on."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    vals = [rng.choice(s.domain) for s in space.slots]
    switch_pos = [i for i, s in enumerate(space.slots) if s.switch]
    while switch_pos and not any(vals[i] for i in switch_pos):
        for i in switch_pos:
            vals[i] = rng.choice(space.slots[i].domain)
    return space.config(vals)
