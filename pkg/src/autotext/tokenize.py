"""Word n-gram, character n-gram and skip-gram tokenizers.

Tokens carry a family prefix (``w2:``, ``c4:``, ``s2.1:``) so that, for
example, the character trigram ``the`` and the word unigram ``the`` stay
distinct in the bag of tokens.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

WORD_NS = (1, 2, 3)
CHAR_NS = tuple(range(1, 10))
SKIP_PARAMS = ((3, 1), (2, 2), (2, 1))

TOKENIZER_NAMES: tuple[str, ...] = (
    tuple(f"w{n}" for n in WORD_NS)
    + tuple(f"c{n}" for n in CHAR_NS)
    + tuple(f"s{w}.{s}" for w, s in SKIP_PARAMS)
)

SKIP_JOINER = "~"


class ConfigurationError(ValueError):
    """Raised for configurations outside the valid space."""


def word_ngrams(n: int, text: str) -> list[str]:
    words = text.split()
    return [" ".join(words[i : i + n]) for i in range(len(words) - n + 1)]


def char_ngrams(n: int, text: str) -> list[str]:
    return [text[i : i + n] for i in range(len(text) - n + 1)]


def skip_grams(w: int, s: int, text: str) -> list[str]:
    """Tokens of ``w`` words, consecutive chosen words ``s`` words apart."""
    words = text.split()
    step = s + 1
    span = (w - 1) * step + 1
    return [
        SKIP_JOINER.join(words[i : i + span : step])
        for i in range(len(words) - span + 1)
    ]


def run_tokenizer(name: str, text: str) -> list[str]:
    """Apply the tokenizer called ``name`` and return namespaced tokens."""
    family, param = name[0], name[1:]
    if name not in TOKENIZER_NAMES:
        raise ConfigurationError(f"unknown tokenizer: {name!r}")
    if family == "w":
        raw = word_ngrams(int(param), text)
    elif family == "c":
        raw = char_ngrams(int(param), text)
    else:
        w, s = param.split(".")
        raw = skip_grams(int(w), int(s), text)
    prefix = name + ":"
    return [prefix + tok for tok in raw]


@dataclass(frozen=True)
class TokenizerSet:
    """The enabled tokenizers, kept in canonical slot order."""

    enabled: tuple[str, ...]

    def __post_init__(self):
        unknown = [n for n in self.enabled if n not in TOKENIZER_NAMES]
        if unknown:
            raise ConfigurationError(f"unknown tokenizers: {unknown}")
        ordered = tuple(n for n in TOKENIZER_NAMES if n in self.enabled)
        object.__setattr__(self, "enabled", ordered)

    @classmethod
    def of(cls, names: Iterable[str]) -> "TokenizerSet":
        return cls(tuple(names))

    def validate(self) -> None:
        if not self.enabled:
            raise ConfigurationError("at least one tokenizer must be enabled")

    def to_list(self) -> list[str]:
        return list(self.enabled)


def tokenize(tokenizers: TokenizerSet, text: str) -> Counter:
    """Multiset union of all enabled tokenizers applied to ``text``."""
    tokenizers.validate()
    bag: Counter = Counter()
    for name in tokenizers.enabled:
        bag.update(run_tokenizer(name, text))
    return bag
