"""Text transformation handlers and their fixed-order composition.

Each handler kind offers a small set of mutually exclusive modes, one of which
is always ``identity``.  A :class:`PreprocessConfig` picks one mode per kind and
:func:`apply_transform_chain` applies them in slot order.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, fields

TRIVALENT = ("hashtag", "number", "url", "user")
BIVALENT = ("diacritic", "duplication", "punctuation", "case")
SLOTS = TRIVALENT + BIVALENT

TRIVALENT_MODES = ("remove", "group", "identity")
BIVALENT_MODES = ("apply", "identity")

SENTINELS = {"hashtag": "_htag", "number": "_num", "url": "_url", "user": "_usr"}

_PATTERNS = {
    # a run of markers is consumed whole so grouping stays idempotent ("##a")
    "hashtag": re.compile(r"#+\w+"),
    "number": re.compile(r"[+-]?\d+(?:\.\d+)?"),
    "url": re.compile(r"(?:https?://|www\.)\S+"),
    "user": re.compile(r"@+\w+"),
}

PUNCTUATION = frozenset(";:.,-'\"()[]{}~<>?!¡¿")
_PUNCT_TABLE = {ord(ch): None for ch in PUNCTUATION}


def modes_for(kind: str) -> tuple[str, ...]:
    if kind in TRIVALENT:
        return TRIVALENT_MODES
    if kind in BIVALENT:
        return BIVALENT_MODES
    raise ValueError(f"unknown handler kind: {kind!r}")


def handle_pattern(kind: str, mode: str, text: str) -> str:
    """Remove, group (replace with a sentinel) or keep every match of ``kind``."""
    if mode not in TRIVALENT_MODES or kind not in _PATTERNS:
        raise ValueError(f"invalid pattern handler {kind}:{mode}")
    if mode == "identity":
        return text
    repl = "" if mode == "remove" else SENTINELS[kind]
    return _PATTERNS[kind].sub(repl, text)


def remove_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def remove_duplicates(text: str) -> str:
    """Collapse every run of identical characters into one character."""
    out = []
    prev = None
    for ch in text:
        if ch != prev:
            out.append(ch)
            prev = ch
    return "".join(out)


def remove_punctuation(text: str) -> str:
    return text.translate(_PUNCT_TABLE)


_BIVALENT_FUNCS = {
    "diacritic": remove_diacritics,
    "duplication": remove_duplicates,
    "punctuation": remove_punctuation,
    "case": str.lower,
}


@dataclass(frozen=True)
class PreprocessConfig:
    hashtag: str = "identity"
    number: str = "identity"
    url: str = "identity"
    user: str = "identity"
    diacritic: str = "identity"
    duplication: str = "identity"
    punctuation: str = "identity"
    case: str = "identity"

    def __post_init__(self):
        for f in fields(self):
            mode = getattr(self, f.name)
            if mode not in modes_for(f.name):
                raise ValueError(f"invalid mode {mode!r} for {f.name}")

    def to_dict(self) -> dict[str, str]:
        return {name: getattr(self, name) for name in SLOTS}

    @classmethod
    def from_dict(cls, d: dict) -> "PreprocessConfig":
        unknown = set(d) - set(SLOTS)
        if unknown:
            raise ValueError(f"unknown preprocessing slots: {sorted(unknown)}")
        return cls(**d)

    def key(self) -> str:
        return ",".join(f"{name}={getattr(self, name)}" for name in SLOTS)


def apply_transform_chain(cfg: PreprocessConfig, text: str) -> str:
    # pattern handlers run first so urls and users are intact when matched
    for kind in TRIVALENT:
        text = handle_pattern(kind, getattr(cfg, kind), text)
    for kind in BIVALENT:
        if getattr(cfg, kind) == "apply":
            text = _BIVALENT_FUNCS[kind](text)
    return text
