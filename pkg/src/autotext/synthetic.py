"""Synthetic noisy two-class corpora for desk-scale experiments.

Every text mixes class-independent filler words with one designated signal
word of its class.  Words are corrupted with probability ``noise`` (an
accented vowel or a run of duplicated letters), a random hashtag is appended
with the same probability, and the first word is capitalized half the time.
"""

from __future__ import annotations

import random

from .selection import Record

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"
_ACCENTS = {
    "a": "áàâäã",
    "e": "éèêë",
    "i": "íìîï",
    "o": "óòôöõ",
    "u": "úùûü",
}


def _pseudo_words(rng: random.Random, n: int, syllables: tuple[int, int]) -> list[str]:
    words: set[str] = set()
    while len(words) < n:
        k = rng.randint(*syllables)
        words.add("".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(k)))
    return sorted(words)


def corrupt(word: str, rng: random.Random) -> str:
    if rng.random() < 0.5:
        vowels = [i for i, ch in enumerate(word) if ch in _ACCENTS]
        if vowels:
            i = rng.choice(vowels)
            return word[:i] + rng.choice(_ACCENTS[word[i]]) + word[i + 1 :]
    i = rng.randrange(len(word))
    return word[:i] + word[i] * rng.randint(2, 4) + word[i + 1 :]


def noisy_corpus(
    n_per_class: int = 500,
    noise: float = 0.2,
    seed: int = 0,
    labels: tuple[str, ...] = ("alpha", "beta"),
    n_filler: int = 300,
    n_signal: int = 8,
    length: tuple[int, int] = (5, 9),
) -> list[Record]:
    rng = random.Random(seed)
    pool = _pseudo_words(rng, n_filler + n_signal * len(labels), (2, 3))
    rng.shuffle(pool)
    signal = {
        lab: pool[n_filler + i * n_signal : n_filler + (i + 1) * n_signal]
        for i, lab in enumerate(labels)
    }
    filler = pool[:n_filler]
    records = []
    for lab in labels:
        for _ in range(n_per_class):
            words = rng.sample(filler, rng.randint(*length))
            words.insert(rng.randrange(len(words) + 1), rng.choice(signal[lab]))
            words = [corrupt(w, rng) if rng.random() < noise else w for w in words]
            if rng.random() < noise:
                words.append("#" + rng.choice(filler))
            if rng.random() < 0.5:
                words[0] = words[0].capitalize()
            records.append(Record(" ".join(words), lab))
    rng.shuffle(records)
    return records
