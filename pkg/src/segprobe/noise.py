"""Noise models producing noisy word forms from canonical ones.

Keyboard and swap typos follow the psycholinguistic constraints: only middle
characters change, words of four or fewer characters are rejected outright,
and exactly one edit is applied. Letter reduplications are mined from a
corpus with run-collapse regex patterns, and the abbreviation generator
enumerates first-letter-plus-consonant-subsequence candidates for the
missing-corruption scan.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Iterator, Sequence

VOWELS = frozenset("aeiou")

TOO_SHORT = "too-short"
NO_ADJACENT_LETTER = "no-adjacent-letter"
NO_DISTINCT_MIDDLE = "no-distinct-middle"

KEYBOARD = "keyboard"
SWAP = "swap"
REDUPLICATION = "reduplication"
ABBREVIATION = "abbreviation"

#: Noise models that generate contrastive-dataset pairs. Abbreviations feed
#: the missing-corruption scan instead.
DATASET_NOISE_TYPES = (KEYBOARD, SWAP, REDUPLICATION)


@dataclass(frozen=True)
class Rejection:
    """A word the noise model declines to corrupt, with the reason why."""

    word: str
    reason: str


@dataclass(frozen=True)
class KeyboardLayout:
    """Lowercase letter -> letters within one key distance (diagonals included)."""

    adjacency: dict[str, tuple[str, ...]]

    def __post_init__(self):
        for letter, neighbours in self.adjacency.items():
            if not letter.isalpha() or not letter.islower() or len(letter) != 1:
                raise ValueError(f"invalid layout key {letter!r}")
            for other in neighbours:
                if other not in self.adjacency or letter not in self.adjacency[other]:
                    raise ValueError(f"asymmetric adjacency: {letter!r} -> {other!r}")

    def neighbours(self, letter: str) -> tuple[str, ...]:
        return self.adjacency.get(letter, ())


def load_keyboard_layout(path) -> KeyboardLayout:
    """Load a JSON letter -> [adjacent letters] file."""
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    return KeyboardLayout({k: tuple(v) for k, v in raw.items()})


def default_keyboard_layout() -> KeyboardLayout:
    """The bundled QWERTY layout (3 staggered rows, diagonal neighbours)."""
    raw = json.loads(
        resources.files("segprobe.data").joinpath("qwerty.json").read_text("utf-8")
    )
    return KeyboardLayout({k: tuple(v) for k, v in raw.items()})


@dataclass(frozen=True)
class NoiseSpec:
    """Configuration for one noise model run."""

    noise_type: str
    seed: int | None = None
    variants_per_word: int = 2
    max_extra_letters: int | None = None

    def __post_init__(self):
        if self.noise_type not in (KEYBOARD, SWAP, REDUPLICATION, ABBREVIATION):
            raise ValueError(f"unknown noise type {self.noise_type!r}")
        if self.variants_per_word < 1:
            raise ValueError("variants_per_word must be >= 1")
        if self.max_extra_letters is not None and self.max_extra_letters < 1:
            raise ValueError("max_extra_letters must be >= 1 when set")


def _require_lowercase_word(word: str):
    if not word or not word.isalpha() or not word.islower():
        raise ValueError(f"expected a non-empty lowercase alphabetic word, got {word!r}")


def keyboard_typo(
    word: str, layout: KeyboardLayout, rng: random.Random
) -> str | Rejection:
    """Substitute one middle character with a neighbouring key.

    Words of length <= 4 are rejected. The index is drawn uniformly from the
    middle positions; if the letter there has no neighbours in the layout the
    draw is rejected rather than resampled.
    """
    _require_lowercase_word(word)
    if len(word) <= 4:
        return Rejection(word, TOO_SHORT)
    index = rng.randrange(1, len(word) - 1)
    neighbours = layout.neighbours(word[index])
    if not neighbours:
        return Rejection(word, NO_ADJACENT_LETTER)
    substitute = rng.choice(neighbours)
    return word[:index] + substitute + word[index + 1:]


def swap_typo(word: str, rng: random.Random) -> str | Rejection:
    """Swap one adjacent pair of middle characters, retrying identical results.

    Rejects words of length <= 4 and words whose middle holds fewer than two
    distinct characters (every swap would return the word itself, e.g. the
    double letters of "aggressive" need the retry loop instead).
    """
    _require_lowercase_word(word)
    if len(word) <= 4:
        return Rejection(word, TOO_SHORT)
    middle = word[1:-1]
    if len(set(middle)) < 2:
        return Rejection(word, NO_DISTINCT_MIDDLE)
    while True:
        i = rng.randrange(1, len(word) - 2)
        swapped = word[:i] + word[i + 1] + word[i] + word[i + 2:]
        if swapped != word:
            return swapped


def build_reduplication_pattern(word: str) -> str:
    """Regex matching the word with any letter repeated for emphasis.

    Consecutive duplicate letters collapse into one run each; every run letter
    is emitted with a "+" quantifier between word-boundary anchors, so
    "sorry" yields \\bs+o+r+y+\\b.
    """
    _require_lowercase_word(word)
    runs: list[str] = []
    for ch in word:
        if not runs or runs[-1] != ch:
            runs.append(ch)
    return r"\b" + "".join(ch + "+" for ch in runs) + r"\b"


def mine_reduplications(
    word: str,
    corpus_tokens: Iterable[str],
    max_extra_letters: int | None = None,
) -> list[str]:
    """Corpus tokens that reduplicate `word`, first-seen order, deduplicated.

    A match must be strictly longer than the canonical form (same-length
    matches are the word itself up to run order). `max_extra_letters` caps
    the number of added characters when set.
    """
    pattern = re.compile(build_reduplication_pattern(word))
    found: list[str] = []
    seen: set[str] = set()
    for token in corpus_tokens:
        if len(token) <= len(word) or token in seen:
            continue
        if max_extra_letters is not None and len(token) - len(word) > max_extra_letters:
            continue
        if pattern.search(token):
            seen.add(token)
            found.append(token)
    return found


_URL_OR_MENTION = re.compile(r"(?:https?://\S+|www\.\S+|@\w+)")


def tokenize_corpus(lines: Iterable[str]) -> Iterator[str]:
    """Lowercase word tokens from raw text, one document per line.

    URLs and @-mentions are dropped before splitting on non-alphabetic
    characters.
    """
    for line in lines:
        cleaned = _URL_OR_MENTION.sub(" ", line.lower())
        for token in re.split(r"[^a-z]+", cleaned):
            if token:
                yield token


def generate_abbreviation_candidates(word: str) -> list[str]:
    """All first-letter-plus-consonant-subsequence abbreviations of `word`.

    The tail is the subsequence of non-vowel characters after the first
    character; every subsequence of the tail (including the empty one, giving
    the bare first letter) is appended to the first character. Candidates are
    deduplicated and the canonical word itself is excluded. Cost is
    2^len(tail), which stays small for lexicon-sized words.
    """
    _require_lowercase_word(word)
    if len(word) < 2:
        raise ValueError("abbreviation candidates need a word of length >= 2")
    head = word[0]
    tail = [ch for ch in word[1:] if ch not in VOWELS]
    candidates: list[str] = []
    seen: set[str] = set()
    for mask in range(1 << len(tail)):
        sub = "".join(ch for i, ch in enumerate(tail) if mask & (1 << i))
        candidate = head + sub
        if candidate == word or candidate in seen:
            continue
        seen.add(candidate)
        candidates.append(candidate)
    return candidates


# ---------------------------------------------------------------------------
# Post-hoc validators, used to re-check generated pairs independently.


def check_keyboard_typo(word: str, noisy: str, layout: KeyboardLayout) -> bool:
    """Does `noisy` satisfy every keyboard-typo constraint for `word`?"""
    if len(word) <= 4 or len(noisy) != len(word) or noisy == word:
        return False
    diffs = [i for i, (a, b) in enumerate(zip(word, noisy)) if a != b]
    if len(diffs) != 1:
        return False
    index = diffs[0]
    if index == 0 or index == len(word) - 1:
        return False
    return noisy[index] in layout.neighbours(word[index])


def check_swap_typo(word: str, noisy: str) -> bool:
    """Does `noisy` differ from `word` by exactly one adjacent middle swap?"""
    if len(word) <= 4 or len(noisy) != len(word) or noisy == word:
        return False
    if sorted(noisy) != sorted(word):
        return False
    diffs = [i for i, (a, b) in enumerate(zip(word, noisy)) if a != b]
    if len(diffs) != 2 or diffs[1] != diffs[0] + 1:
        return False
    i, j = diffs
    if i < 1 or j > len(word) - 2:
        return False
    return noisy[i] == word[j] and noisy[j] == word[i]


def check_reduplication(word: str, noisy: str) -> bool:
    """Does `noisy` match the reduplication pattern and strictly lengthen it?"""
    if len(noisy) <= len(word):
        return False
    return re.search(build_reduplication_pattern(word), noisy) is not None
