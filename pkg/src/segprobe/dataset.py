"""Build, persist and load the contrastive canonical/noisy word dataset.

Pair generation derives one RNG per (word, noise model) from the global seed,
so results are identical whatever the worker count or iteration order. The
on-disk form is JSON lines, one pair per line, sorted for byte-stable output.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError
from .noise import (
    DATASET_NOISE_TYPES,
    KEYBOARD,
    REDUPLICATION,
    SWAP,
    KeyboardLayout,
    NoiseSpec,
    Rejection,
    keyboard_typo,
    mine_reduplications,
    swap_typo,
)
from .parallel import parallel_map

SENTIMENTS = ("positive", "negative")

PAIR_FIELDS = ("pair_id", "canonical", "noisy", "noise_type", "sentiment")


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    sentiment: str


@dataclass(frozen=True)
class ContrastivePair:
    """One canonical word with one noisy variant of it."""

    canonical: str
    noisy: str
    noise_type: str
    sentiment: str
    pair_id: str

    def to_json_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "canonical": self.canonical,
            "noisy": self.noisy,
            "noise_type": self.noise_type,
            "sentiment": self.sentiment,
        }


def make_pair_id(canonical: str, noisy: str, noise_type: str) -> str:
    """Stable hex id for joins across reports; not Python's salted hash()."""
    material = "\x1f".join((canonical, noisy, noise_type)).encode("utf-8")
    return hashlib.sha256(material).hexdigest()[:16]


def make_pair(canonical: str, noisy: str, noise_type: str, sentiment: str) -> ContrastivePair:
    return ContrastivePair(
        canonical=canonical,
        noisy=noisy,
        noise_type=noise_type,
        sentiment=sentiment,
        pair_id=make_pair_id(canonical, noisy, noise_type),
    )


def load_lexicon(path) -> list[LexiconEntry]:
    """Load a `word<TAB>label` sentiment lexicon.

    Words are lowercased and deduplicated (first label wins); order is
    preserved. Unknown labels and empty files are errors.
    """
    entries: list[LexiconEntry] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise ParseError(path, lineno, "expected word<TAB>label")
            word, label = line.split("\t", 1)
            word = word.strip().lower()
            label = label.strip()
            if label not in SENTIMENTS:
                raise ParseError(path, lineno, f"unknown sentiment label {label!r}")
            if not word:
                raise ParseError(path, lineno, "empty word")
            if word in seen:
                continue
            seen.add(word)
            entries.append(LexiconEntry(word, label))
    if not entries:
        raise ParseError(path, None, "empty lexicon file")
    return entries


def _derived_rng(seed: int, noise_type: str, word: str) -> random.Random:
    """Per-(word, model) RNG so generation is order- and worker-independent."""
    material = f"{seed}:{noise_type}:{word}".encode("utf-8")
    value = int.from_bytes(hashlib.sha256(material).digest()[:8], "big")
    return random.Random(value)


def _typo_variants(
    word: str, spec: NoiseSpec, layout: KeyboardLayout, rng: random.Random
) -> list[str]:
    """Up to variants_per_word distinct typo outputs; rejections skipped."""
    variants: list[str] = []
    attempts = 0
    budget = 16 * spec.variants_per_word
    while len(variants) < spec.variants_per_word and attempts < budget:
        attempts += 1
        if spec.noise_type == KEYBOARD:
            result = keyboard_typo(word, layout, rng)
        else:
            result = swap_typo(word, rng)
        if isinstance(result, Rejection):
            if result.reason != "no-adjacent-letter":
                break  # deterministic rejection; further draws cannot succeed
            continue
        if result not in variants:
            variants.append(result)
    return variants


def _reduplication_variants(
    word: str, spec: NoiseSpec, corpus_tokens: Sequence[str], rng: random.Random
) -> list[str]:
    mined = mine_reduplications(word, corpus_tokens, spec.max_extra_letters)
    cap = min(len(mined), 2 * spec.variants_per_word)
    if cap == 0:
        return []
    return rng.sample(mined, cap)


def build_contrastive_dataset(
    lexicon: Sequence[LexiconEntry],
    specs: Sequence[NoiseSpec],
    seed: int,
    corpus_tokens: Sequence[str] | None = None,
    layout: KeyboardLayout | None = None,
    jobs: int = 1,
) -> list[ContrastivePair]:
    """Apply every noise spec to every lexicon word.

    Typo specs yield up to variants_per_word distinct forms per word;
    reduplication specs sample mined forms. Words rejected by every model
    simply contribute no pairs. Output is deduplicated on
    (canonical, noisy, noise_type) and sorted for determinism.
    """
    for spec in specs:
        if spec.noise_type not in DATASET_NOISE_TYPES:
            raise ValueError(
                f"noise type {spec.noise_type!r} does not build contrastive pairs"
            )
    if any(s.noise_type == REDUPLICATION for s in specs) and corpus_tokens is None:
        raise ValueError("reduplication specs require a corpus")
    if any(s.noise_type == KEYBOARD for s in specs) and layout is None:
        raise ValueError("keyboard specs require a keyboard layout")

    def pairs_for(entry: LexiconEntry) -> list[ContrastivePair]:
        out: list[ContrastivePair] = []
        for spec in specs:
            spec_seed = spec.seed if spec.seed is not None else seed
            rng = _derived_rng(spec_seed, spec.noise_type, entry.word)
            if spec.noise_type in (KEYBOARD, SWAP):
                variants = _typo_variants(entry.word, spec, layout, rng)
            else:
                variants = _reduplication_variants(entry.word, spec, corpus_tokens, rng)
            for noisy in variants:
                if noisy != entry.word:
                    out.append(make_pair(entry.word, noisy, spec.noise_type, entry.sentiment))
        return out

    nested = parallel_map(pairs_for, lexicon, jobs)
    unique: dict[tuple[str, str, str], ContrastivePair] = {}
    for pairs in nested:
        for pair in pairs:
            unique.setdefault((pair.canonical, pair.noise_type, pair.noisy), pair)
    return sorted(unique.values(), key=lambda p: (p.canonical, p.noise_type, p.noisy))


def write_dataset(pairs: Iterable[ContrastivePair], path) -> None:
    """Serialize pairs as JSON lines with a byte-stable key order."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for pair in pairs:
            handle.write(json.dumps(pair.to_json_dict(), sort_keys=True, ensure_ascii=False))
            handle.write("\n")


def read_dataset(path) -> list[ContrastivePair]:
    """Read a JSONL dataset back, validating the schema line by line."""
    pairs: list[ContrastivePair] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(record, dict) or set(record) != set(PAIR_FIELDS):
                raise ParseError(
                    path, lineno, f"expected exactly the fields {sorted(PAIR_FIELDS)}"
                )
            if record["noise_type"] not in DATASET_NOISE_TYPES:
                raise ParseError(path, lineno, f"unknown noise_type {record['noise_type']!r}")
            if record["sentiment"] not in SENTIMENTS:
                raise ParseError(path, lineno, f"unknown sentiment {record['sentiment']!r}")
            if record["canonical"] == record["noisy"]:
                raise ParseError(path, lineno, "canonical and noisy must differ")
            pairs.append(
                ContrastivePair(
                    canonical=record["canonical"],
                    noisy=record["noisy"],
                    noise_type=record["noise_type"],
                    sentiment=record["sentiment"],
                    pair_id=record["pair_id"],
                )
            )
    return pairs
