"""Vocabulary loading and single-word subword segmentation.

Three tokenizer families are covered: greedy longest-match-first WordPiece,
rank-ordered BPE merges (optionally byte-level with a word-initial marker),
and external word -> segmentation maps for schemes with no native
implementation here (e.g. SentencePiece dumps or a remote bridge's output).
All structures are immutable after load and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import OOVError, ParseError

WORDPIECE_TEXT = "wordpiece-text"
BPE_JSON_PLUS_MERGES = "bpe-json-plus-merges"
EXTERNAL_SEGMENTATION_MAP = "external-segmentation-map"

VOCAB_FORMATS = (WORDPIECE_TEXT, BPE_JSON_PLUS_MERGES, EXTERNAL_SEGMENTATION_MAP)


@dataclass(frozen=True)
class Vocabulary:
    """Token -> id table plus the marker conventions of its tokenizer family.

    `continuation_marker` is the WordPiece continuation prefix ("##") or, for
    BPE vocabularies with `mark_initial` set, the word-initial marker that is
    prepended before segmentation. `byte_level` selects the printable-unit
    byte remapping for base symbols.
    """

    entries: dict[str, int]
    continuation_marker: str = "##"
    unk_token: str = "[UNK]"
    max_word_chars: int = 100
    byte_level: bool = False
    mark_initial: bool = False

    def __post_init__(self):
        if not self.entries:
            raise ValueError("vocabulary must not be empty")
        if self.max_word_chars <= 0:
            raise ValueError("max_word_chars must be positive")
        if self.unk_token not in self.entries:
            raise ValueError(f"unk token {self.unk_token!r} missing from vocabulary")
        ids = list(self.entries.values())
        if len(set(ids)) != len(ids):
            raise ValueError("vocabulary ids must be unique")

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class MergeTable:
    """Ordered BPE merge pairs; list position is the merge rank."""

    merges: tuple[tuple[str, str], ...]
    _ranks: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranks = {pair: i for i, pair in enumerate(self.merges)}
        if len(ranks) != len(self.merges):
            raise ValueError("merge table contains duplicate pairs")
        object.__setattr__(self, "_ranks", ranks)

    def rank(self, pair: tuple[str, str]) -> int | None:
        return self._ranks.get(pair)

    def __len__(self) -> int:
        return len(self.merges)


@dataclass(frozen=True)
class Segmentation:
    """Ordered subword tokens produced for one word."""

    tokens: tuple[str, ...]
    source_word: str

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("segmentation must contain at least one token")

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@lru_cache(maxsize=1)
def byte_unit_table() -> dict[int, str]:
    """The common printable-unit remapping of bytes for byte-level BPE.

    Printable bytes keep their own character; the rest are shifted into
    private printable code points so every byte has a visible unit.
    """
    printable = (
        list(range(ord("!"), ord("~") + 1))
        + list(range(ord("\xa1"), ord("\xac") + 1))
        + list(range(ord("\xae"), ord("\xff") + 1))
    )
    units = printable[:]
    offset = 0
    for b in range(256):
        if b not in printable:
            printable.append(b)
            units.append(256 + offset)
            offset += 1
    return {b: chr(u) for b, u in zip(printable, units)}


@lru_cache(maxsize=1)
def unit_byte_table() -> dict[str, int]:
    return {u: b for b, u in byte_unit_table().items()}


def wordpiece_segment(word: str, vocab: Vocabulary) -> Segmentation:
    """Greedy longest-match-first WordPiece segmentation of a single word.

    Repeatedly takes the longest vocabulary prefix of the remaining suffix,
    prefixing non-initial pieces with the continuation marker. Words longer
    than `max_word_chars` or with an unmatchable position collapse to the
    unk token.
    """
    if not word:
        raise ValueError("word must be non-empty")
    if len(word) > vocab.max_word_chars:
        return Segmentation((vocab.unk_token,), word)
    marker = vocab.continuation_marker
    pieces: list[str] = []
    start = 0
    while start < len(word):
        end = len(word)
        match = None
        while start < end:
            piece = word[start:end]
            if start > 0:
                piece = marker + piece
            if piece in vocab.entries:
                match = piece
                break
            end -= 1
        if match is None:
            return Segmentation((vocab.unk_token,), word)
        pieces.append(match)
        start = end
    return Segmentation(tuple(pieces), word)


def _merge_pair(seq: list[str], pair: tuple[str, str]) -> list[str]:
    """Replace every non-overlapping left-to-right occurrence of `pair`."""
    merged = pair[0] + pair[1]
    out: list[str] = []
    i = 0
    while i < len(seq):
        if i < len(seq) - 1 and (seq[i], seq[i + 1]) == pair:
            out.append(merged)
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return out


def bpe_segment(word: str, vocab: Vocabulary, merges: MergeTable) -> Segmentation:
    """BPE segmentation: start from base symbols, apply merges lowest rank first.

    With `vocab.byte_level`, base symbols are the byte-remapped units of the
    UTF-8 encoding; with `vocab.mark_initial`, the word-initial marker is
    prepended as its own base symbol before merging. Every base symbol must
    exist in the vocabulary.
    """
    if not word:
        raise ValueError("word must be non-empty")
    units: list[str] = []
    if vocab.mark_initial and vocab.continuation_marker:
        units.append(vocab.continuation_marker)
    if vocab.byte_level:
        table = byte_unit_table()
        units.extend(table[b] for b in word.encode("utf-8"))
    else:
        units.extend(word)
    for unit in units:
        if unit not in vocab.entries:
            raise OOVError(unit, source="BPE base vocabulary")

    seq = units
    while len(seq) > 1:
        best_pair = None
        best_rank: int | None = None
        for pair in set(zip(seq, seq[1:])):
            rank = merges.rank(pair)
            if rank is not None and (best_rank is None or rank < best_rank):
                best_rank, best_pair = rank, pair
        if best_pair is None:
            break
        seq = _merge_pair(seq, best_pair)
    return Segmentation(tuple(seq), word)


# ---------------------------------------------------------------------------
# Loaders


def load_wordpiece_vocab(
    path,
    continuation_marker: str = "##",
    unk_token: str = "[UNK]",
    max_word_chars: int = 100,
) -> Vocabulary:
    """Load a one-token-per-line vocabulary; id = line index."""
    entries: dict[str, int] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            token = raw.rstrip("\n")
            if not token:
                raise ParseError(path, lineno, "empty token line")
            if token in entries:
                raise ParseError(path, lineno, f"duplicate token {token!r}")
            entries[token] = lineno - 1
    if not entries:
        raise ParseError(path, None, "empty vocabulary file")
    return Vocabulary(
        entries,
        continuation_marker=continuation_marker,
        unk_token=unk_token,
        max_word_chars=max_word_chars,
    )


def load_bpe_files(
    vocab_path,
    merges_path,
    unk_token: str = "<unk>",
    continuation_marker: str = "",
    max_word_chars: int = 100,
    byte_level: bool = False,
    mark_initial: bool = False,
) -> tuple[Vocabulary, MergeTable]:
    """Load a BPE vocabulary (JSON token -> id) and a merges file.

    Merges are one "left right" pair per line, rank = line index; full-line
    comments starting with "#" are skipped. The unk token is appended with the
    next free id when the JSON does not define one.
    """

    def reject_duplicates(pairs):
        seen = {}
        for key, value in pairs:
            if key in seen:
                raise ParseError(vocab_path, None, f"duplicate token {key!r}")
            seen[key] = value
        return seen

    with open(vocab_path, encoding="utf-8") as handle:
        text = handle.read()
    if not text.strip():
        raise ParseError(vocab_path, None, "empty vocabulary file")
    try:
        raw_entries = json.loads(text, object_pairs_hook=reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(vocab_path, exc.lineno, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(raw_entries, dict) or not raw_entries:
        raise ParseError(vocab_path, None, "vocabulary JSON must be a non-empty object")
    entries = {}
    for token, token_id in raw_entries.items():
        if not isinstance(token_id, int):
            raise ParseError(vocab_path, None, f"id for {token!r} is not an integer")
        entries[token] = token_id
    if unk_token not in entries:
        entries[unk_token] = max(entries.values()) + 1

    merges: list[tuple[str, str]] = []
    seen_pairs = set()
    with open(merges_path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split(" ")
            if len(parts) != 2 or not all(parts):
                raise ParseError(merges_path, lineno, f"malformed merge line {line!r}")
            pair = (parts[0], parts[1])
            if pair in seen_pairs:
                raise ParseError(merges_path, lineno, f"duplicate merge pair {pair!r}")
            seen_pairs.add(pair)
            merges.append(pair)

    vocab = Vocabulary(
        entries,
        continuation_marker=continuation_marker,
        unk_token=unk_token,
        max_word_chars=max_word_chars,
        byte_level=byte_level,
        mark_initial=mark_initial,
    )
    return vocab, MergeTable(tuple(merges))


def load_segmentation_map(
    path, unk_token: str = "[UNK]"
) -> tuple[Vocabulary, dict[str, Segmentation]]:
    """Load a TSV `word<TAB>space-separated-tokens` segmentation map.

    Returns the lookup plus the vocabulary induced by the observed tokens
    (ids by first appearance), usable in place of native segmentation.
    """
    mapping: dict[str, Segmentation] = {}
    entries: dict[str, int] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line:
                raise ParseError(path, lineno, "empty line")
            if "\t" not in line:
                raise ParseError(path, lineno, "expected word<TAB>tokens")
            word, token_field = line.split("\t", 1)
            tokens = tuple(t for t in token_field.split(" ") if t)
            if not word or not tokens:
                raise ParseError(path, lineno, "word and tokens must be non-empty")
            if word in mapping:
                raise ParseError(path, lineno, f"duplicate word {word!r}")
            mapping[word] = Segmentation(tokens, word)
            for token in tokens:
                entries.setdefault(token, len(entries))
    if not mapping:
        raise ParseError(path, None, "empty segmentation map")
    entries.setdefault(unk_token, len(entries))
    vocab = Vocabulary(entries, continuation_marker="", unk_token=unk_token)
    return vocab, mapping


def load_vocabulary(path, format: str, merges_path=None, **options):
    """Dispatch to the loader for `format` (see VOCAB_FORMATS).

    Returns a Vocabulary for wordpiece-text, (Vocabulary, MergeTable) for
    bpe-json-plus-merges and (Vocabulary, word -> Segmentation map) for
    external-segmentation-map.
    """
    if format == WORDPIECE_TEXT:
        return load_wordpiece_vocab(path, **options)
    if format == BPE_JSON_PLUS_MERGES:
        if merges_path is None:
            raise ValueError("bpe-json-plus-merges requires merges_path")
        return load_bpe_files(path, merges_path, **options)
    if format == EXTERNAL_SEGMENTATION_MAP:
        return load_segmentation_map(path, **options)
    raise ValueError(f"unknown vocabulary format {format!r}")


# ---------------------------------------------------------------------------
# Segmenters: uniform word -> Segmentation callables


class WordPieceSegmenter:
    """Callable wrapper binding a WordPiece vocabulary."""

    def __init__(self, vocab: Vocabulary):
        self.vocab = vocab
        self.unk_token = vocab.unk_token

    def __call__(self, word: str) -> Segmentation:
        return wordpiece_segment(word, self.vocab)

    def surface(self, segmentation: Segmentation) -> str:
        """Concatenate tokens with continuation markers stripped."""
        marker = self.vocab.continuation_marker
        parts = [segmentation.tokens[0]]
        for token in segmentation.tokens[1:]:
            parts.append(token[len(marker):] if token.startswith(marker) else token)
        return "".join(parts)


class BpeSegmenter:
    """Callable wrapper binding a BPE vocabulary and merge table."""

    def __init__(self, vocab: Vocabulary, merges: MergeTable):
        self.vocab = vocab
        self.merges = merges
        self.unk_token = vocab.unk_token

    def __call__(self, word: str) -> Segmentation:
        return bpe_segment(word, self.vocab, self.merges)

    def surface(self, segmentation: Segmentation) -> str:
        text = "".join(segmentation.tokens)
        marker = self.vocab.continuation_marker
        if self.vocab.mark_initial and marker and text.startswith(marker):
            text = text[len(marker):]
        if self.vocab.byte_level:
            reverse = unit_byte_table()
            text = bytes(reverse[ch] for ch in text).decode("utf-8")
        return text


class MapSegmenter:
    """Lookup segmenter over an external word -> Segmentation map.

    Words absent from the map segment to the unk token, which downstream
    classification flags as `unknown`.
    """

    def __init__(self, mapping: Mapping[str, Segmentation], unk_token: str = "[UNK]"):
        self.mapping = dict(mapping)
        self.unk_token = unk_token

    def __call__(self, word: str) -> Segmentation:
        if not word:
            raise ValueError("word must be non-empty")
        found = self.mapping.get(word)
        if found is not None:
            return found
        return Segmentation((self.unk_token,), word)

    def surface(self, segmentation: Segmentation) -> str:
        return "".join(segmentation.tokens)


def make_segmenter(format: str, path, merges_path=None, **options):
    """Build the right segmenter for a vocabulary format in one call."""
    loaded = load_vocabulary(path, format, merges_path=merges_path, **options)
    if format == WORDPIECE_TEXT:
        return WordPieceSegmenter(loaded)
    if format == BPE_JSON_PLUS_MERGES:
        vocab, merges = loaded
        return BpeSegmenter(vocab, merges)
    vocab, mapping = loaded
    return MapSegmenter(mapping, unk_token=vocab.unk_token)
