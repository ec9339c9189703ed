"""Multiset partition and corruption taxonomy for canonical/noisy segmentation pairs.

A canonical word's segmentation S and its noisy counterpart's segmentation S~
are compared as multisets: the overlap O = S & S~ keeps retained subwords at
minimum multiplicity, M = S - O holds the lost ones and A = S~ - O the newly
created ones. The emptiness pattern of (O, M, A) decides the corruption type;
additive pairs are further split into infix/affix by an ordered queue walk.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence


class CorruptionType(str, Enum):
    """How a noisy segmentation relates to its canonical one."""

    INTACT = "intact"
    COMPLETE = "complete"
    PARTIAL = "partial"
    ADDITIVE_INFIX = "additive_infix"
    ADDITIVE_AFFIX = "additive_affix"
    MISSING = "missing"
    IDENTICAL = "identical"
    UNKNOWN = "unknown"


#: Fine-grained additive types; merged into "additive" for table-style reports.
ADDITIVE_TYPES = (CorruptionType.ADDITIVE_INFIX, CorruptionType.ADDITIVE_AFFIX)

#: Types excluded from corruption aggregates (no-op pairs and UNK-tainted pairs).
EXCLUDED_TYPES = (CorruptionType.IDENTICAL, CorruptionType.UNKNOWN)


def _tokens(segmentation) -> tuple[str, ...]:
    """Accept a Segmentation or a plain token sequence."""
    tokens = getattr(segmentation, "tokens", segmentation)
    return tuple(tokens)


def cardinality(multiset: Mapping[str, int]) -> int:
    """Total number of elements, duplicates counted."""
    return sum(multiset.values())


@dataclass(frozen=True)
class CorruptionReport:
    """Classification of one canonical/noisy segmentation pair.

    `additive_count` is the cardinality of the additive multiset (duplicates
    counted), the x-axis quantity of the multiplicity-decay analysis.
    """

    corruption_type: CorruptionType
    overlap: Counter
    missing: Counter
    additive: Counter
    additive_count: int

    def to_json_dict(self) -> dict:
        return {
            "type": self.corruption_type.value,
            "overlap": dict(sorted(self.overlap.items())),
            "missing": dict(sorted(self.missing.items())),
            "additive": dict(sorted(self.additive.items())),
            "additive_count": self.additive_count,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "CorruptionReport":
        return cls(
            corruption_type=CorruptionType(data["type"]),
            overlap=Counter(data["overlap"]),
            missing=Counter(data["missing"]),
            additive=Counter(data["additive"]),
            additive_count=int(data["additive_count"]),
        )


def partition_multisets(
    canonical: Sequence[str] | Iterable[str],
    noisy: Sequence[str] | Iterable[str],
) -> tuple[Counter, Counter, Counter]:
    """Split a segmentation pair into (overlap, missing, additive) multisets.

    Overlap takes the per-token minimum multiplicity; missing and additive are
    the multiset differences S - O and S~ - O.
    """
    s = Counter(_tokens(canonical))
    s_noisy = Counter(_tokens(noisy))
    if not s or not s_noisy:
        raise ValueError("both segmentations must be non-empty")
    overlap = s & s_noisy
    missing = s - overlap
    additive = s_noisy - overlap
    return overlap, missing, additive


def additive_placement(canonical, noisy) -> str:
    """Decide whether an additive pair's extra tokens are "infix" or "affix".

    Both sequences are walked front-to-back as queues. A noisy token matching
    the front of the canonical queue is a retained subword; every other noisy
    position is an insertion. The pair is an affix iff every insertion lies
    strictly before the first match or strictly after the last match. Leading
    insertions therefore count as affix.
    """
    s_seq = _tokens(canonical)
    noisy_seq = _tokens(noisy)
    _, missing, additive = partition_multisets(s_seq, noisy_seq)
    if missing or not additive:
        raise ValueError(
            "additive_placement requires an additive pair "
            "(empty missing set, non-empty additive set)"
        )
    queue = deque(s_seq)
    matched: list[int] = []
    inserted: list[int] = []
    for pos, token in enumerate(noisy_seq):
        if queue and token == queue[0]:
            matched.append(pos)
            queue.popleft()
        else:
            inserted.append(pos)
    # The first occurrence of the canonical front token always matches, so
    # `matched` cannot be empty for a valid additive pair.
    first, last = matched[0], matched[-1]
    if all(pos < first or pos > last for pos in inserted):
        return "affix"
    return "infix"


def classify_corruption(canonical, noisy, unk_token: str | None = None) -> CorruptionReport:
    """Classify one canonical/noisy pair.

    Decision order: identical (M and A empty), intact (O empty, |M| = 1),
    complete (O empty), additive (M empty; split by placement), missing
    (A empty), otherwise partial. When `unk_token` is given and appears in
    either segmentation the pair is flagged "unknown" instead; such pairs are
    excluded from evaluation aggregates.
    """
    s_seq = _tokens(canonical)
    noisy_seq = _tokens(noisy)
    overlap, missing, additive = partition_multisets(s_seq, noisy_seq)
    n_additive = cardinality(additive)

    if unk_token is not None and (unk_token in s_seq or unk_token in noisy_seq):
        ctype = CorruptionType.UNKNOWN
    elif not missing and not additive:
        ctype = CorruptionType.IDENTICAL
    elif not overlap and cardinality(missing) == 1:
        ctype = CorruptionType.INTACT
    elif not overlap:
        ctype = CorruptionType.COMPLETE
    elif not missing:
        placement = additive_placement(s_seq, noisy_seq)
        ctype = (
            CorruptionType.ADDITIVE_INFIX
            if placement == "infix"
            else CorruptionType.ADDITIVE_AFFIX
        )
    elif not additive:
        ctype = CorruptionType.MISSING
    else:
        ctype = CorruptionType.PARTIAL

    return CorruptionReport(ctype, overlap, missing, additive, n_additive)


def additive_count(report: CorruptionReport) -> int:
    """Cardinality of the additive multiset, duplicates counted."""
    return report.additive_count


def merged_type(ctype: CorruptionType) -> str:
    """Table-granularity label: both additive placements collapse to "additive"."""
    if ctype in ADDITIVE_TYPES:
        return "additive"
    return ctype.value
