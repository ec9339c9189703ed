"""Token embedding providers and the pooled-similarity primitive.

A provider maps tokens to a (len, dim) float64 matrix. Word-level vectors
come from mean pooling; the sensitivity score for a word pair is the cosine
between the two pooled vectors. Scores are only comparable within a single
provider, so reports always carry the per-provider baseline next to them.
"""

from __future__ import annotations

import hashlib
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .errors import OOVError, ParseError
from .tokenization import Segmentation

STATIC_MODE = "static-per-token"
CONTEXTUAL_MODE = "contextual-per-word"

# Reference word whose similarity to every canonical word gives the
# per-provider anisotropy floor reported beside all similarity tables.
BASELINE_WORD = "the"


@runtime_checkable
class EmbeddingProvider(Protocol):
    """Structural contract: a name, a dimensionality, and one embed method."""

    name: str
    dim: int
    mode: str


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine similarity undefined for a zero vector")
    return float(np.dot(a, b) / (norm_a * norm_b))


def mean_pool(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise ValueError("expected a non-empty (tokens, dim) matrix")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("non-finite embedding component")
    return matrix.mean(axis=0)


class HashProvider:
    """Deterministic pseudo-random unit vectors, one per distinct token.

    The vector for a token depends only on (seed, token): a sha256 digest of
    that pair seeds a PCG64 draw from the standard normal, normalized to
    unit length. Stateless in effect, identical across processes and
    platforms, no vocabulary needed. Python's builtin hash() is salted per
    process, hence sha256.
    """

    mode = STATIC_MODE

    def __init__(self, dim: int = 32, seed: int = 0):
        if dim < 2:
            raise ValueError("dim must be >= 2")
        self.dim = dim
        self.seed = seed
        self.name = f"hash(dim={dim}, seed={seed})"
        self._cache: dict[str, np.ndarray] = {}

    def _vector(self, token: str) -> np.ndarray:
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        material = f"{self.seed}:{token}".encode("utf-8")
        digest = hashlib.sha256(material).digest()
        rng = np.random.Generator(np.random.PCG64(int.from_bytes(digest[:8], "big")))
        vec = rng.standard_normal(self.dim)
        vec /= np.linalg.norm(vec)
        self._cache[token] = vec
        return vec

    def embed_tokens(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            raise ValueError("cannot embed an empty token sequence")
        return np.stack([self._vector(token) for token in tokens])


def make_hash_provider(dim: int = 32, seed: int = 0) -> HashProvider:
    return HashProvider(dim=dim, seed=seed)


class TableProvider:
    """Static token -> vector lookup; unknown tokens raise OOVError."""

    mode = STATIC_MODE

    def __init__(self, table: dict[str, np.ndarray], source: str = "vector table"):
        if not table:
            raise ValueError("empty vector table")
        dims = {np.asarray(v).shape for v in table.values()}
        if len(dims) != 1 or len(next(iter(dims))) != 1:
            raise ValueError(f"inconsistent vector shapes in table: {sorted(dims)}")
        self._table = {k: np.asarray(v, dtype=np.float64) for k, v in table.items()}
        self.dim = next(iter(dims))[0]
        self.source = source
        self.name = f"table({source})"

    def __contains__(self, token: str) -> bool:
        return token in self._table

    def embed_tokens(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            raise ValueError("cannot embed an empty token sequence")
        rows = []
        for token in tokens:
            if token not in self._table:
                raise OOVError(token, self.source)
            rows.append(self._table[token])
        return np.stack(rows)


def load_vector_table(path) -> TableProvider:
    """Parse the classic text vector format.

    First line is a header "N D" (entry count, dimensionality), followed by
    N lines of "token v1 ... vD", whitespace separated, UTF-8.
    """
    table: dict[str, np.ndarray] = {}
    header: tuple[int, int] | None = None
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if header is None:
                if len(parts) != 2:
                    raise ParseError(path, lineno, 'expected "N D" header line')
                try:
                    header = (int(parts[0]), int(parts[1]))
                except ValueError as exc:
                    raise ParseError(path, lineno, f"bad header: {exc}") from exc
                if header[0] < 1 or header[1] < 1:
                    raise ParseError(path, lineno, "header counts must be positive")
                continue
            if len(parts) != header[1] + 1:
                raise ParseError(
                    path, lineno, f"expected token plus {header[1]} components"
                )
            token = parts[0]
            if token in table:
                raise ParseError(path, lineno, f"duplicate token {token!r}")
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(path, lineno, f"bad float component: {exc}") from exc
            if not np.all(np.isfinite(vec)):
                raise ParseError(path, lineno, "non-finite component")
            table[token] = vec
    if header is None:
        raise ParseError(path, None, "empty vector table file")
    if len(table) != header[0]:
        raise ParseError(path, None, f"header declared {header[0]} entries, found {len(table)}")
    return TableProvider(table, source=str(path))


def embed_word(provider, word: str, segmentation: Segmentation | None = None):
    """Embed one word, returning (tokens, matrix).

    Static providers look each segmentation token up independently, so the
    caller must supply the segmentation. Contextual providers submit the
    word itself and come back with vectors aligned to their own tokenization
    (special positions already stripped), which may differ from any local
    segmentation.
    """
    if getattr(provider, "mode", STATIC_MODE) == CONTEXTUAL_MODE:
        return provider.embed_word(word)
    if segmentation is None:
        raise ValueError("static providers require a segmentation")
    if not segmentation.tokens:
        raise ValueError("empty segmentation")
    return tuple(segmentation.tokens), provider.embed_tokens(segmentation.tokens)


def pooled_similarity(
    provider,
    canonical_tokens: Sequence[str],
    noisy_tokens: Sequence[str],
) -> float:
    """Cosine between the mean-pooled embeddings of two token sequences."""
    pooled_a = mean_pool(provider.embed_tokens(canonical_tokens))
    pooled_b = mean_pool(provider.embed_tokens(noisy_tokens))
    return cosine_similarity(pooled_a, pooled_b)


def word_similarity(provider, word_a: str, seg_a, word_b: str, seg_b) -> float:
    """Pooled cosine between two words under any provider mode."""
    _, matrix_a = embed_word(provider, word_a, seg_a)
    _, matrix_b = embed_word(provider, word_b, seg_b)
    return cosine_similarity(mean_pool(matrix_a), mean_pool(matrix_b))


def baseline_similarity(provider, word: str, tokenizer) -> float:
    """Similarity between a word and the reference word.

    The reference goes through exactly the same segment-embed-pool pathway
    as the word, so the number is meaningful within this provider only.
    """
    return word_similarity(
        provider, word, tokenizer(word), BASELINE_WORD, tokenizer(BASELINE_WORD)
    )
