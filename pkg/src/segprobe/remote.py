"""Client for the embedding bridge service.

The bridge exposes three JSON endpoints: POST /v1/embed, POST /v1/tokenize
and GET /v1/health. This module validates every response shape before use;
a server that breaks the contract surfaces as ProtocolError, transport
failures surface as requests exceptions.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import requests

from .errors import ProtocolError
from .embedding import CONTEXTUAL_MODE
from .tokenization import Segmentation


class BridgeClient:
    def __init__(self, base_url: str, timeout: float = 60.0, session=None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self._session = session if session is not None else requests.Session()

    def _post(self, endpoint: str, payload: dict) -> dict:
        response = self._session.post(
            f"{self.base_url}{endpoint}", json=payload, timeout=self.timeout
        )
        if response.status_code != 200:
            detail = ""
            try:
                detail = response.json().get("error", "")
            except ValueError:
                pass
            raise ProtocolError(
                f"{endpoint} returned {response.status_code}"
                + (f": {detail}" if detail else "")
            )
        try:
            body = response.json()
        except ValueError as exc:
            raise ProtocolError(f"{endpoint} returned non-JSON body") from exc
        if not isinstance(body, dict):
            raise ProtocolError(f"{endpoint} returned non-object body")
        return body

    def health(self) -> dict:
        response = self._session.get(f"{self.base_url}/v1/health", timeout=self.timeout)
        if response.status_code != 200:
            raise ProtocolError(f"/v1/health returned {response.status_code}")
        body = response.json()
        if body.get("status") != "ok" or not isinstance(body.get("models"), list):
            raise ProtocolError(f"unexpected health body: {body!r}")
        return body

    def tokenize(self, model: str, words: Sequence[str]) -> list[list[str]]:
        body = self._post("/v1/tokenize", {"model": model, "words": list(words)})
        results = body.get("results")
        if not isinstance(results, list) or len(results) != len(words):
            raise ProtocolError("tokenize results missing or miscounted")
        out: list[list[str]] = []
        for word, item in zip(words, results):
            tokens = item.get("tokens") if isinstance(item, dict) else None
            if item.get("word") != word or not isinstance(tokens, list) or not tokens:
                raise ProtocolError(f"bad tokenize result for {word!r}")
            out.append([str(t) for t in tokens])
        return out

    def embed(
        self, model: str, words: Sequence[str], layer: int = -1
    ) -> list[tuple[list[str], np.ndarray]]:
        payload = {"model": model, "words": list(words), "layer": layer}
        body = self._post("/v1/embed", payload)
        dim = body.get("dim")
        results = body.get("results")
        if not isinstance(dim, int) or dim < 1:
            raise ProtocolError("embed response missing dim")
        if not isinstance(results, list) or len(results) != len(words):
            raise ProtocolError("embed results missing or miscounted")
        out: list[tuple[list[str], np.ndarray]] = []
        for word, item in zip(words, results):
            if not isinstance(item, dict) or item.get("word") != word:
                raise ProtocolError(f"bad embed result for {word!r}")
            tokens = item.get("tokens")
            vectors = item.get("vectors")
            if not isinstance(tokens, list) or not isinstance(vectors, list):
                raise ProtocolError(f"bad embed result for {word!r}")
            # alignment invariant: one vector per token, every vector dim-long
            if not tokens or len(tokens) != len(vectors):
                raise ProtocolError(
                    f"token/vector misalignment for {word!r}: "
                    f"{len(tokens)} tokens, {len(vectors)} vectors"
                )
            try:
                matrix = np.asarray(vectors, dtype=np.float64)
            except (TypeError, ValueError) as exc:
                # ragged rows or non-numeric components
                raise ProtocolError(f"malformed vectors for {word!r}") from exc
            if matrix.ndim != 2 or matrix.shape[1] != dim:
                raise ProtocolError(f"vector dim mismatch for {word!r}")
            if not np.all(np.isfinite(matrix)):
                raise ProtocolError(f"non-finite vector component for {word!r}")
            out.append(([str(t) for t in tokens], matrix))
        return out


class RemoteProvider:
    """Contextual per-word embeddings served by a bridge instance.

    Embeds each word in isolation and returns vectors aligned to the
    bridge's own tokenization. dim is learned from the first response.
    A small cache keeps repeated words (notably the baseline word) cheap;
    the underlying session is shared, so instances are usable from
    parallel evaluation workers.
    """

    mode = CONTEXTUAL_MODE

    def __init__(self, client: BridgeClient, model: str, layer: int = -1):
        self.client = client
        self.model = model
        self.layer = layer
        self.name = f"remote({model}, layer={layer})"
        self.dim: int | None = None
        self._cache: dict[str, tuple[tuple[str, ...], np.ndarray]] = {}

    def embed_word(self, word: str) -> tuple[tuple[str, ...], np.ndarray]:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        ((tokens, matrix),) = self.client.embed(self.model, [word], layer=self.layer)
        if self.dim is None:
            self.dim = matrix.shape[1]
        elif matrix.shape[1] != self.dim:
            raise ProtocolError(
                f"dim changed between responses: {matrix.shape[1]} != {self.dim}"
            )
        result = (tuple(tokens), matrix)
        self._cache[word] = result
        return result

    def segment(self, word: str) -> Segmentation:
        """The bridge tokenizer's segmentation, usable as a local tokenizer."""
        (tokens,) = self.client.tokenize(self.model, [word])
        return Segmentation(tokens=tuple(tokens), source_word=word)

    def __call__(self, word: str) -> Segmentation:
        return self.segment(word)
