"""Model registry and per-word encoding.

Models are declared through the EMBED_BRIDGE_MODELS environment variable as
a comma separated list of name=source entries; a bare entry serves as its
own name. A source is anything transformers can load: a hub id or a local
directory. Loading is lazy and cached, so startup stays cheap and unknown
names can be rejected without touching the network.
"""

from __future__ import annotations

import threading
from typing import Mapping, Sequence

import torch
from transformers import AutoModel, AutoTokenizer

MODELS_ENV = "EMBED_BRIDGE_MODELS"
CACHE_ENV = "EMBED_BRIDGE_CACHE"
PORT_ENV = "EMBED_BRIDGE_PORT"
HOST_ENV = "EMBED_BRIDGE_HOST"

DEFAULT_PORT = 8301
DEFAULT_HOST = "127.0.0.1"


def parse_model_specs(raw: str) -> dict[str, str]:
    """Parse ``name=source,name=source`` into an ordered mapping.

    Blank entries are skipped so trailing commas are harmless. Duplicate
    names and entries with an empty half are configuration errors.
    """
    sources: dict[str, str] = {}
    for chunk in raw.split(","):
        entry = chunk.strip()
        if not entry:
            continue
        name, sep, source = entry.partition("=")
        name = name.strip()
        source = source.strip() if sep else name
        if not name or not source:
            raise ValueError(f"bad model entry {entry!r}")
        if name in sources:
            raise ValueError(f"duplicate model name {name!r}")
        sources[name] = source
    return sources


class WordEncoder:
    """One loaded tokenizer/model pair with word-level helpers.

    The model is evaluation-mode and never mutated after construction, so a
    single instance is safe to share across request threads.
    """

    def __init__(self, name: str, source: str, cache_dir: str | None = None):
        self.name = name
        self.source = source
        self.tokenizer = AutoTokenizer.from_pretrained(source, cache_dir=cache_dir)
        self.model = AutoModel.from_pretrained(source, cache_dir=cache_dir)
        self.model.eval()
        # hidden_states carries the embedding output plus one entry per layer
        self.state_count = int(self.model.config.num_hidden_layers) + 1

    def valid_layer(self, layer: int) -> bool:
        return -self.state_count <= layer < self.state_count

    def tokenize_word(self, word: str) -> list[str]:
        """The model tokenizer's bare subword sequence, no special tokens."""
        return list(self.tokenizer.tokenize(word))

    def encode_words(
        self, words: Sequence[str], layer: int
    ) -> tuple[list[tuple[list[str], list[list[float]]]], int]:
        """Encode each word in isolation and return (tokens, vectors) rows.

        Words are padded into one batch for the forward pass; special and
        padding positions are stripped from the output, so every row is
        aligned one vector per subword token. Returns the rows plus the
        width of the selected hidden layer.
        """
        encoded = self.tokenizer(
            list(words),
            add_special_tokens=True,
            padding=True,
            return_tensors="pt",
            return_special_tokens_mask=True,
        )
        with torch.inference_mode():
            output = self.model(
                input_ids=encoded["input_ids"],
                attention_mask=encoded["attention_mask"],
                output_hidden_states=True,
            )
        hidden = output.hidden_states[layer]
        keep = (encoded["special_tokens_mask"] == 0) & (encoded["attention_mask"] == 1)
        rows: list[tuple[list[str], list[list[float]]]] = []
        for index in range(len(words)):
            ids = encoded["input_ids"][index][keep[index]]
            tokens = self.tokenizer.convert_ids_to_tokens(ids.tolist())
            vectors = hidden[index][keep[index]].to(torch.float64).cpu().numpy()
            rows.append((tokens, vectors.tolist()))
        return rows, int(hidden.shape[-1])


class ModelRegistry:
    """Name -> encoder lookup over a fixed set of declared sources."""

    def __init__(self, sources: Mapping[str, str], cache_dir: str | None = None):
        self.sources = {name: str(source) for name, source in sources.items()}
        self.cache_dir = cache_dir
        self._encoders: dict[str, WordEncoder] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_env(cls, environ: Mapping[str, str]) -> "ModelRegistry":
        sources = parse_model_specs(environ.get(MODELS_ENV, ""))
        return cls(sources, cache_dir=environ.get(CACHE_ENV) or None)

    def names(self) -> list[str]:
        return sorted(self.sources)

    def __contains__(self, name: str) -> bool:
        return name in self.sources

    def get(self, name: str) -> WordEncoder:
        if name not in self.sources:
            raise KeyError(name)
        # the lock also serializes first loads racing from request threads
        with self._lock:
            encoder = self._encoders.get(name)
            if encoder is None:
                encoder = WordEncoder(name, self.sources[name], cache_dir=self.cache_dir)
                self._encoders[name] = encoder
        return encoder
