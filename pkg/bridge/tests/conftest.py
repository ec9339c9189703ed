"""Shared fixtures: tiny locally built encoders, app, schema checker.

The suite never touches the network. Each fixture model is a randomly
initialised two-or-three-layer encoder over a small hand-written WordPiece
vocabulary; random weights are fine because the tests assert contract
properties (shapes, alignment, determinism, agreement with the reference
tokenizer), not representation quality. The vocabulary is also written to
vocab.txt inside each model directory so tests can load the exact same
token inventory into other tooling.
"""

import json
import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")
os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")

import jsonschema
import pytest
import torch
from fastapi.testclient import TestClient
from tokenizers import Tokenizer, models, normalizers, pre_tokenizers, processors
from transformers import BertConfig, BertModel, BertTokenizerFast

from embedbridge import ModelRegistry, create_app, load_schema

SPECIALS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")
LETTERS = tuple("abcdefghijklmnopqrstuvwxyz")
# multi-char pieces make segmentations non-trivial; single letters plus
# their continuations keep every ascii word coverable (no accidental unks)
PIECES = ("the", "ins", "##ubst", "##antial", "good", "##ness", "bad", "sweet")
VOCAB = SPECIALS + PIECES + LETTERS + tuple("##" + letter for letter in LETTERS)


def build_encoder_dir(path, hidden_size: int, layers: int, heads: int, seed: int) -> str:
    """Materialise a loadable model directory with the fixture vocabulary."""
    ids = {token: index for index, token in enumerate(VOCAB)}
    core = Tokenizer(models.WordPiece(ids, unk_token="[UNK]", max_input_chars_per_word=100))
    core.normalizer = normalizers.BertNormalizer(lowercase=True)
    core.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    core.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", ids["[CLS]"]), ("[SEP]", ids["[SEP]"])],
    )
    tokenizer = BertTokenizerFast(
        tokenizer_object=core,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )
    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=hidden_size,
        num_hidden_layers=layers,
        num_attention_heads=heads,
        intermediate_size=4 * hidden_size,
        max_position_embeddings=192,
    )
    model = BertModel(config)
    tokenizer.save_pretrained(path)
    model.save_pretrained(path)
    # the loader no longer writes vocab.txt itself; keep one next to the
    # model so the token inventory is shareable as a plain file
    with open(os.path.join(path, "vocab.txt"), "w", encoding="utf-8") as handle:
        handle.write("\n".join(VOCAB) + "\n")
    return str(path)


@pytest.fixture(scope="session")
def model_dirs(tmp_path_factory) -> dict:
    root = tmp_path_factory.mktemp("encoders")
    return {
        "unit-base": build_encoder_dir(str(root / "unit-base"), 32, 2, 2, seed=7),
        "unit-wide": build_encoder_dir(str(root / "unit-wide"), 48, 3, 3, seed=11),
    }


@pytest.fixture(scope="session")
def registry(model_dirs) -> ModelRegistry:
    return ModelRegistry(model_dirs)


@pytest.fixture(scope="session")
def app(registry):
    return create_app(registry)


@pytest.fixture(scope="session")
def client(app) -> TestClient:
    return TestClient(app)


@pytest.fixture(scope="session")
def check_schema():
    """Validator closure over the schemas shipped inside the package."""
    cache = {name: load_schema(name) for name in (
        "embed_request", "embed_response", "tokenize_request",
        "tokenize_response", "health_response", "error_response",
    )}

    def check(instance, name: str):
        jsonschema.validate(
            instance, cache[name],
            format_checker=jsonschema.Draft202012Validator.FORMAT_CHECKER,
        )
        return instance

    return check
