"""Shared fixtures: canned vocabularies, datasets and providers."""

from pathlib import Path

import pytest

from segprobe.dataset import read_dataset
from segprobe.embedding import load_vector_table
from segprobe.tokenization import make_segmenter

DATA = Path(__file__).parent / "data"

# The six hand-labeled taxonomy rows: canonical/noisy word, their
# segmentations, the expected type and the expected O/M/A multisets.
TAXONOMY_ROWS = [
    {
        "canonical": "tasty",
        "noisy": "taaasty",
        "s": ["tasty"],
        "s_noisy": ["ta", "aa", "sty"],
        "type": "intact",
        "overlap": {},
        "missing": {"tasty": 1},
        "additive": {"ta": 1, "aa": 1, "sty": 1},
    },
    {
        "canonical": "stun",
        "noisy": "stunn",
        "s": ["s", "tun"],
        "s_noisy": ["stu", "nn"],
        "type": "complete",
        "overlap": {},
        "missing": {"s": 1, "tun": 1},
        "additive": {"stu": 1, "nn": 1},
    },
    {
        "canonical": "effectiveness",
        "noisy": "efeectiveness",
        "s": ["effect", "iveness"],
        "s_noisy": ["efe", "ect", "iveness"],
        "type": "partial",
        "overlap": {"iveness": 1},
        "missing": {"effect": 1},
        "additive": {"efe": 1, "ect": 1},
    },
    {
        "canonical": "insubstantial",
        "noisy": "insuubstantial",
        "s": ["ins", "ub", "stan", "tial"],
        "s_noisy": ["ins", "u", "ub", "stan", "tial"],
        "type": "additive_infix",
        "overlap": {"ins": 1, "ub": 1, "stan": 1, "tial": 1},
        "missing": {},
        "additive": {"u": 1},
    },
    {
        "canonical": "hilarious",
        "noisy": "hilariousss",
        "s": ["hil", "ario", "us"],
        "s_noisy": ["hil", "ario", "us", "s", "s"],
        "type": "additive_affix",
        "overlap": {"hil": 1, "ario": 1, "us": 1},
        "missing": {},
        "additive": {"s": 2},
    },
    {
        "canonical": "insubstantial",
        "noisy": "insstantial",
        "s": ["ins", "ub", "stan", "tial"],
        "s_noisy": ["ins", "stan", "tial"],
        "type": "missing",
        "overlap": {"ins": 1, "stan": 1, "tial": 1},
        "missing": {"ub": 1},
        "additive": {},
    },
]


@pytest.fixture(scope="session")
def taxonomy_tokenizer():
    return make_segmenter("external-segmentation-map", DATA / "taxonomy_map.tsv")


@pytest.fixture(scope="session")
def taxonomy_pairs():
    return read_dataset(DATA / "taxonomy_pairs.jsonl")


@pytest.fixture(scope="session")
def decay_tokenizer():
    return make_segmenter("external-segmentation-map", DATA / "decay_map.tsv")


@pytest.fixture(scope="session")
def decay_provider():
    return load_vector_table(DATA / "decay_vectors.txt")


@pytest.fixture(scope="session")
def decay_pairs():
    return read_dataset(DATA / "decay_pairs.jsonl")


@pytest.fixture(scope="session")
def wp_tokenizer():
    return make_segmenter("wordpiece-text", DATA / "wp_vocab.txt")
