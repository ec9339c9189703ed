"""Probe how subword segmentation corruption degrades word embeddings.

The pipeline: build contrastive canonical/noisy word pairs with controlled
noise models, classify how each pair's segmentations diverge, then measure
what the divergence costs in embedding similarity and probe accuracy.
"""

__version__ = "0.1.0"

from .corruption import (
    ADDITIVE_TYPES,
    CorruptionReport,
    CorruptionType,
    additive_placement,
    classify_corruption,
    merged_type,
    partition_multisets,
)
from .dataset import (
    ContrastivePair,
    LexiconEntry,
    build_contrastive_dataset,
    load_lexicon,
    read_dataset,
    write_dataset,
)
from .embedding import (
    HashProvider,
    TableProvider,
    baseline_similarity,
    cosine_similarity,
    embed_word,
    load_vector_table,
    make_hash_provider,
    mean_pool,
    pooled_similarity,
    word_similarity,
)
from .errors import OOVError, ParseError, ProtocolError
from .evaluation import (
    EvaluationReport,
    ProbeModel,
    accuracy_by_type,
    analyze_pairs,
    corruption_frequency_table,
    evaluate_dataset,
    extremes_report,
    missing_corruption_scan,
    multiplicity_curve,
    placement_comparison,
    probe_predict,
    similarity_by_type,
    sorting_agreement,
    train_linear_probe,
)
from .noise import (
    KeyboardLayout,
    NoiseSpec,
    Rejection,
    build_reduplication_pattern,
    default_keyboard_layout,
    generate_abbreviation_candidates,
    keyboard_typo,
    mine_reduplications,
    swap_typo,
    tokenize_corpus,
)
from .remote import BridgeClient, RemoteProvider
from .tokenization import (
    BpeSegmenter,
    MapSegmenter,
    MergeTable,
    Segmentation,
    Vocabulary,
    WordPieceSegmenter,
    bpe_segment,
    load_vocabulary,
    make_segmenter,
    wordpiece_segment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
