"""End-to-end run: lexicon + informal corpus -> noisy pairs -> full report.

Everything is inline and seeded, so the printed report is identical on every
run. The pipeline mirrors real usage at small scale: mine reduplications from
informal text, add keyboard and transposition typos, segment both sides of
each pair with a WordPiece vocabulary, embed with deterministic hash vectors,
and render the aggregate report. Run with:

    python3 demos/noise_pipeline.py
"""

from collections import Counter
from string import ascii_lowercase

from segprobe import (
    HashProvider,
    NoiseSpec,
    Vocabulary,
    WordPieceSegmenter,
    build_contrastive_dataset,
    default_keyboard_layout,
    evaluate_dataset,
    tokenize_corpus,
)
from segprobe.dataset import LexiconEntry

LEXICON = [
    LexiconEntry("good", "positive"),
    LexiconEntry("sweet", "positive"),
    LexiconEntry("happy", "positive"),
    LexiconEntry("bad", "negative"),
    LexiconEntry("gross", "negative"),
    LexiconEntry("sad", "negative"),
]

# informal text, the only source of reduplicated variants
CORPUS_LINES = [
    "that pie was soooo gooood http://pie.example/review",
    "@waiter the service was baaaad and the music saaaad",
    "sweeeeet!! deal at the market today",
    "feeling happyyyy about it, not gonna lie",
    "ngl the soup was grosssss",
    "goooooood morning @everyone",
]


def build_vocabulary() -> Vocabulary:
    """Some whole words, some stems, single letters as a floor.

    The split placements make the corruption classes diverge: good, bad,
    sad and happy stay whole, so their noisy forms are either wiped out
    (intact) or extended in place (additive). gross and sweet segment as
    gro + ##ss and swee + ##t, so a typo can erase one stem but not the
    other (partial) or erase both (complete).
    """
    tokens = ["[UNK]", "good", "bad", "sad", "happy"]
    tokens += ["swee", "gro", "##ss", "##et"]
    tokens += list(ascii_lowercase)
    tokens += [f"##{ch}" for ch in ascii_lowercase]
    return Vocabulary({token: i for i, token in enumerate(tokens)})


def main() -> None:
    corpus_tokens = list(tokenize_corpus(CORPUS_LINES))
    print("corpus tokens (urls and mentions dropped, lowercased):")
    print("  " + " ".join(corpus_tokens))
    print()

    specs = [
        NoiseSpec("keyboard"),
        NoiseSpec("swap"),
        NoiseSpec("reduplication", variants_per_word=2),
    ]
    dataset = build_contrastive_dataset(
        LEXICON,
        specs,
        seed=7,
        corpus_tokens=corpus_tokens,
        layout=default_keyboard_layout(),
    )

    by_type = Counter(pair.noise_type for pair in dataset)
    print(f"built {len(dataset)} contrastive pairs: "
          + ", ".join(f"{n} {t}" for t, n in sorted(by_type.items())))
    for pair in dataset:
        print(f"  [{pair.noise_type:>13}] {pair.canonical} -> {pair.noisy}")
    print()

    tokenizer = WordPieceSegmenter(build_vocabulary())
    provider = HashProvider(dim=48, seed=3)
    report = evaluate_dataset(dataset, tokenizer, provider, probe_seed=7, seed=7)
    print(report.render_text())


if __name__ == "__main__":
    main()
