"""Walk the six segmentation-divergence classes on hand-picked pairs.

Each canonical/noisy word pair is segmented by a fixed lookup segmenter, so
the printout shows exactly how the overlap/missing/additive partition of
the two token multisets drives the classification:

    python3 demos/taxonomy_walkthrough.py
"""

from segprobe import Segmentation, classify_corruption
from segprobe.tokenization import MapSegmenter

# word -> token sequence, covering every class the classifier can emit
SEGMENTATIONS = {
    "tasty": ["tasty"],
    "taaasty": ["ta", "aa", "sty"],
    "stun": ["s", "tun"],
    "stunn": ["stu", "nn"],
    "goodness": ["good", "##ness"],
    "gooodness": ["go", "##oo", "##d", "##ness"],
    "insubstantial": ["ins", "##ubst", "##antial"],
    "insuubstantial": ["ins", "##u", "##ubst", "##antial"],
    "hilarious": ["hilarious"],
    "hilariousss": ["hilarious", "##s", "##s"],
    "insstantial": ["ins", "##antial"],
}

PAIRS = [
    ("tasty", "taaasty", "single canonical token wiped out entirely"),
    ("stun", "stunn", "multi-token canonical with zero surviving tokens"),
    ("goodness", "gooodness", "some canonical tokens survive, some are replaced"),
    ("insubstantial", "insuubstantial", "extra token inserted between survivors"),
    ("hilarious", "hilariousss", "extra tokens appended at the boundary"),
    ("insubstantial", "insstantial", "noisy tokens are a strict subset"),
]


def segmentation_for(word: str) -> Segmentation:
    return Segmentation(tokens=tuple(SEGMENTATIONS[word]), source_word=word)


def show(counter: dict) -> str:
    if not counter:
        return "(empty)"
    return " ".join(f"{token}x{count}" if count > 1 else token for token, count in sorted(counter.items()))


def main() -> None:
    segmenter = MapSegmenter({word: segmentation_for(word) for word in SEGMENTATIONS})
    width = max(len(f"{c} / {n}") for c, n, _ in PAIRS)
    print("how noise corrupts subword segmentations")
    print("=" * 72)
    for canonical, noisy, story in PAIRS:
        report = classify_corruption(segmenter(canonical), segmenter(noisy))
        doc = report.to_json_dict()
        print(f"{canonical} / {noisy}".ljust(width + 2) + f"-> {doc['type']}")
        print(f"  canonical tokens : {' '.join(segmenter(canonical).tokens)}")
        print(f"  noisy tokens     : {' '.join(segmenter(noisy).tokens)}")
        print(f"  overlap          : {show(doc['overlap'])}")
        print(f"  missing          : {show(doc['missing'])}")
        print(f"  additive         : {show(doc['additive'])} (count {doc['additive_count']})")
        print(f"  reading          : {story}")
        print()


if __name__ == "__main__":
    main()
