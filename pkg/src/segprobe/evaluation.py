"""Aggregate classifications, similarities and probe accuracies into reports.

Every aggregate here is a deterministic fold over per-pair outcomes sorted
by pair_id, so results are independent of worker count and input order.
Accounting invariant maintained throughout:

    classified + identical + unknown + oov_excluded == total pairs

The linear sentiment probe stands in for fine-tuned classifier heads: same
metric semantics, deterministic, desk-scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy.special import expit
from scipy.stats import pearsonr

from .corruption import (
    ADDITIVE_TYPES,
    CorruptionReport,
    CorruptionType,
    classify_corruption,
    merged_type,
)
from .dataset import ContrastivePair, LexiconEntry
from .embedding import (
    BASELINE_WORD,
    baseline_similarity,
    cosine_similarity,
    embed_word,
    mean_pool,
)
from .errors import OOVError
from .noise import generate_abbreviation_candidates
from .parallel import parallel_map

POSITIVE = "positive"

#: Merged-type display order for table rendering.
TYPE_ORDER = ("intact", "complete", "partial", "additive", "missing", "identical")

#: Default corruption types entering the multiplicity curve: those whose
#: additive multiset is the whole story (overlap fixed, nothing missing
#: beyond the canonical single token).
MULTIPLICITY_TYPES = (
    CorruptionType.INTACT,
    CorruptionType.ADDITIVE_AFFIX,
    CorruptionType.ADDITIVE_INFIX,
)


# ---------------------------------------------------------------------------
# linear probe


@dataclass(frozen=True)
class ProbeModel:
    weights: np.ndarray
    bias: float
    training_meta: dict


def logistic_loss(weights: np.ndarray, bias: float, X: np.ndarray, y: np.ndarray) -> float:
    """Mean logistic loss; y holds {0,1} labels."""
    z = X @ weights + bias
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def logistic_gradients(
    weights: np.ndarray, bias: float, X: np.ndarray, y: np.ndarray
) -> tuple[np.ndarray, float]:
    """Analytic gradient of logistic_loss in (weights, bias)."""
    residual = expit(X @ weights + bias) - y
    grad_w = X.T @ residual / len(y)
    grad_b = float(np.mean(residual))
    return grad_w, grad_b


def train_linear_probe(
    examples: Sequence[tuple[np.ndarray, str]],
    learning_rate: float = 0.1,
    epochs: int = 200,
    seed: int = 0,
) -> ProbeModel:
    """Full-batch gradient descent on the logistic loss, zero init.

    Deterministic for given data and hyperparameters; the seed is echoed
    into the report even though zero init leaves nothing to randomize.
    """
    if not examples:
        raise ValueError("no training examples")
    X = np.stack([np.asarray(v, dtype=np.float64) for v, _ in examples])
    y = np.array([1.0 if label == POSITIVE else 0.0 for _, label in examples])
    if len(set(y.tolist())) < 2:
        raise ValueError("probe training needs both classes present")
    weights = np.zeros(X.shape[1])
    bias = 0.0
    for _ in range(epochs):
        grad_w, grad_b = logistic_gradients(weights, bias, X, y)
        weights = weights - learning_rate * grad_w
        bias = bias - learning_rate * grad_b
    meta = {"seed": seed, "epochs": epochs, "learning_rate": learning_rate}
    return ProbeModel(weights=weights, bias=bias, training_meta=meta)


def probe_predict(model: ProbeModel, vector: np.ndarray) -> str:
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != model.weights.shape:
        raise ValueError(f"dim mismatch: {vector.shape} vs {model.weights.shape}")
    score = float(np.dot(model.weights, vector) + model.bias)
    return "positive" if score >= 0.0 else "negative"


# ---------------------------------------------------------------------------
# per-pair analysis shared by all aggregates

CLASSIFIED = "classified"
IDENTICAL = "identical"
UNKNOWN = "unknown"
OOV_EXCLUDED = "oov_excluded"


@dataclass(frozen=True)
class PairOutcome:
    """Everything one aggregate step needs to know about one pair."""

    pair: ContrastivePair
    report: CorruptionReport
    status: str
    similarity: float | None = None
    canonical_pooled: np.ndarray | None = None
    noisy_pooled: np.ndarray | None = None


def analyze_pairs(
    dataset: Sequence[ContrastivePair],
    tokenizer: Callable,
    provider=None,
    jobs: int = 1,
) -> list[PairOutcome]:
    """Classify (and, with a provider, embed) every pair.

    Identical and unknown pairs are excluded before any embedding happens;
    classified pairs that hit an out-of-vocabulary token under the provider
    become oov_excluded. Output is sorted by pair_id.
    """
    unk = getattr(tokenizer, "unk_token", None)

    def analyze(pair: ContrastivePair) -> PairOutcome:
        report = classify_corruption(
            tokenizer(pair.canonical), tokenizer(pair.noisy), unk_token=unk
        )
        if report.corruption_type is CorruptionType.IDENTICAL:
            # excluded from corruption aggregates, but the similarity table
            # still reports these (trivially 1.0) under their own label
            similarity = None
            if provider is not None:
                try:
                    _, matrix = embed_word(provider, pair.canonical, tokenizer(pair.canonical))
                    _, noisy_matrix = embed_word(provider, pair.noisy, tokenizer(pair.noisy))
                    similarity = cosine_similarity(
                        mean_pool(matrix), mean_pool(noisy_matrix)
                    )
                except OOVError:
                    pass
            return PairOutcome(pair, report, IDENTICAL, similarity=similarity)
        if report.corruption_type is CorruptionType.UNKNOWN:
            return PairOutcome(pair, report, UNKNOWN)
        if provider is None:
            return PairOutcome(pair, report, CLASSIFIED)
        try:
            _, canonical_matrix = embed_word(provider, pair.canonical, tokenizer(pair.canonical))
            _, noisy_matrix = embed_word(provider, pair.noisy, tokenizer(pair.noisy))
        except OOVError:
            return PairOutcome(pair, report, OOV_EXCLUDED)
        canonical_pooled = mean_pool(canonical_matrix)
        noisy_pooled = mean_pool(noisy_matrix)
        return PairOutcome(
            pair,
            report,
            CLASSIFIED,
            similarity=cosine_similarity(canonical_pooled, noisy_pooled),
            canonical_pooled=canonical_pooled,
            noisy_pooled=noisy_pooled,
        )

    outcomes = parallel_map(analyze, dataset, jobs)
    return sorted(outcomes, key=lambda o: o.pair.pair_id)


def outcome_counts(outcomes: Sequence[PairOutcome]) -> dict[str, int]:
    counts = {CLASSIFIED: 0, IDENTICAL: 0, UNKNOWN: 0, OOV_EXCLUDED: 0}
    for outcome in outcomes:
        counts[outcome.status] += 1
    counts["total"] = len(outcomes)
    return counts


def _classified(outcomes: Iterable[PairOutcome]) -> list[PairOutcome]:
    return [o for o in outcomes if o.status == CLASSIFIED]


# ---------------------------------------------------------------------------
# aggregates


def corruption_frequency_table(
    dataset: Sequence[ContrastivePair],
    tokenizer: Callable,
    jobs: int = 1,
    outcomes: Sequence[PairOutcome] | None = None,
) -> dict[str, dict[str, float]]:
    """Per noise model, the fraction of each fine-grained corruption type.

    Denominator is the classified pairs of that noise model (identical and
    unknown pairs drop out), so each row sums to 1.
    """
    if outcomes is None:
        outcomes = analyze_pairs(dataset, tokenizer, provider=None, jobs=jobs)
    groups: dict[str, dict[str, int]] = {}
    for outcome in outcomes:
        if outcome.status in (IDENTICAL, UNKNOWN):
            continue
        row = groups.setdefault(outcome.pair.noise_type, {})
        label = outcome.report.corruption_type.value
        row[label] = row.get(label, 0) + 1
    table: dict[str, dict[str, float]] = {}
    for noise_type in sorted(groups):
        row = groups[noise_type]
        total = sum(row.values())
        table[noise_type] = {label: row[label] / total for label in sorted(row)}
    return table


@dataclass(frozen=True)
class SimilarityTable:
    per_type: dict[str, float]
    baseline: float
    counts: dict[str, int]
    per_type_count: dict[str, int] = field(default_factory=dict)


def similarity_by_type(
    dataset: Sequence[ContrastivePair],
    tokenizer: Callable,
    provider,
    jobs: int = 1,
    outcomes: Sequence[PairOutcome] | None = None,
) -> SimilarityTable:
    """Mean pooled cosine per merged corruption type, plus the provider's
    baseline (mean similarity of canonical words to the reference word)."""
    if outcomes is None:
        outcomes = analyze_pairs(dataset, tokenizer, provider, jobs=jobs)
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    baseline_words: list[str] = []
    seen_words: set[str] = set()
    for outcome in outcomes:
        if outcome.status not in (CLASSIFIED, IDENTICAL) or outcome.similarity is None:
            continue
        label = merged_type(outcome.report.corruption_type)
        sums[label] = sums.get(label, 0.0) + outcome.similarity
        counts[label] = counts.get(label, 0) + 1
        word = outcome.pair.canonical
        if word not in seen_words:
            seen_words.add(word)
            baseline_words.append(word)
    baselines = []
    for word in baseline_words:
        try:
            baselines.append(baseline_similarity(provider, word, tokenizer))
        except OOVError:
            continue
    per_type = {label: sums[label] / counts[label] for label in sorted(sums)}
    baseline = float(np.mean(baselines)) if baselines else float("nan")
    return SimilarityTable(
        per_type=per_type,
        baseline=baseline,
        counts=outcome_counts(outcomes),
        per_type_count=dict(sorted(counts.items())),
    )


@dataclass(frozen=True)
class AccuracyTable:
    per_type: dict[str, float]
    overall: float
    evaluated: int
    canonical_wrong: int
    counts: dict[str, int]


def accuracy_by_type(
    dataset: Sequence[ContrastivePair],
    tokenizer: Callable,
    provider,
    probe: ProbeModel,
    jobs: int = 1,
    outcomes: Sequence[PairOutcome] | None = None,
) -> AccuracyTable:
    """Probe accuracy on noisy forms whose canonical form the probe gets right.

    Canonical forms selected for evaluation are correct by construction, so
    the interesting number is how far each corruption type drags accuracy
    down from 1. Counted per noisy variant, not per word.
    """
    if outcomes is None:
        outcomes = analyze_pairs(dataset, tokenizer, provider, jobs=jobs)
    correct: dict[str, int] = {}
    seen: dict[str, int] = {}
    canonical_wrong = 0
    for outcome in _classified(outcomes):
        if probe_predict(probe, outcome.canonical_pooled) != outcome.pair.sentiment:
            canonical_wrong += 1
            continue
        label = merged_type(outcome.report.corruption_type)
        seen[label] = seen.get(label, 0) + 1
        if probe_predict(probe, outcome.noisy_pooled) == outcome.pair.sentiment:
            correct[label] = correct.get(label, 0) + 1
    per_type = {label: correct.get(label, 0) / seen[label] for label in sorted(seen)}
    evaluated = sum(seen.values())
    overall = sum(correct.values()) / evaluated if evaluated else float("nan")
    return AccuracyTable(
        per_type=per_type,
        overall=overall,
        evaluated=evaluated,
        canonical_wrong=canonical_wrong,
        counts=outcome_counts(outcomes),
    )


@dataclass(frozen=True)
class PlacementStats:
    similarity: float
    accuracy: float | None
    count: int


def placement_comparison(
    dataset: Sequence[ContrastivePair],
    tokenizer: Callable,
    provider,
    probe: ProbeModel | None = None,
    jobs: int = 1,
    outcomes: Sequence[PairOutcome] | None = None,
) -> dict[str, PlacementStats]:
    """Similarity (and accuracy, given a probe) for additive pairs split by
    placement. A placement with no pairs is absent from the result."""
    if outcomes is None:
        outcomes = analyze_pairs(dataset, tokenizer, provider, jobs=jobs)
    buckets: dict[str, list[PairOutcome]] = {"infix": [], "affix": []}
    for outcome in _classified(outcomes):
        if outcome.report.corruption_type is CorruptionType.ADDITIVE_INFIX:
            buckets["infix"].append(outcome)
        elif outcome.report.corruption_type is CorruptionType.ADDITIVE_AFFIX:
            buckets["affix"].append(outcome)
    result: dict[str, PlacementStats] = {}
    for placement, members in buckets.items():
        if not members:
            continue
        mean_sim = float(np.mean([o.similarity for o in members]))
        accuracy = None
        if probe is not None:
            eligible = [
                o
                for o in members
                if probe_predict(probe, o.canonical_pooled) == o.pair.sentiment
            ]
            if eligible:
                hits = sum(
                    1
                    for o in eligible
                    if probe_predict(probe, o.noisy_pooled) == o.pair.sentiment
                )
                accuracy = hits / len(eligible)
        result[placement] = PlacementStats(mean_sim, accuracy, len(members))
    return result


def multiplicity_curve(
    dataset: Sequence[ContrastivePair],
    tokenizer: Callable,
    provider,
    types: Sequence[CorruptionType] = MULTIPLICITY_TYPES,
    jobs: int = 1,
    outcomes: Sequence[PairOutcome] | None = None,
) -> tuple[dict[int, float], float]:
    """Mean similarity per additive-token count, plus the Pearson correlation
    between count and similarity over the selected pairs."""
    if outcomes is None:
        outcomes = analyze_pairs(dataset, tokenizer, provider, jobs=jobs)
    wanted = set(types)
    points: list[tuple[int, float]] = []
    for outcome in _classified(outcomes):
        if outcome.report.corruption_type in wanted and outcome.report.additive_count > 0:
            points.append((outcome.report.additive_count, outcome.similarity))
    groups: dict[int, list[float]] = {}
    for count, sim in points:
        groups.setdefault(count, []).append(sim)
    if len(groups) < 2:
        raise ValueError(
            f"multiplicity curve needs >= 2 distinct additive counts, got {len(groups)}"
        )
    curve = {count: float(np.mean(groups[count])) for count in sorted(groups)}
    correlation = float(pearsonr([c for c, _ in points], [s for _, s in points]).statistic)
    return curve, correlation


def sorting_agreement(
    dataset: Sequence[ContrastivePair],
    tokenizer: Callable,
    provider,
    min_variants: int = 3,
    jobs: int = 1,
    outcomes: Sequence[PairOutcome] | None = None,
) -> tuple[int, int]:
    """Do similarity ranking and multiplicity ranking agree per collection?

    A collection is one canonical word's additive variants that all add the
    same single token type, at pairwise distinct multiplicities (duplicates
    keep the lowest pair_id), with at least min_variants members. Agreement
    means sorting by similarity descending equals sorting by multiplicity
    ascending.
    """
    if outcomes is None:
        outcomes = analyze_pairs(dataset, tokenizer, provider, jobs=jobs)
    collections: dict[tuple[str, str], dict[int, PairOutcome]] = {}
    for outcome in _classified(outcomes):
        if outcome.report.corruption_type not in ADDITIVE_TYPES:
            continue
        if len(outcome.report.additive) != 1:
            continue  # more than one distinct added token: out of this analysis
        token = next(iter(outcome.report.additive))
        key = (outcome.pair.canonical, token)
        by_count = collections.setdefault(key, {})
        # outcomes arrive sorted by pair_id, so first claim on a
        # multiplicity wins deterministically
        by_count.setdefault(outcome.report.additive_count, outcome)
    agreeing = 0
    total = 0
    for key in sorted(collections):
        members = list(collections[key].values())
        if len(members) < min_variants:
            continue
        total += 1
        by_similarity = sorted(members, key=lambda o: (-o.similarity, o.pair.pair_id))
        by_multiplicity = sorted(members, key=lambda o: o.report.additive_count)
        if [o.pair.pair_id for o in by_similarity] == [
            o.pair.pair_id for o in by_multiplicity
        ]:
            agreeing += 1
    if total == 0:
        raise ValueError(
            "no collections with enough additive variants; enlarge the dataset"
        )
    return agreeing, total


@dataclass(frozen=True)
class MissingScan:
    proportion: float
    candidate_total: int
    missing_pairs: list[tuple[str, str]]
    extra_results: list[tuple[str, str, str]]


def missing_corruption_scan(
    lexicon: Sequence[LexiconEntry],
    tokenizer: Callable,
    extra_pairs: Sequence[tuple[str, str]] | None = None,
    jobs: int = 1,
) -> MissingScan:
    """Scan abbreviation candidates for the missing corruption.

    Every consonant-skeleton abbreviation candidate of every lexicon word is
    classified against its canonical form; the proportion is missing
    candidates over all candidates. Externally supplied (word, abbreviation)
    pairs are classified and reported alongside, not counted in the
    proportion.
    """
    unk = getattr(tokenizer, "unk_token", None)

    def scan(entry: LexiconEntry) -> tuple[int, list[tuple[str, str]]]:
        candidates = generate_abbreviation_candidates(entry.word)
        missing: list[tuple[str, str]] = []
        for candidate in candidates:
            report = classify_corruption(
                tokenizer(entry.word), tokenizer(candidate), unk_token=unk
            )
            if report.corruption_type is CorruptionType.MISSING:
                missing.append((entry.word, candidate))
        return len(candidates), missing

    results = parallel_map(scan, lexicon, jobs)
    candidate_total = sum(n for n, _ in results)
    missing_pairs = [pair for _, pairs in results for pair in pairs]
    proportion = len(missing_pairs) / candidate_total if candidate_total else 0.0
    extra_results = []
    for word, candidate in extra_pairs or ():
        report = classify_corruption(
            tokenizer(word), tokenizer(candidate), unk_token=unk
        )
        extra_results.append((word, candidate, report.corruption_type.value))
    return MissingScan(
        proportion=proportion,
        candidate_total=candidate_total,
        missing_pairs=sorted(missing_pairs),
        extra_results=extra_results,
    )


@dataclass(frozen=True)
class Extremes:
    best: list[PairOutcome]
    worst: list[PairOutcome]
    shortfall: bool


def extremes_report(
    dataset: Sequence[ContrastivePair],
    tokenizer: Callable,
    provider,
    k: int = 10,
    jobs: int = 1,
    outcomes: Sequence[PairOutcome] | None = None,
) -> dict[str, Extremes]:
    """Top-k and bottom-k pairs by similarity per merged corruption type.

    Ties break on pair_id; types with fewer than k pairs return everything
    they have with the shortfall flagged.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if outcomes is None:
        outcomes = analyze_pairs(dataset, tokenizer, provider, jobs=jobs)
    groups: dict[str, list[PairOutcome]] = {}
    for outcome in _classified(outcomes):
        groups.setdefault(merged_type(outcome.report.corruption_type), []).append(outcome)
    report: dict[str, Extremes] = {}
    for label in sorted(groups):
        members = groups[label]
        best = sorted(members, key=lambda o: (-o.similarity, o.pair.pair_id))[:k]
        worst = sorted(members, key=lambda o: (o.similarity, o.pair.pair_id))[:k]
        report[label] = Extremes(best=best, worst=worst, shortfall=len(members) < k)
    return report


# ---------------------------------------------------------------------------
# full report


@dataclass
class EvaluationReport:
    provider_name: str
    seed: int | None
    counts: dict[str, int]
    per_type_frequency: dict[str, dict[str, float]]
    per_type_similarity: dict[str, float]
    per_type_similarity_count: dict[str, int]
    baseline: float
    per_type_accuracy: dict[str, float] | None
    overall_accuracy: float | None
    placement: dict[str, PlacementStats]
    multiplicity_curve: dict[int, float] | None
    correlation: float | None
    sorting_agreement: tuple[int, int] | None
    extremes: dict[str, Extremes]
    accuracy_note: str = "accuracy counted per noisy variant, not per word"

    def to_json_dict(self) -> dict:
        def outcome_json(outcome: PairOutcome) -> dict:
            return {
                "pair_id": outcome.pair.pair_id,
                "canonical": outcome.pair.canonical,
                "noisy": outcome.pair.noisy,
                "similarity": outcome.similarity,
                "report": outcome.report.to_json_dict(),
            }

        agreement = None
        if self.sorting_agreement is not None:
            agreeing, total = self.sorting_agreement
            agreement = {
                "agreeing": agreeing,
                "total": total,
                "fraction": agreeing / total,
            }
        return {
            "provider": self.provider_name,
            "seed": self.seed,
            "counts": self.counts,
            "frequency": self.per_type_frequency,
            "similarity": {
                "per_type": self.per_type_similarity,
                "per_type_count": self.per_type_similarity_count,
                "baseline": self.baseline,
            },
            "accuracy": None
            if self.per_type_accuracy is None
            else {
                "per_type": self.per_type_accuracy,
                "overall": self.overall_accuracy,
                "note": self.accuracy_note,
            },
            "placement": {
                placement: {
                    "similarity": stats.similarity,
                    "accuracy": stats.accuracy,
                    "count": stats.count,
                }
                for placement, stats in self.placement.items()
            },
            "multiplicity": None
            if self.multiplicity_curve is None
            else {
                "curve": {str(k): v for k, v in self.multiplicity_curve.items()},
                "correlation": self.correlation,
            },
            "sorting_agreement": agreement,
            "extremes": {
                label: {
                    "best": [outcome_json(o) for o in ext.best],
                    "worst": [outcome_json(o) for o in ext.worst],
                    "shortfall": ext.shortfall,
                }
                for label, ext in self.extremes.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def multiplicity_csv(self) -> str:
        """Plot-ready CSV of the multiplicity curve."""
        lines = ["additive_count,mean_similarity"]
        for count, mean in (self.multiplicity_curve or {}).items():
            lines.append(f"{count},{mean:.6f}")
        return "\n".join(lines) + "\n"

    def render_text(self) -> str:
        """Aligned-column text rendering of the main tables."""
        return render_report(self.to_json_dict())


def render_report(doc: Mapping) -> str:
    """Text tables from a serialized EvaluationReport document."""
    out: list[str] = []
    out.append(f"provider: {doc.get('provider', '?')}")
    if doc.get("seed") is not None:
        out.append(f"seed: {doc['seed']}")
    counts = doc.get("counts", {})
    if counts:
        out.append(
            "pairs: total={total} classified={classified} identical={identical} "
            "unknown={unknown} oov_excluded={oov_excluded}".format(**counts)
        )
    frequency = doc.get("frequency", {})
    if frequency:
        out.append("")
        out.append("corruption frequency by noise model")
        labels = sorted({t for row in frequency.values() for t in row})
        width = max(len(t) for t in labels) + 2
        out.append("  {:<16}".format("noise") + "".join(f"{t:>{width}}" for t in labels))
        for noise_type in sorted(frequency):
            row = frequency[noise_type]
            cells = "".join(
                f"{row[t]:>{width}.2f}" if t in row else " " * (width - 1) + "-"
                for t in labels
            )
            out.append(f"  {noise_type:<16}" + cells)
    similarity = doc.get("similarity", {})
    if similarity:
        out.append("")
        out.append("similarity by corruption type (pooled cosine)")
        per_type = similarity.get("per_type", {})
        per_count = similarity.get("per_type_count", {})
        for label in TYPE_ORDER:
            if label in per_type:
                out.append(
                    f"  {label:<12}{per_type[label]:>8.3f}   (n={per_count.get(label, 0)})"
                )
        out.append(f"  {'baseline':<12}{similarity.get('baseline', float('nan')):>8.3f}")
    accuracy = doc.get("accuracy")
    if accuracy:
        out.append("")
        out.append("probe accuracy by corruption type (canonical-correct pairs)")
        for label in TYPE_ORDER:
            if label in accuracy.get("per_type", {}):
                out.append(f"  {label:<12}{accuracy['per_type'][label]:>8.3f}")
        out.append(f"  {'overall':<12}{accuracy['overall']:>8.3f}")
    placement = doc.get("placement", {})
    if placement:
        out.append("")
        out.append("additive placement comparison")
        for kind in ("infix", "affix"):
            stats = placement.get(kind)
            if stats is None:
                continue
            acc = "-" if stats.get("accuracy") is None else f"{stats['accuracy']:.3f}"
            out.append(
                f"  {kind:<8}sim={stats['similarity']:.3f}  acc={acc}  n={stats['count']}"
            )
    multiplicity = doc.get("multiplicity")
    if multiplicity:
        out.append("")
        out.append("similarity by additive token count")
        curve = multiplicity.get("curve", {})
        for count in sorted(curve, key=int):
            out.append(f"  {int(count):>3}  {curve[count]:.5f}")
        out.append(f"  pearson correlation: {multiplicity['correlation']:.4f}")
    agreement = doc.get("sorting_agreement")
    if agreement:
        out.append("")
        out.append(
            "sorting agreement: {agreeing}/{total} collections ({fraction:.3f})".format(
                **agreement
            )
        )
    return "\n".join(out) + "\n"


def evaluate_dataset(
    dataset: Sequence[ContrastivePair],
    tokenizer: Callable,
    provider,
    probe_seed: int = 0,
    extremes_k: int = 10,
    min_variants: int = 3,
    jobs: int = 1,
    seed: int | None = None,
) -> EvaluationReport:
    """Run the full per-pair fold once and assemble every aggregate.

    Sections that need structure the dataset lacks (a second class for the
    probe, two multiplicity groups, collections) degrade to absent rather
    than failing the whole report.
    """
    outcomes = analyze_pairs(dataset, tokenizer, provider, jobs=jobs)
    counts = outcome_counts(outcomes)
    frequency = corruption_frequency_table(dataset, tokenizer, outcomes=outcomes)
    similarity = similarity_by_type(dataset, tokenizer, provider, outcomes=outcomes)

    probe = None
    per_type_accuracy = None
    overall_accuracy = None
    canonical_examples: dict[str, tuple[np.ndarray, str]] = {}
    for outcome in _classified(outcomes):
        word = outcome.pair.canonical
        if word not in canonical_examples:
            canonical_examples[word] = (outcome.canonical_pooled, outcome.pair.sentiment)
    labels = {sentiment for _, sentiment in canonical_examples.values()}
    if len(labels) == 2:
        probe = train_linear_probe(list(canonical_examples.values()), seed=probe_seed)
        accuracy = accuracy_by_type(
            dataset, tokenizer, provider, probe, outcomes=outcomes
        )
        per_type_accuracy = accuracy.per_type
        overall_accuracy = accuracy.overall

    placement = placement_comparison(
        dataset, tokenizer, provider, probe, outcomes=outcomes
    )
    try:
        curve, correlation = multiplicity_curve(
            dataset, tokenizer, provider, outcomes=outcomes
        )
    except ValueError:
        curve, correlation = None, None
    try:
        agreement = sorting_agreement(
            dataset, tokenizer, provider, min_variants=min_variants, outcomes=outcomes
        )
    except ValueError:
        agreement = None
    extremes = extremes_report(
        dataset, tokenizer, provider, k=extremes_k, outcomes=outcomes
    )
    return EvaluationReport(
        provider_name=getattr(provider, "name", repr(provider)),
        seed=seed,
        counts=counts,
        per_type_frequency=frequency,
        per_type_similarity=similarity.per_type,
        per_type_similarity_count=similarity.per_type_count,
        baseline=similarity.baseline,
        per_type_accuracy=per_type_accuracy,
        overall_accuracy=overall_accuracy,
        placement=placement,
        multiplicity_curve=curve,
        correlation=correlation,
        sorting_agreement=agreement,
        extremes=extremes,
    )
