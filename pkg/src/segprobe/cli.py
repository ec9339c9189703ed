"""Command-line entry point.

Subcommands: tokenize, classify, build-dataset, mine, scan-missing,
evaluate, report. Behaviour is driven by a key-value config file; every key
can be overridden with --set key=value, and the dedicated flags (--seed,
--jobs, --out, --provider, --remote-url, --model) win over both.

Logs go to stderr; data goes to stdout or the --out path, so pipelines
compose. Exit codes: 0 success, 1 data error (one machine-readable JSON
error line on stderr), 2 usage error.

Config keys:

    tokenizer.format    wordpiece-text | bpe-json-plus-merges | external-segmentation-map
    tokenizer.vocab     vocabulary path (TSV map path for the map format)
    tokenizer.merges    merges path (bpe only)
    tokenizer.unk       unk token override
    tokenizer.marker    continuation marker override
    tokenizer.byte_level     true|false (bpe)
    tokenizer.mark_initial   true|false (bpe)
    provider.kind       hash | table | remote
    provider.dim        hash dimensionality (default 32)
    provider.seed       hash seed (default 0)
    provider.table      vector table path (table kind)
    provider.url        bridge base url (remote kind)
    provider.model      bridge model name (remote kind)
    provider.layer      bridge layer (default -1)
    noise.models        comma list: keyboard,swap,reduplication
    noise.variants_per_word  per-word variant cap for typo models (default 2)
    noise.max_extra_letters  length cap for mined reduplications
    paths.lexicon       word<TAB>sentiment lexicon
    paths.corpus        raw corpus for mining
    paths.dataset       contrastive pair JSONL
    paths.report        evaluation report JSON
    paths.extra_pairs   word<TAB>abbreviation pairs for scan-missing
    seed                global seed for stochastic commands
    jobs                worker count (output independent of it)
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .corruption import classify_corruption
from .dataset import (
    build_contrastive_dataset,
    load_lexicon,
    read_dataset,
    write_dataset,
)
from .embedding import load_vector_table, make_hash_provider
from .errors import OOVError, ParseError, ProtocolError
from .evaluation import evaluate_dataset, missing_corruption_scan, render_report
from .noise import (
    DATASET_NOISE_TYPES,
    NoiseSpec,
    REDUPLICATION,
    default_keyboard_layout,
    mine_reduplications,
    tokenize_corpus,
)
from .remote import BridgeClient, RemoteProvider
from .tokenization import VOCAB_FORMATS, make_segmenter

KNOWN_KEYS = {
    "tokenizer.format",
    "tokenizer.vocab",
    "tokenizer.merges",
    "tokenizer.unk",
    "tokenizer.marker",
    "tokenizer.byte_level",
    "tokenizer.mark_initial",
    "provider.kind",
    "provider.dim",
    "provider.seed",
    "provider.table",
    "provider.url",
    "provider.model",
    "provider.layer",
    "noise.models",
    "noise.variants_per_word",
    "noise.max_extra_letters",
    "paths.lexicon",
    "paths.corpus",
    "paths.dataset",
    "paths.report",
    "paths.extra_pairs",
    "seed",
    "jobs",
}


def load_config(path) -> dict[str, str]:
    """Parse `key = value` lines; # starts a comment, blank lines skipped."""
    config: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(path, lineno, "expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in KNOWN_KEYS:
                raise ParseError(path, lineno, f"unknown config key {key!r}")
            if key in config:
                raise ParseError(path, lineno, f"duplicate config key {key!r}")
            config[key] = value
    return config


def _as_bool(value: str, key: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ValueError(f"{key}: expected true/false, got {value!r}")


def _as_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{key}: expected an integer, got {value!r}") from None


def effective_config(args) -> dict[str, str]:
    """File config, then --set overrides, then dedicated flags."""
    config = load_config(args.config) if args.config else {}
    for item in args.set or ():
        if "=" not in item:
            raise ValueError(f"--set expects key=value, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ValueError(f"unknown config key {key!r}")
        config[key] = value
    if args.seed is not None:
        config["seed"] = str(args.seed)
    if args.jobs is not None:
        config["jobs"] = str(args.jobs)
    if getattr(args, "provider", None):
        config["provider.kind"] = args.provider
    if getattr(args, "remote_url", None):
        config["provider.url"] = args.remote_url
    if getattr(args, "model", None):
        config["provider.model"] = args.model
    return config


def _require(config: dict[str, str], key: str) -> str:
    if key not in config:
        raise ValueError(f"missing required config key {key!r}")
    return config[key]


def build_tokenizer(config: dict[str, str]):
    format = _require(config, "tokenizer.format")
    if format not in VOCAB_FORMATS:
        raise ValueError(f"unknown tokenizer format {format!r}")
    path = _require(config, "tokenizer.vocab")
    options: dict = {}
    if "tokenizer.unk" in config:
        options["unk_token"] = config["tokenizer.unk"]
    if format != "external-segmentation-map":
        if "tokenizer.marker" in config:
            options["continuation_marker"] = config["tokenizer.marker"]
    if format == "bpe-json-plus-merges":
        if "tokenizer.byte_level" in config:
            options["byte_level"] = _as_bool(config["tokenizer.byte_level"], "tokenizer.byte_level")
        if "tokenizer.mark_initial" in config:
            options["mark_initial"] = _as_bool(config["tokenizer.mark_initial"], "tokenizer.mark_initial")
        merges = _require(config, "tokenizer.merges")
        return make_segmenter(format, path, merges_path=merges, **options)
    return make_segmenter(format, path, **options)


def build_provider(config: dict[str, str]):
    kind = config.get("provider.kind", "hash")
    if kind == "hash":
        return make_hash_provider(
            dim=_as_int(config.get("provider.dim", "32"), "provider.dim"),
            seed=_as_int(config.get("provider.seed", "0"), "provider.seed"),
        )
    if kind == "table":
        return load_vector_table(_require(config, "provider.table"))
    if kind == "remote":
        client = BridgeClient(_require(config, "provider.url"))
        return RemoteProvider(
            client,
            _require(config, "provider.model"),
            layer=_as_int(config.get("provider.layer", "-1"), "provider.layer"),
        )
    raise ValueError(f"unknown provider kind {kind!r}")


def build_noise_specs(config: dict[str, str]) -> list[NoiseSpec]:
    models = [
        m.strip()
        for m in config.get("noise.models", "keyboard,swap,reduplication").split(",")
        if m.strip()
    ]
    for model in models:
        if model not in DATASET_NOISE_TYPES:
            raise ValueError(f"noise model {model!r} cannot build dataset pairs")
    variants = _as_int(config.get("noise.variants_per_word", "2"), "noise.variants_per_word")
    max_extra = config.get("noise.max_extra_letters")
    max_extra_int = _as_int(max_extra, "noise.max_extra_letters") if max_extra else None
    return [
        NoiseSpec(model, variants_per_word=variants, max_extra_letters=max_extra_int)
        for model in models
    ]


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _log(message: str) -> None:
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def cmd_tokenize(args, config) -> int:
    tokenizer = build_tokenizer(config)
    if args.words:
        words = list(args.words)
    elif args.words_file:
        with open(args.words_file, encoding="utf-8") as handle:
            words = [line.strip() for line in handle if line.strip()]
    else:
        words = [line.strip() for line in sys.stdin if line.strip()]
    lines = []
    for word in words:
        segmentation = tokenizer(word)
        lines.append(word + "\t" + " ".join(segmentation.tokens))
    _emit(args, "\n".join(lines) + ("\n" if lines else ""))
    return 0


def cmd_classify(args, config) -> int:
    tokenizer = build_tokenizer(config)
    dataset_path = args.dataset or config.get("paths.dataset")
    if not dataset_path:
        raise ValueError("classify needs --dataset or paths.dataset")
    pairs = read_dataset(dataset_path)
    unk = getattr(tokenizer, "unk_token", None)
    lines = []
    for pair in pairs:
        report = classify_corruption(
            tokenizer(pair.canonical), tokenizer(pair.noisy), unk_token=unk
        )
        record = pair.to_json_dict()
        record.update(report.to_json_dict())
        lines.append(json.dumps(record, sort_keys=True, ensure_ascii=False))
    _emit(args, "\n".join(lines) + ("\n" if lines else ""))
    _log(f"classified {len(pairs)} pairs")
    return 0


def cmd_build_dataset(args, config) -> int:
    if "seed" not in config:
        raise ValueError("build-dataset is stochastic: set seed in config or --seed")
    seed = _as_int(config["seed"], "seed")
    jobs = _as_int(config.get("jobs", "1"), "jobs")
    lexicon = load_lexicon(args.lexicon or _require(config, "paths.lexicon"))
    specs = build_noise_specs(config)
    corpus_tokens = None
    if any(spec.noise_type == REDUPLICATION for spec in specs):
        corpus_path = args.corpus or _require(config, "paths.corpus")
        with open(corpus_path, encoding="utf-8") as handle:
            corpus_tokens = list(tokenize_corpus(handle))
    pairs = build_contrastive_dataset(
        lexicon,
        specs,
        seed=seed,
        corpus_tokens=corpus_tokens,
        layout=default_keyboard_layout(),
        jobs=jobs,
    )
    out_path = args.out or config.get("paths.dataset")
    summary = json.dumps(
        {"command": "build-dataset", "seed": seed, "pairs": len(pairs), "out": out_path},
        sort_keys=True,
    )
    if out_path:
        write_dataset(pairs, out_path)
        print(summary)  # effective seed echoed on stdout
    else:
        for pair in pairs:
            sys.stdout.write(
                json.dumps(pair.to_json_dict(), sort_keys=True, ensure_ascii=False) + "\n"
            )
        _log(summary)
    return 0


def cmd_mine(args, config) -> int:
    lexicon = load_lexicon(args.lexicon or _require(config, "paths.lexicon"))
    corpus_path = args.corpus or _require(config, "paths.corpus")
    with open(corpus_path, encoding="utf-8") as handle:
        corpus_tokens = list(tokenize_corpus(handle))
    max_extra = config.get("noise.max_extra_letters")
    max_extra_int = _as_int(max_extra, "noise.max_extra_letters") if max_extra else None
    lines = []
    for entry in lexicon:
        for variant in mine_reduplications(entry.word, corpus_tokens, max_extra_int):
            lines.append(f"{entry.word}\t{variant}")
    _emit(args, "\n".join(lines) + ("\n" if lines else ""))
    _log(f"mined {len(lines)} reduplications for {len(lexicon)} words")
    return 0


def cmd_scan_missing(args, config) -> int:
    tokenizer = build_tokenizer(config)
    lexicon = load_lexicon(args.lexicon or _require(config, "paths.lexicon"))
    jobs = _as_int(config.get("jobs", "1"), "jobs")
    extra_pairs = []
    extra_path = args.extra_pairs or config.get("paths.extra_pairs")
    if extra_path:
        with open(extra_path, encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line:
                    continue
                if "\t" not in line:
                    raise ParseError(extra_path, lineno, "expected word<TAB>abbreviation")
                word, abbrev = line.split("\t", 1)
                extra_pairs.append((word.strip(), abbrev.strip()))
    scan = missing_corruption_scan(lexicon, tokenizer, extra_pairs or None, jobs=jobs)
    document = {
        "proportion": scan.proportion,
        "candidate_total": scan.candidate_total,
        "missing": [list(pair) for pair in scan.missing_pairs],
        "extra": [list(item) for item in scan.extra_results],
    }
    _emit(args, json.dumps(document, indent=2, sort_keys=True) + "\n")
    _log(
        f"scanned {scan.candidate_total} candidates, "
        f"{len(scan.missing_pairs)} missing ({scan.proportion:.4%})"
    )
    return 0


def cmd_evaluate(args, config) -> int:
    tokenizer = build_tokenizer(config)
    provider = build_provider(config)
    dataset_path = args.dataset or config.get("paths.dataset")
    if not dataset_path:
        raise ValueError("evaluate needs --dataset or paths.dataset")
    pairs = read_dataset(dataset_path)
    seed = _as_int(config["seed"], "seed") if "seed" in config else 0
    jobs = _as_int(config.get("jobs", "1"), "jobs")
    report = evaluate_dataset(
        pairs, tokenizer, provider, probe_seed=seed, jobs=jobs, seed=seed
    )
    out_path = args.out or config.get("paths.report")
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(report.to_json() + "\n")
        _log(f"wrote report to {out_path}")
    else:
        sys.stdout.write(report.to_json() + "\n")
    if args.curve_csv:
        with open(args.curve_csv, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(report.multiplicity_csv())
        _log(f"wrote multiplicity curve to {args.curve_csv}")
    return 0


def cmd_report(args, config) -> int:
    report_path = args.report or config.get("paths.report")
    if report_path:
        with open(report_path, encoding="utf-8") as handle:
            document = json.load(handle)
    else:
        document = json.load(sys.stdin)
    _emit(args, render_report(document))
    return 0


# ---------------------------------------------------------------------------
# wiring

COMMANDS = {
    "tokenize": cmd_tokenize,
    "classify": cmd_classify,
    "build-dataset": cmd_build_dataset,
    "mine": cmd_mine,
    "scan-missing": cmd_scan_missing,
    "evaluate": cmd_evaluate,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key-value config file")
    common.add_argument(
        "--set", action="append", metavar="KEY=VALUE", help="override one config key"
    )
    common.add_argument("--seed", type=int, help="seed for stochastic steps")
    common.add_argument("--jobs", type=int, help="worker count")
    common.add_argument("--out", help="write data output here instead of stdout")
    common.add_argument("--provider", choices=("hash", "table", "remote"))
    common.add_argument("--remote-url", help="bridge base url for --provider remote")
    common.add_argument("--model", help="bridge model name for --provider remote")

    parser = argparse.ArgumentParser(
        prog="segprobe",
        description="contrastive segmentation-corruption probing of word embeddings",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", parents=[common], help="print segmentations")
    p.add_argument("words", nargs="*", help="words to segment (stdin if empty)")
    p.add_argument("--words-file", help="read words from this file")

    p = sub.add_parser("classify", parents=[common], help="classify dataset pairs")
    p.add_argument("--dataset", help="contrastive pair JSONL")

    p = sub.add_parser("build-dataset", parents=[common], help="build contrastive pairs")
    p.add_argument("--lexicon", help="word<TAB>sentiment lexicon")
    p.add_argument("--corpus", help="raw corpus for reduplication mining")

    p = sub.add_parser("mine", parents=[common], help="mine reduplications to TSV")
    p.add_argument("--lexicon")
    p.add_argument("--corpus")

    p = sub.add_parser("scan-missing", parents=[common], help="abbreviation missing-corruption scan")
    p.add_argument("--lexicon")
    p.add_argument("--extra-pairs", help="word<TAB>abbreviation pairs to classify alongside")

    p = sub.add_parser("evaluate", parents=[common], help="produce the evaluation report JSON")
    p.add_argument("--dataset")
    p.add_argument("--curve-csv", help="also write the multiplicity curve as CSV")

    p = sub.add_parser("report", parents=[common], help="render text tables from a report JSON")
    p.add_argument("report", nargs="?", help="report JSON path (stdin if omitted)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = effective_config(args)
        return COMMANDS[args.command](args, config)
    except (ParseError, OOVError, ProtocolError, ValueError, OSError) as exc:
        error_line = json.dumps({"error": str(exc), "kind": type(exc).__name__})
        print(error_line, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
