"""Command-line interface: train, encode, compare, serve.

Exit codes: 0 success, 1 runtime failure, 2 usage error. Diagnostics go to
stderr; machine-readable output alone goes to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .core import Algorithm, ByteFallbackMode, NormalizerKind, PretokenizerKind, ToklabError
from .engine import encode, token_breakdown
from .harness import (
    CODEPOINTS,
    CorpusFormat,
    ReportFormat,
    emit_report,
    ingest,
    run_comparison,
)
from .tokfile import load, save
from .trainers import TrainConfig, train_bpe, train_wordpiece


def _resolve_workers(flag_value: int | None) -> int:
    if flag_value is not None:
        return max(1, flag_value)
    env_value = os.environ.get("TOKLAB_WORKERS")
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            print(f"toklab: ignoring invalid TOKLAB_WORKERS={env_value!r}", file=sys.stderr)
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toklab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train a tokenizer from a text corpus")
    train.add_argument("--algo", choices=["bpe", "wordpiece_freq"], default="bpe")
    train.add_argument("--vocab-size", type=int, required=True)
    train.add_argument("--input", required=True, help="training corpus file")
    train.add_argument("--output", required=True, help="tokenizer file to write")
    train.add_argument("--corpus-format", choices=["plain_text", "jsonl"], default=None)
    train.add_argument("--min-pair-count", type=int, default=2)
    train.add_argument("--normalizer", choices=["none", "nfc"], default="nfc")
    train.add_argument(
        "--pretokenizer", choices=["none", "whitespace", "byte_level"], default="whitespace"
    )
    train.add_argument("--fallback", choices=["none", "mapped", "hex"], default="none")
    train.add_argument("--unk-token", default="<unk>")
    train.add_argument("--name", default=None, help="model name (default: output stem)")

    enc = sub.add_parser("encode", help="encode text with a tokenizer file")
    enc.add_argument("--tokenizer", required=True)
    source = enc.add_mutually_exclusive_group(required=True)
    source.add_argument("--text")
    source.add_argument("--stdin", action="store_true")
    mode = enc.add_mutually_exclusive_group()
    mode.add_argument("--ids", action="store_true", help="print space-separated ids")
    mode.add_argument("--breakdown", action="store_true", help="print the breakdown as JSON")

    cmp_parser = sub.add_parser("compare", help="benchmark tokenizers over a corpus")
    cmp_parser.add_argument(
        "--tokenizer", action="append", required=True, help="tokenizer file (repeatable)"
    )
    cmp_parser.add_argument("--corpus", required=True)
    cmp_parser.add_argument("--corpus-format", choices=["plain_text", "jsonl"], default=None)
    cmp_parser.add_argument(
        "--baseline",
        default="codepoints",
        help='name of a provided tokenizer, or "codepoints" (default)',
    )
    cmp_parser.add_argument("--format", choices=["md", "csv", "json"], default="md")
    cmp_parser.add_argument("--output", default=None, help="write the report here instead of stdout")
    cmp_parser.add_argument("--workers", type=int, default=None)
    cmp_parser.add_argument("--repetitions", type=int, default=1, help="throughput passes")
    cmp_parser.add_argument("--breakdowns", action="store_true", help="include per-record breakdowns (json)")
    cmp_parser.add_argument(
        "--fixed-clock",
        action="store_true",
        help="deterministic timing and timestamp, for reproducible reports",
    )

    serve = sub.add_parser("serve", help="serve the comparison API and web UI")
    serve.add_argument("--tokenizer-dir", required=True)
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--static-dir", default=None, help="directory of built web UI assets")
    serve.add_argument("--workers", type=int, default=None)
    serve.add_argument("--no-cors", action="store_true")

    return parser


def _infer_corpus_format(path: str, flag: str | None) -> CorpusFormat:
    if flag is not None:
        return CorpusFormat(flag)
    return CorpusFormat.JSONL if path.endswith(".jsonl") else CorpusFormat.PLAIN_TEXT


def cmd_train(args: argparse.Namespace) -> int:
    corpus = ingest(args.input, _infer_corpus_format(args.input, args.corpus_format))
    algorithm = Algorithm(args.algo)
    config = TrainConfig(
        target_vocab_size=args.vocab_size,
        min_pair_count=args.min_pair_count,
        algorithm=algorithm,
        pretokenizer=PretokenizerKind(args.pretokenizer),
        normalizer=NormalizerKind(args.normalizer),
        fallback=ByteFallbackMode(args.fallback),
        unk_token=args.unk_token,
    )
    name = args.name or Path(args.output).stem
    if algorithm is Algorithm.BPE:
        model = train_bpe(corpus, config, name=name)
    else:
        model = train_wordpiece(corpus, config, name=name)
    save(model, args.output)
    print(
        f"trained {model.name}: vocab size {model.vocab_size}, {len(model.merges)} merges",
        file=sys.stderr,
    )
    return 0


def cmd_encode(args: argparse.Namespace) -> int:
    model = load(args.tokenizer)
    text = args.text if args.text is not None else sys.stdin.read()
    if args.ids:
        print(" ".join(str(i) for i in encode(model, text)))
        return 0
    breakdown = token_breakdown(model, text)
    if args.breakdown:
        payload = {
            "source_text": breakdown.source_text,
            "items": [
                {"display": p.display, "id": p.id, "byte_span": [p.start, p.end]}
                for p in breakdown.items
            ],
        }
        print(json.dumps(payload, ensure_ascii=False))
        return 0
    for piece in breakdown.items:
        print(f"{piece.display}\t{piece.id}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    models = []
    names = set()
    for path in args.tokenizer:
        model = load(path)
        if model.name in names:
            print(f"toklab: duplicate tokenizer name {model.name!r}", file=sys.stderr)
            return 1
        names.add(model.name)
        models.append(model)

    if args.baseline == "codepoints":
        baseline = CODEPOINTS
    else:
        by_name = {m.name: m for m in models}
        if args.baseline not in by_name:
            print(
                f"toklab: --baseline must be \"codepoints\" or one of: "
                f"{', '.join(sorted(by_name))}",
                file=sys.stderr,
            )
            return 1
        baseline = by_name[args.baseline]

    corpus = ingest(args.corpus, _infer_corpus_format(args.corpus, args.corpus_format))
    report = run_comparison(
        models,
        baseline,
        corpus,
        workers=_resolve_workers(args.workers),
        repetitions=args.repetitions,
        include_breakdowns=args.breakdowns,
        fixed_clock=args.fixed_clock,
    )
    document = emit_report(report, ReportFormat(args.format))
    if args.output:
        Path(args.output).write_text(document, encoding="utf-8")
    else:
        sys.stdout.write(document)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import TokenizerRegistry, create_app

    registry = TokenizerRegistry.from_directory(args.tokenizer_dir)
    app = create_app(
        registry,
        static_dir=args.static_dir,
        cors=not args.no_cors,
        workers=_resolve_workers(args.workers),
    )
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"toklab: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        # uvicorn exits 3 on startup failure (such as a busy port)
        if exc.code not in (0, None):
            print(f"toklab: server failed to start on {args.host}:{args.port}", file=sys.stderr)
            return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "train": cmd_train,
        "encode": cmd_encode,
        "compare": cmd_compare,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except ToklabError as exc:
        print(f"toklab: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"toklab: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
