"""Corpus ingestion, multi-tokenizer comparison runs, and report emission."""

from __future__ import annotations

import csv
import datetime
import enum
import hashlib
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, BinaryIO, Callable, Sequence

from . import __version__
from .core import NormalizerKind, ToklabError, normalize
from .engine import TokenizerModel, encode, token_breakdown
from .metrics import (
    Histogram,
    NslInput,
    ThroughputSample,
    nsl,
    round_half_even,
    stats_from_counts,
    throughput,
    vocab_coverage,
)


class HarnessError(ToklabError):
    pass


class IoFailure(HarnessError):
    pass


class Utf8Error(HarnessError):
    """Source bytes are not valid UTF-8; carries the offending byte offset."""

    def __init__(self, offset: int):
        super().__init__(f"invalid UTF-8 at byte offset {offset}")
        self.offset = offset


class EmptyCorpus(HarnessError):
    pass


class ComparisonError(HarnessError):
    """Encoding failed for one model on one record."""

    def __init__(self, model_name: str, record_id: str, cause: Exception):
        super().__init__(f"tokenizer {model_name!r} failed on record {record_id!r}: {cause}")
        self.model_name = model_name
        self.record_id = record_id


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    text: str


@dataclass(frozen=True)
class Corpus:
    records: tuple[CorpusRecord, ...]
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen: set[str] = set()
        for record in self.records:
            if record.id in seen:
                raise ValueError(f"duplicate record id {record.id!r}")
            seen.add(record.id)

    def __len__(self) -> int:
        return len(self.records)

    def content_hash(self) -> str:
        digest = hashlib.sha256()
        for record in self.records:
            digest.update(record.id.encode("utf-8"))
            digest.update(b"\x00")
            digest.update(record.text.encode("utf-8"))
            digest.update(b"\x01")
        return digest.hexdigest()


def corpus_from_texts(texts: Sequence[str], source: str = "") -> Corpus:
    """Wrap plain strings as a corpus with zero-padded ordinal ids."""
    records = tuple(CorpusRecord(f"{i:06d}", text) for i, text in enumerate(texts))
    return Corpus(records=records, source=source)


class CorpusFormat(enum.Enum):
    PLAIN_TEXT = "plain_text"
    JSONL = "jsonl"


def ingest(
    source: str | Path | BinaryIO,
    format: CorpusFormat = CorpusFormat.PLAIN_TEXT,
) -> Corpus:
    """Read a corpus: one record per non-empty line (plain_text) or per JSONL object."""
    if isinstance(source, (str, Path)):
        descriptor = str(source)
        try:
            data = Path(source).read_bytes()
        except OSError as exc:
            raise IoFailure(f"cannot read corpus: {exc}") from exc
    else:
        descriptor = getattr(source, "name", "<stream>")
        data = source.read()
        if isinstance(data, str):
            data = data.encode("utf-8")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise Utf8Error(exc.start) from exc

    records: list[CorpusRecord] = []
    if format is CorpusFormat.PLAIN_TEXT:
        for line in text.splitlines():
            if line == "":
                continue
            records.append(CorpusRecord(f"{len(records):06d}", line))
    else:
        for line_number, line in enumerate(text.splitlines(), start=1):
            if line.strip() == "":
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IoFailure(f"line {line_number}: malformed JSON record: {exc}") from exc
            if not isinstance(payload, dict) or not isinstance(payload.get("text"), str):
                raise IoFailure(f'line {line_number}: record must be an object with a "text" string')
            record_id = payload.get("id")
            if record_id is None:
                record_id = f"{len(records):06d}"
            records.append(CorpusRecord(str(record_id), payload["text"]))

    if not records:
        raise EmptyCorpus(f"no records in {descriptor}")
    try:
        return Corpus(records=tuple(records), source=descriptor)
    except ValueError as exc:
        raise IoFailure(str(exc)) from exc


def bundled_sample_corpus() -> Corpus:
    """The packaged Assamese sample sentence, for smoke tests and demos."""
    text = resources.files("toklab").joinpath("data/sample_assamese.txt").read_text("utf-8")
    return corpus_from_texts([line for line in text.splitlines() if line], source="bundled:sample_assamese")


class CodepointBaseline:
    """Pseudo-tokenizer emitting one token per codepoint of the NFC text."""

    name = "codepoints"

    def lengths(self, corpus: Corpus) -> list[int]:
        return [len(normalize(record.text, NormalizerKind.NFC)) for record in corpus.records]


CODEPOINTS = CodepointBaseline()


@dataclass(frozen=True)
class ReportRow:
    name: str
    vocab_size: int
    avg_nsl: Fraction
    total_tokens: int
    coverage: Fraction
    throughput: ThroughputSample
    length_histogram: Histogram

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "vocab_size": self.vocab_size,
            "avg_nsl": float(self.avg_nsl),
            "avg_nsl_display": round_half_even(self.avg_nsl),
            "avg_nsl_exact": f"{self.avg_nsl.numerator}/{self.avg_nsl.denominator}",
            "total_tokens": self.total_tokens,
            "coverage": float(self.coverage),
            "throughput": {
                "bytes_processed": self.throughput.bytes_processed,
                "tokens_emitted": self.throughput.tokens_emitted,
                "wall_time": self.throughput.wall_time,
                "bytes_per_sec": self.throughput.bytes_per_sec,
                "tokens_per_sec": self.throughput.tokens_per_sec,
            },
            "length_histogram": self.length_histogram.as_dict(),
        }


@dataclass(frozen=True)
class ComparisonReport:
    baseline_name: str
    rows: tuple[ReportRow, ...]
    timestamp: str
    corpus_hash: str
    record_count: int
    tool_version: str = __version__
    breakdowns: dict[str, dict[str, list[dict[str, Any]]]] | None = None

    def as_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "baseline": self.baseline_name,
            "metadata": {
                "timestamp": self.timestamp,
                "corpus_hash": self.corpus_hash,
                "record_count": self.record_count,
                "tool_version": self.tool_version,
            },
            "rows": [row.as_dict() for row in self.rows],
        }
        if self.breakdowns is not None:
            payload["breakdowns"] = self.breakdowns
        return payload


class _CountingClock:
    """Deterministic clock for fixed-clock report runs; ticks once per call."""

    def __init__(self):
        self._now = 0.0

    def __call__(self) -> float:
        self._now += 1.0
        return self._now


FIXED_CLOCK_TIMESTAMP = "1970-01-01T00:00:00+00:00"


def _pool_map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_comparison(
    models: Sequence[TokenizerModel],
    baseline: TokenizerModel | CodepointBaseline,
    corpus: Corpus,
    *,
    workers: int = 1,
    repetitions: int = 1,
    include_breakdowns: bool = False,
    fixed_clock: bool = False,
) -> ComparisonReport:
    """Encode every record under every model and assemble per-model metric rows.

    Rows are sorted by average NSL ascending (lower is better). Records are
    distributed over `workers` threads; the reduction runs in record order, so
    any worker count produces the same report. With `fixed_clock`, timing
    fields come from a deterministic counter and the timestamp is pinned, which
    makes the emitted report byte-reproducible.
    """
    if not models:
        raise ValueError("need at least one tokenizer to compare")
    if not corpus.records:
        raise EmptyCorpus("cannot compare over an empty corpus")

    clock = _CountingClock() if fixed_clock else None

    def counts_for(model: TokenizerModel) -> list[int]:
        def one(record: CorpusRecord) -> int:
            try:
                return len(encode(model, record.text))
            except ToklabError as exc:
                raise ComparisonError(model.name, record.id, exc) from exc

        return _pool_map(one, corpus.records, workers)

    if isinstance(baseline, CodepointBaseline):
        baseline_lengths = baseline.lengths(corpus)
    else:
        baseline_lengths = counts_for(baseline)

    rows = []
    breakdowns: dict[str, dict[str, list[dict[str, Any]]]] = {}
    for model in models:
        counts = counts_for(model)
        stats = stats_from_counts(counts)
        row = ReportRow(
            name=model.name,
            vocab_size=model.vocab_size,
            avg_nsl=nsl(NslInput(tuple(counts), tuple(baseline_lengths))),
            total_tokens=stats.total_tokens,
            coverage=vocab_coverage(model, corpus),
            throughput=throughput(
                model,
                corpus,
                repetitions=repetitions,
                **({"clock": clock} if clock is not None else {}),
            ),
            length_histogram=stats.histogram,
        )
        rows.append(row)
        if include_breakdowns:
            for record in corpus.records:
                breakdown = token_breakdown(model, record.text)
                breakdowns.setdefault(record.id, {})[model.name] = [
                    {"display": p.display, "id": p.id, "byte_span": [p.start, p.end]}
                    for p in breakdown.items
                ]

    rows.sort(key=lambda row: (row.avg_nsl, row.name))
    return ComparisonReport(
        baseline_name=baseline.name,
        rows=tuple(rows),
        timestamp=FIXED_CLOCK_TIMESTAMP if fixed_clock else _utc_now(),
        corpus_hash=corpus.content_hash(),
        record_count=len(corpus.records),
        breakdowns=breakdowns if include_breakdowns else None,
    )


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


class ReportFormat(enum.Enum):
    MARKDOWN = "md"
    CSV = "csv"
    JSON = "json"


_CSV_COLUMNS = [
    "name",
    "vocab_size",
    "avg_nsl",
    "total_tokens",
    "coverage",
    "tokens_per_sec",
    "bytes_per_sec",
]


def emit_report(report: ComparisonReport, format: ReportFormat = ReportFormat.MARKDOWN) -> str:
    """Render a report as a markdown table, RFC-4180 CSV, or the full JSON."""
    if format is ReportFormat.JSON:
        return json.dumps(report.as_dict(), ensure_ascii=False, indent=2) + "\n"

    if format is ReportFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for row in report.rows:
            writer.writerow(
                [
                    row.name,
                    row.vocab_size,
                    repr(float(row.avg_nsl)),
                    row.total_tokens,
                    repr(float(row.coverage)),
                    repr(row.throughput.tokens_per_sec),
                    repr(row.throughput.bytes_per_sec),
                ]
            )
        return buffer.getvalue()

    lines = [
        f"Baseline: {report.baseline_name} | records: {report.record_count} | "
        f"corpus sha256: {report.corpus_hash[:12]}",
        "",
        "| Name | Vocab Size | Avg NSL | Number of Tokens | Coverage | Tokens/s | Bytes/s |",
        "|------|-----------:|--------:|-----------------:|---------:|---------:|--------:|",
    ]
    for row in report.rows:
        lines.append(
            f"| {row.name} | {row.vocab_size} | {round_half_even(row.avg_nsl)} "
            f"| {row.total_tokens} | {round_half_even(row.coverage)} "
            f"| {row.throughput.tokens_per_sec:.0f} | {row.throughput.bytes_per_sec:.0f} |"
        )
    return "\n".join(lines) + "\n"
