"""Quantitative measures: NSL, token statistics, coverage, throughput, and the
standard classification metrics.
"""

from __future__ import annotations

import math
import time
import unicodedata
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Sequence

from .core import Algorithm, ByteFallbackMode, ToklabError, byte_display, normalize
from .engine import TokenizerModel, encode

if TYPE_CHECKING:
    from .harness import Corpus


class MetricsError(ToklabError):
    pass


class ZeroBaseline(MetricsError):
    """The baseline token counts sum to zero, so the ratio is undefined."""


class UndefinedMetric(MetricsError):
    """A classification metric's denominator is zero."""


class LengthMismatch(MetricsError):
    pass


class EmptySet(MetricsError):
    pass


@dataclass(frozen=True)
class NslInput:
    """Per-example token counts under the measured and baseline tokenizers."""

    lengths_lambda: tuple[int, ...]
    lengths_beta: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths_lambda", tuple(self.lengths_lambda))
        object.__setattr__(self, "lengths_beta", tuple(self.lengths_beta))
        if len(self.lengths_lambda) != len(self.lengths_beta):
            raise ValueError("length vectors must have the same example count")
        if not self.lengths_lambda:
            raise ValueError("need at least one example")
        if any(n < 0 for n in self.lengths_lambda) or any(n < 0 for n in self.lengths_beta):
            raise ValueError("token counts must be non-negative")

    @property
    def example_count(self) -> int:
        return len(self.lengths_lambda)


def nsl(data: NslInput) -> Fraction:
    """Normalized Sequence Length: total measured length over total baseline length.

    Both totals are summed over all examples first and divided once; this is
    not the mean of per-example ratios, which would weight short examples the
    same as long ones.
    """
    denominator = sum(data.lengths_beta)
    if denominator == 0:
        raise ZeroBaseline("baseline token counts sum to zero")
    return Fraction(sum(data.lengths_lambda), denominator)


def round_half_even(value: Fraction | int, places: int = 2) -> str:
    """Format an exact ratio at fixed precision, rounding half to even."""
    fraction = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = 60
        decimal_value = Decimal(fraction.numerator) / Decimal(fraction.denominator)
        return str(decimal_value.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")


def precision(c: ConfusionCounts) -> Fraction:
    if c.tp + c.fp == 0:
        raise UndefinedMetric("precision is undefined: TP + FP = 0")
    return Fraction(c.tp, c.tp + c.fp)


def recall(c: ConfusionCounts) -> Fraction:
    if c.tp + c.fn == 0:
        raise UndefinedMetric("recall is undefined: TP + FN = 0")
    return Fraction(c.tp, c.tp + c.fn)


def f1(c: ConfusionCounts) -> Fraction:
    # count form 2TP / (2TP + FP + FN); avoids compounding rounding from
    # computing precision and recall first
    denominator = 2 * c.tp + c.fp + c.fn
    if denominator == 0:
        raise UndefinedMetric("F1 is undefined: 2TP + FP + FN = 0")
    return Fraction(2 * c.tp, denominator)


def accuracy(c: ConfusionCounts) -> Fraction:
    total = c.tp + c.tn + c.fp + c.fn
    if total == 0:
        raise UndefinedMetric("accuracy is undefined: no observations")
    return Fraction(c.tp + c.tn, total)


def exact_match(predictions: Sequence[str], references: Sequence[str]) -> Fraction:
    """Fraction of predictions identical to their reference after NFC."""
    if len(predictions) != len(references):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(references)} references"
        )
    if not predictions:
        raise EmptySet("cannot score an empty prediction set")
    matches = sum(
        unicodedata.normalize("NFC", p) == unicodedata.normalize("NFC", r)
        for p, r in zip(predictions, references)
    )
    return Fraction(matches, len(predictions))


@dataclass(frozen=True)
class Histogram:
    """Sequence-length distribution; bucket i covers [i*width, (i+1)*width)."""

    bucket_width: int
    counts: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"bucket_width": self.bucket_width, "counts": list(self.counts)}


@dataclass(frozen=True)
class TokenStats:
    total_tokens: int
    per_example_counts: tuple[int, ...]
    mean: Fraction
    median: Fraction
    histogram: Histogram


def length_histogram(counts: Sequence[int], buckets: int = 20) -> Histogram:
    longest = max(counts)
    width = max(1, math.ceil(longest / buckets))
    tallies = [0] * (longest // width + 1)
    for count in counts:
        tallies[count // width] += 1
    return Histogram(bucket_width=width, counts=tuple(tallies))


def stats_from_counts(counts: Sequence[int]) -> TokenStats:
    if not counts:
        raise ValueError("need at least one example")
    ordered = sorted(counts)
    n = len(ordered)
    if n % 2:
        median = Fraction(ordered[n // 2])
    else:
        median = Fraction(ordered[n // 2 - 1] + ordered[n // 2], 2)
    return TokenStats(
        total_tokens=sum(counts),
        per_example_counts=tuple(counts),
        mean=Fraction(sum(counts), n),
        median=median,
        histogram=length_histogram(counts),
    )


def token_stats(model: TokenizerModel, corpus: "Corpus") -> TokenStats:
    """Per-example and aggregate token counts; prepend specials are counted."""
    if not corpus.records:
        raise ValueError("corpus is empty")
    return stats_from_counts([len(encode(model, record.text)) for record in corpus.records])


def _codepoint_covered(model: TokenizerModel, ch: str) -> bool:
    if model.fallback is ByteFallbackMode.MAPPED:
        unit = "".join(byte_display(b) for b in ch.encode("utf-8"))
    else:
        unit = ch
    if unit in model.vocab:
        return True
    return model.algorithm is Algorithm.WORDPIECE_FREQ and ("##" + unit) in model.vocab


def vocab_coverage(model: TokenizerModel, corpus: "Corpus") -> Fraction:
    """Fraction of corpus codepoints representable without byte fallback or unk.

    A codepoint counts as covered when the vocabulary holds it whole: the
    character itself for character-level tokenizers, or the mapped rendering of
    all its UTF-8 bytes for byte-native ones.
    """
    if not corpus.records:
        raise ValueError("corpus is empty")
    covered = 0
    total = 0
    seen: dict[str, bool] = {}
    for record in corpus.records:
        for ch in normalize(record.text, model.normalizer):
            total += 1
            hit = seen.get(ch)
            if hit is None:
                hit = seen[ch] = _codepoint_covered(model, ch)
            covered += hit
    if total == 0:
        return Fraction(1)
    return Fraction(covered, total)


@dataclass(frozen=True)
class ThroughputSample:
    bytes_processed: int
    tokens_emitted: int
    wall_time: float

    def __post_init__(self):
        if self.wall_time <= 0:
            raise ValueError("wall_time must be positive")

    @property
    def bytes_per_sec(self) -> float:
        return self.bytes_processed / self.wall_time

    @property
    def tokens_per_sec(self) -> float:
        return self.tokens_emitted / self.wall_time


def throughput(
    model: TokenizerModel,
    corpus: "Corpus",
    repetitions: int = 1,
    clock: Callable[[], float] = time.perf_counter,
) -> ThroughputSample:
    """Wall-time rate over full corpus passes; one warm-up pass is excluded."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    texts = [record.text for record in corpus.records]
    for text in texts:  # warm-up
        encode(model, text)
    tokens = 0
    start = clock()
    for _ in range(repetitions):
        for text in texts:
            tokens += len(encode(model, text))
    elapsed = clock() - start
    return ThroughputSample(
        bytes_processed=repetitions * sum(len(t.encode("utf-8")) for t in texts),
        tokens_emitted=tokens,
        wall_time=max(elapsed, 1e-9),
    )
