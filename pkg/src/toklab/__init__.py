"""toklab: train, inspect, and benchmark subword tokenizers."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    Algorithm,
    ByteFallbackMode,
    Merge,
    NormalizerKind,
    PretokenizerKind,
    SpecialToken,
    ToklabError,
    Vocab,
    byte_display,
    byte_hex_token,
    normalize,
    pretokenize,
)
from .engine import TokenBreakdown, TokenizerModel, decode, encode, token_breakdown  # noqa: E402
from .harness import (  # noqa: E402
    CODEPOINTS,
    ComparisonReport,
    Corpus,
    CorpusFormat,
    ReportFormat,
    emit_report,
    ingest,
    run_comparison,
)
from .metrics import ConfusionCounts, NslInput, nsl  # noqa: E402
from .tokfile import load, save  # noqa: E402
from .trainers import TrainConfig, train_bpe, train_wordpiece  # noqa: E402

__all__ = [
    "Algorithm",
    "ByteFallbackMode",
    "CODEPOINTS",
    "ComparisonReport",
    "ConfusionCounts",
    "Corpus",
    "CorpusFormat",
    "Merge",
    "NormalizerKind",
    "NslInput",
    "PretokenizerKind",
    "ReportFormat",
    "SpecialToken",
    "TokenBreakdown",
    "TokenizerModel",
    "ToklabError",
    "TrainConfig",
    "Vocab",
    "byte_display",
    "byte_hex_token",
    "decode",
    "emit_report",
    "encode",
    "ingest",
    "load",
    "normalize",
    "nsl",
    "pretokenize",
    "run_comparison",
    "save",
    "token_breakdown",
    "train_bpe",
    "train_wordpiece",
]
