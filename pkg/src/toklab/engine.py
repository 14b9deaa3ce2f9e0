"""Encoding, decoding, and token breakdowns for a trained or loaded tokenizer."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .core import (
    Algorithm,
    ByteFallbackMode,
    Merge,
    NormalizerKind,
    Pretoken,
    PretokenizerKind,
    SpecialToken,
    TokenId,
    ToklabError,
    Vocab,
    byte_display,
    byte_from_display,
    byte_from_hex_token,
    byte_hex_token,
    normalize,
    pretokenize,
)


class EngineError(ToklabError):
    pass


class UnrepresentableInput(EngineError):
    """Input contains a unit the model cannot express (no fallback, no unk)."""


class UnknownId(EngineError):
    """A token id does not resolve in the model's vocabulary or special tokens."""


class InvalidByteSequenceWarning(UserWarning):
    """Decoded byte stream was not valid UTF-8; replacement characters emitted."""


_WORDPIECE_PREFIX = "##"


class Piece(NamedTuple):
    """One output token: display string, id, byte span in the normalized input."""

    display: str
    id: TokenId
    start: int
    end: int


@dataclass(frozen=True)
class TokenBreakdown:
    """Ordered token/id/span rows for one input text."""

    items: tuple[Piece, ...]
    source_text: str

    @property
    def ids(self) -> list[TokenId]:
        return [piece.id for piece in self.items]


@dataclass(frozen=True)
class TokenizerModel:
    """Immutable tokenizer: vocabulary, merge rules, and pipeline configuration.

    With `fallback=MAPPED` the model is byte-native: every vocabulary token is a
    string over the mapped byte alphabet and all input is expanded to mapped
    bytes before segmentation. With HEX, characters missing from the vocabulary
    become "<0xHH>" placeholder tokens; with NONE they become the unk token.
    """

    name: str
    algorithm: Algorithm
    vocab: Vocab
    merges: tuple[Merge, ...] = ()
    normalizer: NormalizerKind = NormalizerKind.NFC
    pretokenizer: PretokenizerKind = PretokenizerKind.WHITESPACE
    fallback: ByteFallbackMode = ByteFallbackMode.NONE
    special_tokens: tuple[SpecialToken, ...] = ()
    unk_token: str | None = None

    def __post_init__(self):
        seen_special_ids: set[int] = set()
        for special in self.special_tokens:
            if self.vocab.has_id(special.id):
                raise ValueError(
                    f"special token {special.token!r} id {special.id} collides "
                    f"with vocabulary token {self.vocab.token_of(special.id)!r}"
                )
            if special.id in seen_special_ids:
                raise ValueError(f"duplicate special token id {special.id}")
            seen_special_ids.add(special.id)
        if self.unk_token is not None and self.unk_token not in self.vocab:
            raise ValueError(f"unk token {self.unk_token!r} is not in the vocabulary")

    @property
    def vocab_size(self) -> int:
        """Reported vocabulary size: vocabulary entries plus special tokens."""
        return self.vocab.size + len(self.special_tokens)

    @cached_property
    def _prepend_specials(self) -> tuple[SpecialToken, ...]:
        return tuple(sp for sp in self.special_tokens if sp.prepend)

    @cached_property
    def _special_ids(self) -> dict[int, SpecialToken]:
        return {sp.id: sp for sp in self.special_tokens}

    @cached_property
    def _wordpiece_max_len(self) -> int:
        longest = 0
        for token in self.vocab.tokens():
            if token.startswith(_WORDPIECE_PREFIX) and len(token) > 2:
                longest = max(longest, len(token) - 2)
            else:
                longest = max(longest, len(token))
        return longest


def _char_byte_len(ch: str) -> int:
    return len(ch.encode("utf-8"))


def _replay_merges(
    merges: tuple[Merge, ...], symbols: list[tuple[str, int]]
) -> list[tuple[str, int]]:
    """Apply merges in rank order to (symbol, byte_length) pairs."""
    if len(symbols) < 2:
        return symbols
    present = {sym for sym, _ in symbols}
    for merge in merges:
        if merge.left not in present or merge.right not in present:
            continue
        out: list[tuple[str, int]] = []
        i = 0
        applied = False
        while i < len(symbols):
            if (
                i + 1 < len(symbols)
                and symbols[i][0] == merge.left
                and symbols[i + 1][0] == merge.right
            ):
                out.append((merge.merged, symbols[i][1] + symbols[i + 1][1]))
                i += 2
                applied = True
            else:
                out.append(symbols[i])
                i += 1
        if applied:
            symbols = out
            present = {sym for sym, _ in symbols}
            if len(symbols) < 2:
                break
    return symbols


def _lookup(model: TokenizerModel, symbol: str) -> int:
    token_id = model.vocab.get(symbol)
    if token_id is None:
        raise UnrepresentableInput(
            f"symbol {symbol!r} is not in the vocabulary of tokenizer {model.name!r}"
        )
    return token_id


def _hex_pieces(model: TokenizerModel, ch: str, offset: int) -> list[Piece]:
    pieces = []
    for b in ch.encode("utf-8"):
        token = byte_hex_token(b)
        pieces.append(Piece(token, _lookup(model, token), offset, offset + 1))
        offset += 1
    return pieces


def _unk_piece(model: TokenizerModel, start: int, end: int) -> Piece:
    if model.unk_token is None:
        raise UnrepresentableInput(
            f"tokenizer {model.name!r} has no byte fallback and no unk token"
        )
    return Piece(model.unk_token, model.vocab.id_of(model.unk_token), start, end)


def _bpe_mapped_pieces(model: TokenizerModel, pre: Pretoken) -> list[Piece]:
    symbols = [(byte_display(b), 1) for b in pre.text.encode("utf-8")]
    symbols = _replay_merges(model.merges, symbols)
    pieces = []
    offset = pre.start
    for symbol, byte_len in symbols:
        pieces.append(Piece(symbol, _lookup(model, symbol), offset, offset + byte_len))
        offset += byte_len
    return pieces


def _bpe_char_pieces(model: TokenizerModel, pre: Pretoken) -> list[Piece]:
    pieces: list[Piece] = []
    offset = pre.start
    run: list[tuple[str, int]] = []

    def flush_run():
        nonlocal offset
        for symbol, byte_len in _replay_merges(model.merges, run):
            pieces.append(Piece(symbol, _lookup(model, symbol), offset, offset + byte_len))
            offset += byte_len
        run.clear()

    for ch in pre.text:
        byte_len = _char_byte_len(ch)
        if ch in model.vocab:
            run.append((ch, byte_len))
            continue
        flush_run()
        if model.fallback is ByteFallbackMode.HEX:
            pieces.extend(_hex_pieces(model, ch, offset))
        else:
            pieces.append(_unk_piece(model, offset, offset + byte_len))
        offset += byte_len
    flush_run()
    return pieces


def _wordpiece_pieces(model: TokenizerModel, pre: Pretoken) -> list[Piece]:
    mapped = model.fallback is ByteFallbackMode.MAPPED
    if mapped:
        text = "".join(byte_display(b) for b in pre.text.encode("utf-8"))

        def width(s: str) -> int:
            return len(s)  # one byte per mapped character
    else:
        text = pre.text

        def width(s: str) -> int:
            return len(s.encode("utf-8"))

    pieces: list[Piece] = []
    i = 0
    offset = pre.start
    word_started = False  # lookups are plain until a non-whitespace unit is consumed
    max_len = model._wordpiece_max_len
    while i < len(text):
        found = None
        for length in range(min(max_len, len(text) - i), 0, -1):
            candidate = text[i : i + length]
            lookup = _WORDPIECE_PREFIX + candidate if word_started else candidate
            if lookup in model.vocab:
                found = (lookup, candidate)
                break
        if found is not None:
            lookup, candidate = found
            byte_len = width(candidate)
            pieces.append(Piece(lookup, model.vocab.id_of(lookup), offset, offset + byte_len))
            i += len(candidate)
            offset += byte_len
            if not candidate.isspace():
                word_started = True
            continue
        # no prefix matches at this position
        if mapped:
            symbol = text[i]
            pieces.append(Piece(symbol, _lookup(model, symbol), offset, offset + 1))
            i += 1
            offset += 1
            word_started = True
        elif model.fallback is ByteFallbackMode.HEX:
            pieces.extend(_hex_pieces(model, text[i], offset))
            offset += width(text[i])
            if not text[i].isspace():
                word_started = True
            i += 1
        else:
            # conventional WordPiece: the whole pretoken collapses to unk
            return [_unk_piece(model, pre.start, pre.end)]
    return pieces


def _segment(model: TokenizerModel, pre: Pretoken) -> list[Piece]:
    if model.algorithm is Algorithm.WORDPIECE_FREQ:
        return _wordpiece_pieces(model, pre)
    if model.fallback is ByteFallbackMode.MAPPED:
        return _bpe_mapped_pieces(model, pre)
    return _bpe_char_pieces(model, pre)


def _encode_pieces(model: TokenizerModel, text: str) -> tuple[str, list[Piece]]:
    normalized = normalize(text, model.normalizer)
    pieces = [Piece(sp.token, sp.id, 0, 0) for sp in model._prepend_specials]
    for pre in pretokenize(normalized, model.pretokenizer):
        pieces.extend(_segment(model, pre))
    return normalized, pieces


def encode(model: TokenizerModel, text: str) -> list[TokenId]:
    """Encode text to token ids: normalize, pretokenize, segment, fall back."""
    return [piece.id for piece in _encode_pieces(model, text)[1]]


def token_breakdown(model: TokenizerModel, text: str) -> TokenBreakdown:
    """Encode text keeping per-token display strings and byte spans."""
    normalized, pieces = _encode_pieces(model, text)
    return TokenBreakdown(items=tuple(pieces), source_text=normalized)


def decode(model: TokenizerModel, ids: list[TokenId]) -> str:
    """Inverse of encode up to normalization; special tokens are dropped.

    Byte placeholder tokens are folded back into raw bytes before UTF-8
    interpretation. An invalid byte stream yields replacement characters and an
    InvalidByteSequenceWarning instead of an error.
    """
    special_ids = model._special_ids
    raw = bytearray()
    for token_id in ids:
        if token_id in special_ids:
            continue
        if not model.vocab.has_id(token_id):
            raise UnknownId(f"id {token_id} does not resolve in tokenizer {model.name!r}")
        token = model.vocab.token_of(token_id)
        if (
            model.algorithm is Algorithm.WORDPIECE_FREQ
            and token.startswith(_WORDPIECE_PREFIX)
            and len(token) > 2
        ):
            token = token[2:]
        if model.fallback is ByteFallbackMode.HEX:
            byte_value = byte_from_hex_token(token)
            if byte_value is not None:
                raw.append(byte_value)
                continue
        if model.fallback is ByteFallbackMode.MAPPED:
            for ch in token:
                byte_value = byte_from_display(ch)
                if byte_value is None:
                    raise UnknownId(
                        f"token {token!r} of byte-native tokenizer {model.name!r} "
                        f"contains non-alphabet character {ch!r}"
                    )
                raw.append(byte_value)
            continue
        raw.extend(token.encode("utf-8"))
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        warnings.warn(
            "decoded byte stream is not valid UTF-8; emitting replacement characters",
            InvalidByteSequenceWarning,
            stacklevel=2,
        )
        return raw.decode("utf-8", errors="replace")
