"""Fundamental types, Unicode normalization, pretokenization, and byte alphabets.

Everything in this module is a pure function over immutable inputs; the other
modules build on these primitives.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

# A token id is a plain non-negative integer index into a vocabulary.
TokenId = int


class ToklabError(Exception):
    """Base class for all errors raised by this package."""


class NormalizerKind(enum.Enum):
    NONE = "none"
    NFC = "nfc"


class PretokenizerKind(enum.Enum):
    NONE = "none"
    WHITESPACE = "whitespace"
    # Splits exactly like WHITESPACE; declares that the tokenizer works on the
    # mapped byte alphabet (see byte_display) rather than raw characters.
    BYTE_LEVEL = "byte_level"


class ByteFallbackMode(enum.Enum):
    NONE = "none"
    MAPPED = "mapped"
    HEX = "hex"


class Algorithm(enum.Enum):
    BPE = "bpe"
    WORDPIECE_FREQ = "wordpiece_freq"


@dataclass(frozen=True)
class SpecialToken:
    """Out-of-vocabulary control token; prepended to encodings when `prepend`."""

    token: str
    id: TokenId
    prepend: bool = False


@dataclass(frozen=True)
class Merge:
    """One learned merge rule; `rank` is creation order (0 = first merge)."""

    left: str
    right: str
    rank: int

    @property
    def merged(self) -> str:
        return self.left + self.right


class Vocab:
    """Bijective map from token string to token id."""

    __slots__ = ("_token_to_id", "_id_to_token")

    def __init__(self, entries: dict[str, int]):
        id_to_token: dict[int, str] = {}
        for token, token_id in entries.items():
            if not isinstance(token_id, int) or token_id < 0:
                raise ValueError(f"token {token!r} has invalid id {token_id!r}")
            if token_id in id_to_token:
                raise ValueError(
                    f"duplicate id {token_id}: tokens {id_to_token[token_id]!r} "
                    f"and {token!r} share it"
                )
            id_to_token[token_id] = token
        self._token_to_id = dict(entries)
        self._id_to_token = id_to_token

    def __len__(self) -> int:
        return len(self._token_to_id)

    def __contains__(self, token: str) -> bool:
        return token in self._token_to_id

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocab):
            return NotImplemented
        return self._token_to_id == other._token_to_id

    def id_of(self, token: str) -> int:
        return self._token_to_id[token]

    def get(self, token: str) -> int | None:
        return self._token_to_id.get(token)

    def token_of(self, token_id: int) -> str:
        return self._id_to_token[token_id]

    def has_id(self, token_id: int) -> bool:
        return token_id in self._id_to_token

    def items(self):
        return self._token_to_id.items()

    def tokens(self):
        return self._token_to_id.keys()

    @property
    def size(self) -> int:
        return len(self._token_to_id)


def normalize(text: str, kind: NormalizerKind) -> str:
    """Apply the configured Unicode normalization. Idempotent for every kind."""
    if kind is NormalizerKind.NONE:
        return text
    return unicodedata.normalize("NFC", text)


class Pretoken(NamedTuple):
    """A split unit: its text plus the byte span it covers in the source."""

    text: str
    start: int  # byte offset into the UTF-8 encoding of the source
    end: int


# A run of leading whitespace binds to the word that follows it, so decoding is
# a plain concatenation and space-prefixed tokens can form. A trailing
# whitespace run has no following word and stands alone.
_WHITESPACE_SPLIT = re.compile(r"\s*\S+|\s+\Z")


def pretokenize(text: str, kind: PretokenizerKind) -> list[Pretoken]:
    """Split `text` into pretokens whose byte spans exactly tile the input."""
    if not text:
        return []
    if kind is PretokenizerKind.NONE:
        return [Pretoken(text, 0, len(text.encode("utf-8")))]

    # byte offset of every character boundary
    offsets = [0]
    for ch in text:
        offsets.append(offsets[-1] + len(ch.encode("utf-8")))

    pieces = []
    for match in _WHITESPACE_SPLIT.finditer(text):
        pieces.append(Pretoken(match.group(), offsets[match.start()], offsets[match.end()]))
    return pieces


@lru_cache(maxsize=1)
def _byte_display_table() -> tuple[str, ...]:
    # Printable bytes keep their Latin-1 codepoint; the rest are remapped to
    # 0x100 + k in ascending byte order so every entry stays printable.
    printable = set(range(0x21, 0x7F)) | set(range(0xA1, 0xAD)) | set(range(0xAE, 0x100))
    table = []
    next_offset = 0
    for b in range(256):
        if b in printable:
            table.append(chr(b))
        else:
            table.append(chr(0x100 + next_offset))
            next_offset += 1
    return tuple(table)


@lru_cache(maxsize=1)
def _byte_display_inverse() -> dict[str, int]:
    return {ch: b for b, ch in enumerate(_byte_display_table())}


def byte_display(b: int) -> str:
    """Display character for a byte value, as used by byte-level vocabularies."""
    if not 0 <= b <= 255:
        raise ValueError(f"byte value out of range: {b}")
    return _byte_display_table()[b]


def byte_from_display(ch: str) -> int | None:
    """Inverse of byte_display; None when `ch` is not a mapped byte character."""
    return _byte_display_inverse().get(ch)


def is_mapped_alphabet(text: str) -> bool:
    """True when every character of `text` belongs to the mapped byte alphabet."""
    inverse = _byte_display_inverse()
    return all(ch in inverse for ch in text)


_HEX_TOKEN = re.compile(r"<0x([0-9A-F]{2})>\Z")


def byte_hex_token(b: int) -> str:
    """Placeholder token "<0xHH>" for a byte value (uppercase, zero-padded)."""
    if not 0 <= b <= 255:
        raise ValueError(f"byte value out of range: {b}")
    return f"<0x{b:02X}>"


def byte_from_hex_token(token: str) -> int | None:
    """Inverse of byte_hex_token; None when `token` is not a byte placeholder."""
    match = _HEX_TOKEN.match(token)
    if match is None:
        return None
    return int(match.group(1), 16)
