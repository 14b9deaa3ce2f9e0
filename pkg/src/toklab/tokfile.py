"""Single-file JSON serialization for tokenizer models.

Document layout (version 1):

    { "version": 1,
      "model": { "type": "bpe"|"wordpiece_freq",
                 "vocab": {token: id, ...},
                 "merges": ["left right", ...],
                 "byte_fallback": "none"|"mapped"|"hex",
                 "unk_token": string|null },
      "normalizer": "none"|"nfc",
      "pretokenizer": "none"|"whitespace"|"byte_level",
      "special_tokens": [ {"token": str, "id": int, "prepend": bool}, ... ] }

Vocabulary entries are written sorted by id and merges by rank, so saving is
deterministic. Unknown optional fields are ignored on load; unknown versions
are rejected.
"""

from __future__ import annotations

import io
import json
from pathlib import Path
from typing import Any, BinaryIO

from .core import (
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
    is_mapped_alphabet,
)
from .engine import TokenizerModel

FORMAT_VERSION = 1

_WORDPIECE_PREFIX = "##"


class TokenizerFileError(ToklabError):
    pass


class IoFailure(TokenizerFileError):
    """The destination or source could not be written or read."""


class ParseError(TokenizerFileError):
    """The document is not well-formed JSON."""


class SchemaError(TokenizerFileError):
    """A required field is missing or has the wrong type; names the field path."""


class ValidationError(TokenizerFileError):
    """The document parses but violates a model invariant."""


def _strip_continuation(token: str) -> str:
    if token.startswith(_WORDPIECE_PREFIX) and len(token) > 2:
        return token[len(_WORDPIECE_PREFIX):]
    return token


def model_to_document(model: TokenizerModel) -> dict[str, Any]:
    """Build the JSON document for a model, with deterministic ordering."""
    for merge in model.merges:
        if any(ch.isspace() for ch in merge.left + merge.right):
            raise ValidationError(
                f"merge ({merge.left!r}, {merge.right!r}) contains whitespace and "
                f"cannot be stored in the space-joined merge format"
            )
    vocab = {token: token_id for token, token_id in sorted(model.vocab.items(), key=lambda kv: kv[1])}
    return {
        "version": FORMAT_VERSION,
        "model": {
            "type": model.algorithm.value,
            "vocab": vocab,
            "merges": [f"{m.left} {m.right}" for m in sorted(model.merges, key=lambda m: m.rank)],
            "byte_fallback": model.fallback.value,
            "unk_token": model.unk_token,
        },
        "normalizer": model.normalizer.value,
        "pretokenizer": model.pretokenizer.value,
        "special_tokens": [
            {"token": sp.token, "id": sp.id, "prepend": sp.prepend}
            for sp in model.special_tokens
        ],
    }


def dumps(model: TokenizerModel) -> str:
    return json.dumps(model_to_document(model), ensure_ascii=False, separators=(",", ":")) + "\n"


def save(model: TokenizerModel, destination: str | Path | BinaryIO | io.TextIOBase) -> None:
    """Write the model as a UTF-8 JSON document."""
    text = dumps(model)
    try:
        if isinstance(destination, (str, Path)):
            with open(destination, "w", encoding="utf-8") as handle:
                handle.write(text)
        elif isinstance(destination, io.TextIOBase):
            destination.write(text)
        else:
            destination.write(text.encode("utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot write tokenizer file: {exc}") from exc


def _require(document: Any, path: str, expected: type) -> Any:
    node = document
    walked = []
    for part in path.split("."):
        walked.append(part)
        if not isinstance(node, dict) or part not in node:
            raise SchemaError(f"missing field {'.'.join(walked)}")
        node = node[part]
    if not isinstance(node, expected) or (expected is int and isinstance(node, bool)):
        raise SchemaError(f"field {path} must be {expected.__name__}, got {type(node).__name__}")
    return node


def _parse_enum(kind: type, value: Any, path: str):
    try:
        return kind(value)
    except ValueError:
        valid = ", ".join(member.value for member in kind)
        raise SchemaError(f"field {path} must be one of: {valid}; got {value!r}") from None


def _validate_merges(merge_strings: list[Any], vocab: Vocab) -> list[Merge]:
    constructible = {token for token in vocab.tokens() if len(token) == 1}
    merges: list[Merge] = []
    for rank, entry in enumerate(merge_strings):
        if not isinstance(entry, str):
            raise SchemaError(f"field model.merges[{rank}] must be str")
        parts = entry.split(" ")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValidationError(f"merge entry {entry!r} is not a 'left right' pair")
        left, right = parts
        for symbol in (left, right):
            if symbol not in constructible:
                raise ValidationError(
                    f"merge {entry!r} references symbol {symbol!r} which is neither "
                    f"a base-alphabet token nor produced by an earlier merge"
                )
        merged = left + right
        if merged not in vocab:
            raise ValidationError(f"merge {entry!r} produces {merged!r} which is not in the vocabulary")
        constructible.add(merged)
        merges.append(Merge(left, right, rank))
    return merges


def document_to_model(document: Any, name: str) -> TokenizerModel:
    """Validate a parsed document and construct the model it describes."""
    version = _require(document, "version", int)
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported version {version}; this reader handles version {FORMAT_VERSION}")

    algorithm = _parse_enum(Algorithm, _require(document, "model.type", str), "model.type")
    fallback = _parse_enum(ByteFallbackMode, _require(document, "model.byte_fallback", str), "model.byte_fallback")
    normalizer = _parse_enum(NormalizerKind, _require(document, "normalizer", str), "normalizer")
    pretokenizer = _parse_enum(PretokenizerKind, _require(document, "pretokenizer", str), "pretokenizer")

    raw_vocab = _require(document, "model.vocab", dict)
    seen_ids: dict[int, str] = {}
    for token, token_id in raw_vocab.items():
        if not isinstance(token_id, int) or isinstance(token_id, bool) or token_id < 0:
            raise SchemaError(f"field model.vocab[{token!r}] must be a non-negative int")
        if token_id in seen_ids:
            raise ValidationError(
                f"duplicate id {token_id}: tokens {seen_ids[token_id]!r} and {token!r} share it"
            )
        seen_ids[token_id] = token
    vocab = Vocab(raw_vocab)

    unk_token = document["model"].get("unk_token")
    if unk_token is not None and not isinstance(unk_token, str):
        raise SchemaError("field model.unk_token must be str or null")

    wordpiece = algorithm is Algorithm.WORDPIECE_FREQ
    merge_strings = _require(document, "model.merges", list)
    merges = _validate_merges(merge_strings, vocab)

    specials_raw = document.get("special_tokens", [])
    if not isinstance(specials_raw, list):
        raise SchemaError("field special_tokens must be a list")
    specials: list[SpecialToken] = []
    for index, item in enumerate(specials_raw):
        if not isinstance(item, dict):
            raise SchemaError(f"field special_tokens[{index}] must be an object")
        token = item.get("token")
        token_id = item.get("id")
        prepend = item.get("prepend", False)
        if not isinstance(token, str):
            raise SchemaError(f"field special_tokens[{index}].token must be str")
        if not isinstance(token_id, int) or isinstance(token_id, bool) or token_id < 0:
            raise SchemaError(f"field special_tokens[{index}].id must be a non-negative int")
        if not isinstance(prepend, bool):
            raise SchemaError(f"field special_tokens[{index}].prepend must be bool")
        specials.append(SpecialToken(token, token_id, prepend))

    if fallback is ByteFallbackMode.NONE:
        if unk_token is None:
            raise ValidationError("byte_fallback 'none' requires an unk_token")
        if unk_token not in vocab:
            raise ValidationError(f"unk_token {unk_token!r} is not in the vocabulary")
    elif fallback is ByteFallbackMode.HEX:
        missing = [byte_hex_token(b) for b in range(256) if byte_hex_token(b) not in vocab]
        if missing:
            raise ValidationError(
                f"byte_fallback 'hex' requires all 256 byte tokens; missing {missing[0]!r} "
                f"and {len(missing) - 1} more"
            )
    else:  # MAPPED
        missing_bytes = [b for b in range(256) if byte_display(b) not in vocab]
        if missing_bytes:
            raise ValidationError(
                f"byte_fallback 'mapped' requires every byte-alphabet symbol; "
                f"missing byte 0x{missing_bytes[0]:02X} and {len(missing_bytes) - 1} more"
            )
        for token in vocab.tokens():
            if not is_mapped_alphabet(_strip_continuation(token) if wordpiece else token):
                raise ValidationError(
                    f"token {token!r} contains characters outside the mapped byte "
                    f"alphabet, which a byte-native tokenizer cannot decode"
                )

    try:
        return TokenizerModel(
            name=name,
            algorithm=algorithm,
            vocab=vocab,
            merges=tuple(merges),
            normalizer=normalizer,
            pretokenizer=pretokenizer,
            fallback=fallback,
            special_tokens=tuple(specials),
            unk_token=unk_token,
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def loads(text: str, name: str = "tokenizer") -> TokenizerModel:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    return document_to_model(document, name)


def load(source: str | Path | BinaryIO | io.TextIOBase, name: str | None = None) -> TokenizerModel:
    """Read and fully validate a version-1 tokenizer document.

    The model name defaults to the file stem when loading from a path.
    """
    try:
        if isinstance(source, (str, Path)):
            path = Path(source)
            text = path.read_text(encoding="utf-8")
            if name is None:
                name = path.stem
        else:
            data = source.read()
            text = data.decode("utf-8") if isinstance(data, bytes) else data
    except OSError as exc:
        raise IoFailure(f"cannot read tokenizer file: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"tokenizer file is not valid UTF-8: {exc}") from exc
    return loads(text, name=name or "tokenizer")


def load_directory(directory: str | Path) -> dict[str, TokenizerModel]:
    """Load every *.json tokenizer in a directory, keyed by file stem."""
    directory = Path(directory)
    if not directory.is_dir():
        raise IoFailure(f"{directory} is not a directory")
    models: dict[str, TokenizerModel] = {}
    for path in sorted(directory.glob("*.json")):
        models[path.stem] = load(path)
    return models
