"""Shared builders and independent oracles used across the test suite."""

from __future__ import annotations

import random

from toklab.core import (
    Algorithm,
    ByteFallbackMode,
    Merge,
    NormalizerKind,
    PretokenizerKind,
    SpecialToken,
    Vocab,
    byte_display,
    byte_hex_token,
)
from toklab.engine import TokenizerModel


def byte_native_model(
    merge_pairs: list[tuple[str, str]] = (),
    name: str = "bytes",
    specials: tuple[SpecialToken, ...] = (),
    pretokenizer: PretokenizerKind = PretokenizerKind.BYTE_LEVEL,
    algorithm: Algorithm = Algorithm.BPE,
) -> TokenizerModel:
    """Byte-level model: the 256 mapped byte symbols plus the given merges."""
    tokens = [byte_display(b) for b in range(256)]
    merges = []
    known = set(tokens)
    for rank, (left, right) in enumerate(merge_pairs):
        merges.append(Merge(left, right, rank))
        merged = left + right
        if merged not in known:
            tokens.append(merged)
            known.add(merged)
    vocab = Vocab({token: i for i, token in enumerate(tokens)})
    return TokenizerModel(
        name=name,
        algorithm=algorithm,
        vocab=vocab,
        merges=tuple(merges),
        normalizer=NormalizerKind.NFC,
        pretokenizer=pretokenizer,
        fallback=ByteFallbackMode.MAPPED,
        special_tokens=specials,
    )


def hex_char_model(
    chars: str,
    merge_pairs: list[tuple[str, str]] = (),
    name: str = "hexchars",
    specials: tuple[SpecialToken, ...] = (),
    pretokenizer: PretokenizerKind = PretokenizerKind.WHITESPACE,
    algorithm: Algorithm = Algorithm.BPE,
    extra_tokens: list[str] = (),
) -> TokenizerModel:
    """Character-level model with hex byte fallback for anything not in `chars`."""
    tokens = [byte_hex_token(b) for b in range(256)]
    tokens += sorted(set(chars))
    tokens += list(extra_tokens)
    merges = []
    known = set(tokens)
    for rank, (left, right) in enumerate(merge_pairs):
        merges.append(Merge(left, right, rank))
        merged = left + right
        if merged not in known:
            tokens.append(merged)
            known.add(merged)
    vocab = Vocab({token: i for i, token in enumerate(tokens)})
    return TokenizerModel(
        name=name,
        algorithm=algorithm,
        vocab=vocab,
        merges=tuple(merges),
        normalizer=NormalizerKind.NFC,
        pretokenizer=pretokenizer,
        fallback=ByteFallbackMode.HEX,
        special_tokens=specials,
    )


def plain_model(
    entries: dict[str, int],
    merge_pairs: list[tuple[str, str]] = (),
    name: str = "mini",
    unk_token: str | None = None,
    specials: tuple[SpecialToken, ...] = (),
    pretokenizer: PretokenizerKind = PretokenizerKind.NONE,
    algorithm: Algorithm = Algorithm.BPE,
) -> TokenizerModel:
    """Minimal character-level model with no byte fallback."""
    merges = tuple(Merge(left, right, rank) for rank, (left, right) in enumerate(merge_pairs))
    return TokenizerModel(
        name=name,
        algorithm=algorithm,
        vocab=Vocab(entries),
        merges=merges,
        normalizer=NormalizerKind.NFC,
        pretokenizer=pretokenizer,
        fallback=ByteFallbackMode.NONE,
        special_tokens=specials,
        unk_token=unk_token,
    )


def oracle_bpe(
    texts: list[str],
    target_vocab_size: int,
    min_pair_count: int = 2,
    unk_token: str = "<unk>",
) -> tuple[list[tuple[str, str]], list[list[str]]]:
    """From-scratch greedy BPE oracle over whole texts (no pretokenization).

    Counts every adjacent pair by direct enumeration at every step, never
    deduplicating repeated texts, and applies the same tie-break rule: highest
    count, then lexicographically smallest (left, right).
    Returns the merge sequence and the final segmentations.
    """
    sequences = [list(text) for text in texts]
    vocab = {unk_token}
    for seq in sequences:
        vocab.update(seq)

    merges: list[tuple[str, str]] = []
    while len(vocab) < target_vocab_size:
        counts: dict[tuple[str, str], int] = {}
        for seq in sequences:
            for i in range(len(seq) - 1):
                pair = (seq[i], seq[i + 1])
                counts[pair] = counts.get(pair, 0) + 1
        eligible = {
            pair: n
            for pair, n in counts.items()
            if not any(ch.isspace() for ch in pair[0] + pair[1])
        }
        if not eligible:
            break
        top = max(eligible.values())
        if top < min_pair_count:
            break
        pair = min(p for p, n in eligible.items() if n == top)
        merges.append(pair)
        merged = pair[0] + pair[1]
        vocab.add(merged)
        new_sequences = []
        for seq in sequences:
            out = []
            i = 0
            while i < len(seq):
                if i + 1 < len(seq) and (seq[i], seq[i + 1]) == pair:
                    out.append(merged)
                    i += 2
                else:
                    out.append(seq[i])
                    i += 1
            new_sequences.append(out)
        sequences = new_sequences
    return merges, sequences


def random_text(rng: random.Random, max_len: int = 64) -> str:
    """Mixed-script string: ASCII, Bengali-Assamese block, emoji, random codepoints."""
    pools = [
        lambda: chr(rng.randrange(0x20, 0x7F)),
        lambda: chr(rng.randrange(0x0980, 0x0A00)),
        lambda: chr(rng.choice([0x1F600, 0x1F680, 0x1F4A9, 0x2728, 0x1F3BB])),
        lambda: chr(rng.choice([c for c in [rng.randrange(0x20, 0x2FFF)] if not (0xD800 <= c <= 0xDFFF)] or [0x41])),
    ]
    length = rng.randrange(0, max_len)
    return "".join(rng.choice(pools)() for _ in range(length))
