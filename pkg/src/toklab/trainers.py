"""Frequency-greedy subword vocabulary training (BPE and WordPiece variants).

Both trainers run the same loop: count adjacent symbol pairs over the working
segmentation, merge the most frequent pair, repeat. The WordPiece variant only
differs in how symbols are spelled ("##" continuation marker) and in that the
resulting model encodes by greedy longest match instead of merge replay.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .core import (
    Algorithm,
    ByteFallbackMode,
    Merge,
    NormalizerKind,
    PretokenizerKind,
    ToklabError,
    Vocab,
    byte_display,
    byte_hex_token,
    normalize,
    pretokenize,
)
from .engine import TokenizerModel

if TYPE_CHECKING:
    from .harness import Corpus


class TrainerError(ToklabError):
    pass


class EmptyCorpus(TrainerError):
    """The corpus has no records, or no text to learn from."""


class VocabTargetBelowAlphabet(TrainerError):
    """target_vocab_size is smaller than the base alphabet the corpus implies."""


_WORDPIECE_PREFIX = "##"


@dataclass(frozen=True)
class TrainConfig:
    target_vocab_size: int
    min_pair_count: int = 2
    algorithm: Algorithm = Algorithm.BPE
    pretokenizer: PretokenizerKind = PretokenizerKind.WHITESPACE
    normalizer: NormalizerKind = NormalizerKind.NFC
    fallback: ByteFallbackMode = ByteFallbackMode.NONE
    # Only consulted when fallback is NONE, which requires an unk entry.
    unk_token: str = "<unk>"

    def __post_init__(self):
        if self.target_vocab_size < 1:
            raise ValueError("target_vocab_size must be positive")
        if self.min_pair_count < 1:
            raise ValueError("min_pair_count must be positive")


Pair = tuple[str, str]


def count_pairs(segmented_corpus: Iterable[Sequence[str]]) -> Counter[Pair]:
    """Count adjacent ordered symbol pairs, never crossing sequence boundaries.

    Overlapping occurrences count per position: ["a","a","a"] holds ("a","a")
    twice.
    """
    counts: Counter[Pair] = Counter()
    for sequence in segmented_corpus:
        counts.update(zip(sequence, sequence[1:]))
    return counts


def count_subword_pairs(segmented_corpus: Iterable[Sequence[str]]) -> Counter[Pair]:
    """Occurrence count of subword pairs for WordPiece training.

    Kept as a distinct entry point from count_pairs because the two training
    algorithms name their counts differently, but both are plain corpus
    occurrence counts, so the outputs are identical on identical input.
    """
    return count_pairs(segmented_corpus)


def _initial_symbols(text: str, fallback: ByteFallbackMode) -> list[str]:
    if fallback is ByteFallbackMode.MAPPED:
        return [byte_display(b) for b in text.encode("utf-8")]
    return list(text)


def _pair_is_mergeable(pair: Pair) -> bool:
    # Symbols containing whitespace never merge: the tokenizer file format
    # stores merges as space-joined "left right" strings, so a raw space inside
    # a symbol would make them ambiguous. Mapped-alphabet symbols are always
    # whitespace-free and unaffected.
    return not any(ch.isspace() for ch in pair[0]) and not any(ch.isspace() for ch in pair[1])


def _apply_merge(symbols: list[str], left: str, right: str, merged: str) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and symbols[i] == left and symbols[i + 1] == right:
            out.append(merged)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _collect_forms(symbols: list[str], out: set[str]) -> None:
    # A symbol is written plainly while everything before it in the pretoken is
    # whitespace (it starts the word); afterwards it carries the "##" marker.
    word_started = False
    for symbol in symbols:
        out.add(_WORDPIECE_PREFIX + symbol if word_started else symbol)
        if not symbol.isspace():
            word_started = True


def _merge_forms(segments: dict[str, list[str]], left: str, right: str, merged: str) -> set[str]:
    """Vocabulary forms the merged symbol takes, scanning occurrences the same
    left-to-right way _apply_merge replaces them."""
    forms: set[str] = set()
    for symbols in segments.values():
        word_started = False
        i = 0
        while i < len(symbols):
            if i + 1 < len(symbols) and symbols[i] == left and symbols[i + 1] == right:
                forms.add(_WORDPIECE_PREFIX + merged if word_started else merged)
                word_started = True  # merged symbols are never whitespace
                i += 2
            else:
                if not symbols[i].isspace():
                    word_started = True
                i += 1
    return forms


def _base_tokens(config: TrainConfig, segments: dict[str, list[str]]) -> list[str]:
    wordpiece = config.algorithm is Algorithm.WORDPIECE_FREQ
    if wordpiece:
        observed_set: set[str] = set()
        for symbols in segments.values():
            _collect_forms(symbols, observed_set)
        observed = sorted(observed_set)
    else:
        observed = sorted({symbol for syms in segments.values() for symbol in syms})
    if config.fallback is ByteFallbackMode.MAPPED:
        # the full byte alphabet, whether or not every byte was observed
        bare = [byte_display(b) for b in range(256)]
        bare_set = set(bare)
        return bare + [s for s in observed if s not in bare_set]
    if config.fallback is ByteFallbackMode.HEX:
        return [byte_hex_token(b) for b in range(256)] + observed
    return [config.unk_token] + [s for s in observed if s != config.unk_token]


def _train(corpus: "Corpus", config: TrainConfig, name: str) -> TokenizerModel:
    if not corpus.records:
        raise EmptyCorpus("cannot train on an empty corpus")

    pretoken_freq: Counter[str] = Counter()
    for record in corpus.records:
        normalized = normalize(record.text, config.normalizer)
        for pre in pretokenize(normalized, config.pretokenizer):
            pretoken_freq[pre.text] += 1
    if not pretoken_freq:
        raise EmptyCorpus("corpus records contain no text")

    wordpiece = config.algorithm is Algorithm.WORDPIECE_FREQ
    segments = {text: _initial_symbols(text, config.fallback) for text in pretoken_freq}

    tokens = _base_tokens(config, segments)
    if config.target_vocab_size < len(tokens):
        raise VocabTargetBelowAlphabet(
            f"target_vocab_size {config.target_vocab_size} is below the base "
            f"alphabet size {len(tokens)}"
        )

    known = set(tokens)
    merges: list[Merge] = []
    while len(tokens) < config.target_vocab_size:
        # Recount from the current segmentation, weighting each distinct
        # pretoken by its corpus frequency; equals naive per-occurrence counts.
        counts: Counter[Pair] = Counter()
        for text, symbols in segments.items():
            weight = pretoken_freq[text]
            for pair in zip(symbols, symbols[1:]):
                counts[pair] += weight

        best_pair: Pair | None = None
        best_count = 0
        for pair, count in counts.items():
            if not _pair_is_mergeable(pair):
                continue
            if count > best_count or (count == best_count and (best_pair is None or pair < best_pair)):
                best_pair = pair
                best_count = count
        if best_pair is None or best_count < config.min_pair_count:
            break

        left, right = best_pair
        merged = left + right
        if wordpiece:
            forms = _merge_forms(segments, left, right, merged)
            new_entries = [f for f in (merged, _WORDPIECE_PREFIX + merged) if f in forms and f not in known]
        else:
            new_entries = [merged] if merged not in known else []
        if len(tokens) + len(new_entries) > config.target_vocab_size:
            break

        merges.append(Merge(left, right, rank=len(merges)))
        tokens.extend(new_entries)
        known.update(new_entries)
        for text in segments:
            segments[text] = _apply_merge(segments[text], left, right, merged)

    vocab = Vocab({token: i for i, token in enumerate(tokens)})
    return TokenizerModel(
        name=name,
        algorithm=config.algorithm,
        vocab=vocab,
        merges=() if wordpiece else tuple(merges),
        normalizer=config.normalizer,
        pretokenizer=config.pretokenizer,
        fallback=config.fallback,
        special_tokens=(),
        unk_token=config.unk_token if config.fallback is ByteFallbackMode.NONE else None,
    )


def train_bpe(corpus: "Corpus", config: TrainConfig, name: str = "bpe") -> TokenizerModel:
    """Learn a BPE vocabulary by greedily merging the most frequent adjacent pair.

    Starts from the character alphabet (the byte alphabet when fallback is
    MAPPED) and merges until target_vocab_size is reached, no pair meets
    min_pair_count, or no pairs remain. Ties break toward the lexicographically
    smallest (left, right) pair so training is deterministic.
    """
    if config.algorithm is not Algorithm.BPE:
        raise ValueError("train_bpe requires config.algorithm == BPE")
    return _train(corpus, config, name)


def train_wordpiece(corpus: "Corpus", config: TrainConfig, name: str = "wordpiece") -> TokenizerModel:
    """Learn a WordPiece vocabulary with the same frequency-greedy merge loop.

    Non-initial subwords inside a pretoken carry the "##" continuation marker;
    the trained model encodes by greedy longest match, so no merge list is
    stored.
    """
    if config.algorithm is not Algorithm.WORDPIECE_FREQ:
        raise ValueError("train_wordpiece requires config.algorithm == WORDPIECE_FREQ")
    return _train(corpus, config, name)
