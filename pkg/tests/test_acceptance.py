"""Acceptance suite: one test per release criterion, at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass line per
criterion; any assertion failure marks that criterion red.
"""

import json
import random
import time
from fractions import Fraction

import pytest
from helpers import byte_native_model, hex_char_model, oracle_bpe, random_text
from stub_tokenizers import table_style_stubs

from toklab.cli import main
from toklab.core import Algorithm, ByteFallbackMode, NormalizerKind, PretokenizerKind, byte_display, byte_from_display, byte_hex_token
from toklab.engine import decode, encode
from toklab.harness import (
    CODEPOINTS,
    ReportFormat,
    bundled_sample_corpus,
    corpus_from_texts,
    emit_report,
    run_comparison,
)
from toklab.metrics import (
    ConfusionCounts,
    NslInput,
    accuracy,
    f1,
    nsl,
    precision,
    recall,
    round_half_even,
)
from toklab.tokfile import loads as tokfile_loads
from toklab.tokfile import dumps as tokfile_dumps
from toklab.tokfile import save as tokfile_save
from toklab.trainers import TrainConfig, count_pairs, train_bpe

# Benchmark-table reference values: token counts and published 2-decimal NSLs
TABLE_COUNTS = [19, 29, 49, 52, 16]
TABLE_NSLS = ["0.54", "0.82", "1.40", "1.48", "0.45"]


def _report(name: str, started: float, detail: str = ""):
    elapsed = time.perf_counter() - started
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE PASS [{name}]: {elapsed:.2f}s{suffix}")


def test_nsl_identity_and_reciprocity():
    started = time.perf_counter()
    rng = random.Random(101)
    for _ in range(1000):
        n = rng.randrange(1, 40)
        lam = tuple(rng.randrange(0, 500) for _ in range(n))
        beta = tuple(rng.randrange(1, 500) for _ in range(n))
        assert nsl(NslInput(lam if sum(lam) else (1,) * n, lam if sum(lam) else (1,) * n)) == 1
        if sum(lam) == 0:
            continue
        forward = nsl(NslInput(lam, beta))
        backward = nsl(NslInput(beta, lam))
        assert abs(float(forward) * float(backward) - 1) < 1e-12
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _report("NSL identity & reciprocity", started, "1000 vectors")


def test_table2_consistency_band():
    started = time.perf_counter()
    for count, published in zip(TABLE_COUNTS, TABLE_NSLS):
        implied_baseline = Fraction(count) / Fraction(published)
        assert Fraction(35) <= implied_baseline <= Fraction("35.6"), (
            f"count {count} / NSL {published} implies baseline {float(implied_baseline):.3f}"
        )
        recomputed = round_half_even(Fraction(count) / Fraction("35.2"))
        assert abs(Fraction(recomputed) - Fraction(published)) <= Fraction("0.02")
    _report("Table 2 consistency band", started, "implied baseline in [35.0, 35.6]")


def test_ranking_reproduction(tmp_path, capsys):
    started = time.perf_counter()
    corpus = bundled_sample_corpus()
    text = corpus.records[0].text
    stubs = table_style_stubs(text)

    expected_counts = {"sutra_like": 16, "gpt4o_like": 19, "gemma_like": 29,
                       "llama_like": 49, "mistral_like": 52}
    for model in stubs:
        assert len(encode(model, text)) == expected_counts[model.name]

    corpus_path = tmp_path / "sample.txt"
    corpus_path.write_text(text + "\n", encoding="utf-8")
    args = ["compare", "--corpus", str(corpus_path), "--baseline", "codepoints",
            "--format", "md", "--fixed-clock"]
    for model in stubs:
        path = tmp_path / f"{model.name}.json"
        tokfile_save(model, path)
        args += ["--tokenizer", str(path)]
    assert main(args) == 0
    markdown = capsys.readouterr().out

    row_names = [
        line.split("|")[1].strip()
        for line in markdown.splitlines()
        if line.startswith("| ") and "Name" not in line
    ]
    assert row_names == ["sutra_like", "gpt4o_like", "gemma_like", "llama_like", "mistral_like"]
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    with capsys.disabled():
        _report("Ranking reproduction", started, " < ".join(row_names))


def test_bpe_oracle_equivalence():
    started = time.perf_counter()
    rng = random.Random(77)
    for _ in range(200):
        alphabet = "abcdef"[: rng.randrange(2, 7)]
        text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(2, 51)))
        target = len({"<unk>"} | set(text)) + rng.randrange(1, 11)
        min_count = rng.choice([1, 2])

        expected_merges, expected_segments = oracle_bpe([text], target, min_count)
        model = train_bpe(
            corpus_from_texts([text]),
            TrainConfig(
                target_vocab_size=target,
                min_pair_count=min_count,
                pretokenizer=PretokenizerKind.NONE,
                normalizer=NormalizerKind.NFC,
                fallback=ByteFallbackMode.NONE,
            ),
        )
        assert [(m.left, m.right) for m in model.merges] == expected_merges
        # stored-merge replay reproduces the oracle's final segmentation
        from toklab.engine import token_breakdown

        assert [p.display for p in token_breakdown(model, text).items] == expected_segments[0]
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    _report("BPE oracle equivalence", started, "200 corpora")


def test_classic_merge_check():
    started = time.perf_counter()
    counts = count_pairs([list("aaabdaaabac")])
    assert counts[("a", "a")] == 4
    assert counts.most_common(1)[0] == (("a", "a"), 4)
    model = train_bpe(
        corpus_from_texts(["aaabdaaabac"]),
        TrainConfig(target_vocab_size=6, min_pair_count=1, pretokenizer=PretokenizerKind.NONE),
    )
    assert (model.merges[0].left, model.merges[0].right) == ("a", "a")
    _report("Classic merge check", started, "(a,a) with count 4")


def test_lossless_roundtrip_property():
    started = time.perf_counter()
    rng = random.Random(2024)
    mapped_model = byte_native_model(name="mapped")
    hex_model = hex_char_model("abcdefghij জীৱনৰ", name="hex")
    checked = 0
    for _ in range(10_000):
        text = random_text(rng, max_len=48)
        import unicodedata

        expected = unicodedata.normalize("NFC", text)
        assert decode(mapped_model, encode(mapped_model, text)) == expected
        assert decode(hex_model, encode(hex_model, text)) == expected
        checked += 1
    elapsed = time.perf_counter() - started
    assert checked == 10_000
    assert elapsed < 30.0
    _report("Lossless roundtrip", started, "10000 strings, mapped + hex")


def test_byte_display_fidelity():
    started = time.perf_counter()
    assert "".join(byte_display(b) for b in (0xE0, 0xA6, 0x9C)) == "à¦ľ"
    assert byte_hex_token(0xE0) == "<0xE0>"
    assert byte_hex_token(0xA7) == "<0xA7>"
    rendered = set()
    for b in range(256):
        ch = byte_display(b)
        assert ch not in rendered
        rendered.add(ch)
        assert byte_from_display(ch) == b
    _report("Byte-display fidelity", started, "256-byte injectivity")


def test_classification_metrics():
    started = time.perf_counter()
    c = ConfusionCounts(tp=2, tn=2, fp=1, fn=1)
    for metric in (precision, recall, f1, accuracy):
        assert abs(float(metric(c)) - 2 / 3) < 1e-12

    rng = random.Random(3)
    for _ in range(1000):
        counts = ConfusionCounts(
            tp=rng.randrange(1, 200),
            tn=rng.randrange(0, 200),
            fp=rng.randrange(0, 200),
            fn=rng.randrange(0, 200),
        )
        p, r = precision(counts), recall(counts)
        harmonic = 2 * p * r / (p + r)
        assert abs(float(f1(counts)) - float(harmonic)) < 1e-12
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _report("Classification metrics", started, "two F1 forms agree on 1000 draws")


def test_determinism_and_parallel_equals_serial():
    started = time.perf_counter()
    rng = random.Random(9)
    words = ["ab", "ba", "abb", "জীৱনৰ", "পৰিসৰে", "mix", "aa"]
    lines = [" ".join(rng.choice(words) for _ in range(rng.randrange(1, 8))) for _ in range(1000)]
    corpus = corpus_from_texts(lines)

    training = corpus_from_texts(lines[:50])
    model_a = train_bpe(
        training, TrainConfig(target_vocab_size=300, fallback=ByteFallbackMode.MAPPED), name="ma"
    )
    model_b = train_bpe(
        training, TrainConfig(target_vocab_size=300, fallback=ByteFallbackMode.HEX), name="mb"
    )

    serial = run_comparison([model_a, model_b], CODEPOINTS, corpus, workers=1, fixed_clock=True)
    parallel = run_comparison([model_a, model_b], CODEPOINTS, corpus, workers=4, fixed_clock=True)
    repeat = run_comparison([model_a, model_b], CODEPOINTS, corpus, workers=4, fixed_clock=True)

    serial_json = emit_report(serial, ReportFormat.JSON)
    assert serial_json == emit_report(parallel, ReportFormat.JSON)
    assert serial_json == emit_report(repeat, ReportFormat.JSON)
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    _report("Determinism & parallel-equals-serial", started, "1000-line corpus, 1 vs 4 workers")


def test_tokenizer_file_roundtrip():
    started = time.perf_counter()
    rng = random.Random(55)
    for trial in range(100):
        alphabet = "abcdefgh"
        chars = "".join(rng.sample(alphabet, rng.randrange(2, len(alphabet))))
        merge_pairs = []
        symbols = sorted(set(chars))
        for _ in range(rng.randrange(0, 8)):
            left, right = rng.choice(symbols), rng.choice(symbols)
            merge_pairs.append((left, right))
            symbols.append(left + right)
        if trial % 2:
            model = hex_char_model(chars + " ", merge_pairs, name=f"m{trial}")
        else:
            model = byte_native_model(merge_pairs, name=f"m{trial}")
        loaded = tokfile_loads(tokfile_dumps(model), name=model.name)
        for _ in range(4):
            probe = random_text(rng, max_len=32)
            assert encode(loaded, probe) == encode(model, probe)
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0
    _report("Tokenizer file round-trip", started, "100 randomized models")
