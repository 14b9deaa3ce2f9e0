import unicodedata

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toklab.core import (
    NormalizerKind,
    PretokenizerKind,
    Vocab,
    byte_display,
    byte_from_display,
    byte_from_hex_token,
    byte_hex_token,
    normalize,
    pretokenize,
)

BENGALI_ASSAMESE = st.characters(min_codepoint=0x0980, max_codepoint=0x09FF)
MIXED_TEXT = st.text(
    alphabet=st.one_of(
        st.characters(min_codepoint=0x20, max_codepoint=0x7E),
        BENGALI_ASSAMESE,
        st.characters(exclude_categories=("Cs",)),
    )
)


class TestNormalize:
    def test_ascii_fixed_point(self):
        assert normalize("abc", NormalizerKind.NFC) == "abc"

    def test_assamese_already_composed(self):
        # reference oracle: the stdlib normalizer reports the string NFC-stable
        word = "জীৱনৰ"
        assert unicodedata.normalize("NFC", word) == word
        assert normalize(word, NormalizerKind.NFC) == word

    def test_combining_mark_composes(self):
        decomposed = "é"
        assert normalize(decomposed, NormalizerKind.NFC) == "é"

    def test_none_is_identity(self):
        decomposed = "é"
        assert normalize(decomposed, NormalizerKind.NONE) == decomposed

    def test_empty(self):
        assert normalize("", NormalizerKind.NFC) == ""

    @given(MIXED_TEXT)
    def test_nfc_idempotent(self, text):
        once = normalize(text, NormalizerKind.NFC)
        assert normalize(once, NormalizerKind.NFC) == once


class TestPretokenize:
    def test_whitespace_attaches_to_following_word(self):
        parts = pretokenize("ab cd", PretokenizerKind.WHITESPACE)
        assert [p.text for p in parts] == ["ab", " cd"]

    def test_none_is_identity(self):
        parts = pretokenize("ab cd", PretokenizerKind.NONE)
        assert [p.text for p in parts] == ["ab cd"]

    def test_assamese_split_at_single_space(self):
        parts = pretokenize("জীৱনৰ পৰিসৰে", PretokenizerKind.WHITESPACE)
        assert [p.text for p in parts] == ["জীৱনৰ", " পৰিসৰে"]

    def test_empty_input_gives_empty_result(self):
        for kind in PretokenizerKind:
            assert pretokenize("", kind) == []

    def test_byte_spans(self):
        parts = pretokenize("জী পৰ", PretokenizerKind.WHITESPACE)
        # জী is 6 UTF-8 bytes; " পৰ" is 7 more
        assert [(p.start, p.end) for p in parts] == [(0, 6), (6, 13)]

    @pytest.mark.parametrize("kind", list(PretokenizerKind))
    @given(text=MIXED_TEXT)
    def test_spans_tile_the_input(self, text, kind):
        parts = pretokenize(text, kind)
        assert "".join(p.text for p in parts) == text
        encoded = text.encode("utf-8")
        position = 0
        for part in parts:
            assert part.start == position
            assert encoded[part.start : part.end] == part.text.encode("utf-8")
            position = part.end
        assert position == len(encoded)

    def test_trailing_whitespace_stands_alone(self):
        parts = pretokenize("ab ", PretokenizerKind.WHITESPACE)
        assert [p.text for p in parts] == ["ab", " "]


class TestByteDisplay:
    def test_paper_byte_e0(self):
        assert byte_display(0xE0) == "à"  # "à"

    def test_printable_identity(self):
        assert byte_display(0x41) == "A"

    def test_remapped_control_byte(self):
        # 0x9C is the 63rd excluded byte (zero-based 62): 33 bytes 0x00-0x20,
        # then 0x7F-0x9C adds 30 more; 0x100 + 0x3E = U+013E
        assert byte_display(0x9C) == "ľ"

    def test_bengali_letter_renders_as_table3_mojibake(self):
        rendered = "".join(byte_display(b) for b in "জ".encode("utf-8"))
        assert rendered == "à¦ľ"

    def test_injective_and_invertible_over_all_bytes(self):
        seen = set()
        for b in range(256):
            ch = byte_display(b)
            assert ch not in seen
            seen.add(ch)
            assert byte_from_display(ch) == b

    def test_inverse_rejects_other_characters(self):
        assert byte_from_display("জ") is None

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            byte_display(256)


class TestByteHexToken:
    @pytest.mark.parametrize(
        "value,expected",
        [(0xE0, "<0xE0>"), (0xA7, "<0xA7>"), (0x05, "<0x05>")],
    )
    def test_examples(self, value, expected):
        assert byte_hex_token(value) == expected

    def test_length_and_roundtrip_all_bytes(self):
        for b in range(256):
            token = byte_hex_token(b)
            assert len(token) == 6
            assert byte_from_hex_token(token) == b

    def test_inverse_rejects_lowercase_and_noise(self):
        assert byte_from_hex_token("<0xe0>") is None
        assert byte_from_hex_token("<0xE0> ") is None
        assert byte_from_hex_token("hello") is None


class TestVocab:
    def test_duplicate_id_names_both_tokens(self):
        with pytest.raises(ValueError) as exc_info:
            Vocab({"a": 1, "b": 1})
        message = str(exc_info.value)
        assert "'a'" in message and "'b'" in message

    def test_lookup_both_ways(self):
        vocab = Vocab({"a": 0, "b": 7})
        assert vocab.id_of("b") == 7
        assert vocab.token_of(7) == "b"
        assert vocab.size == 2
        assert "a" in vocab and "c" not in vocab
