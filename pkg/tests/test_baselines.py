from fractions import Fraction

import pytest

from baselines import BASELINE_CODECS, best_of, encode_baseline, raw_encode
from bdi import BDI_ENCODINGS, bdi_decode, bdi_encode, encoding_bits
from fnw import flip_decisions, fnw_decode, fnw_encode
from fpc import (REPEATED_BYTE, SIGN_EXTENDED_4, SIGN_EXTENDED_16, UNCOMPRESSED, UPPER_HALF_ZERO, HALFWORD_BYTES,
                 ZERO_WORD, fpc_compress_word, fpc_decode, fpc_decode_word, fpc_encode)
from genericclasses import (ZERO_COST, BaselineResult, BitString, Block, CorruptStreamError, CostModel,
                            UnsupportedSizeError)

ONES_ONLY = CostModel(Fraction(0), Fraction(1))

FPC_BOUNDARIES = [0, 1, 7, 8, 0xFFFFFFF8, 0xFFFFFFF7, 0x7F, 0x80, 0xFFFFFF80, 0x7FFF, 0x8000, 0xFFFF, 0x10000,
                  0xFFFF8000, 0xFFFF7FFF, 0x007F0080, 0x00FF0000, 0x7F7F7F7F, 0x80808080, 0xFFFFFFFF, 0x12345678]


def counting_block(start, count=8, width=8):
    return Block(b"".join(((start + i) % (1 << (8 * width))).to_bytes(width, "big") for i in range(count)))


class TestFNW:
    def test_zero_bytes_are_flipped(self, asym):
        result = fnw_encode(Block(bytes(64)), 8, asym)
        # eight ones plus a flag of 1 beats eight zeros plus a flag of 0
        assert result.breakdown.total_cost == 64 * 9
        assert result.breakdown.metadata_bits == 64
        assert result.detail == "64/64 words flipped"

    def test_one_bytes_are_kept(self, asym):
        result = fnw_encode(Block(b"\xff" * 64), 8, asym)
        assert result.breakdown.total_cost == 64 * 10
        assert not flip_decisions(Block(b"\xff" * 64), 8, asym).any()

    def test_classic_flip_n_write_without_flags(self, random_block):
        block = random_block()
        result = fnw_encode(block, 8, ONES_ONLY, "exclude")
        expected = sum(min(bin(b).count("1"), 8 - bin(b).count("1")) for b in block.payload)
        assert result.breakdown.total_cost == expected
        assert result.breakdown.metadata_bits == 0

    def test_ties_write_more_ones(self, sym):
        assert flip_decisions(Block(b"\x01" * 64), 8, sym).all()
        assert not flip_decisions(Block(b"\x0f" * 64), 8, sym).any()

    def test_stream_layout(self, asym):
        result = fnw_encode(Block(bytes(64)), 16, asym)
        assert len(result.written) == 512 + 32
        assert str(result.written) == "1" * 544

    @pytest.mark.parametrize("word_bits", [4, 8, 16, 32])
    def test_round_trip(self, word_bits, asym, random_block):
        for block in [Block(bytes(64)), Block(b"\xa5" * 64)] + [random_block() for _ in range(20)]:
            assert fnw_decode(fnw_encode(block, word_bits, asym), word_bits) == block

    def test_word_sizes(self, asym):
        with pytest.raises(UnsupportedSizeError):
            fnw_encode(Block(bytes(64)), 12, asym)


class TestFPC:
    def test_zero_word(self):
        assert fpc_compress_word(0) == (ZERO_WORD, 0, 0)

    def test_small_word(self):
        assert fpc_compress_word(5) == (SIGN_EXTENDED_4, 4, 5)
        assert fpc_compress_word(0xFFFFFFFF) == (SIGN_EXTENDED_4, 4, 0xF)

    def test_uncompressible_word(self):
        assert fpc_compress_word(0x12345678) == (UNCOMPRESSED, 32, 0x12345678)

    @pytest.mark.parametrize("word,prefix", [
        (0x7FFF, SIGN_EXTENDED_16),
        (0x8000, UPPER_HALF_ZERO),
        (0xFFFF8000, SIGN_EXTENDED_16),
        (0xFFFF7FFF, UNCOMPRESSED),
        (0x00050003, HALFWORD_BYTES),
        (0x7F7F7F7F, REPEATED_BYTE),
    ])
    def test_pattern_choice(self, word, prefix):
        assert fpc_compress_word(word)[0] == prefix

    def test_encoded_word_sizes(self, asym):
        block = Block.from_words([0, 5, 0x12345678] + [0] * 13, 32)
        result = fpc_encode(block, asym)
        assert len(result.written) == 3 + 7 + 35 + 3 * 13
        assert result.breakdown.metadata_bits == 48
        assert result.detail == "1/16 words uncompressed"
        assert not result.fallback

    def test_all_zero_block(self, asym):
        result = fpc_encode(Block(bytes(64)), asym)
        assert str(result.written) == "0" * 48
        assert result.breakdown.total_cost == 96

    def test_boundary_words_round_trip(self):
        for word in FPC_BOUNDARIES:
            prefix, _, payload = fpc_compress_word(word)
            assert fpc_decode_word(prefix, payload) == word

    def test_random_words_round_trip(self, rng):
        for word in rng.randint(0, 1 << 32, size=20000, dtype="int64").tolist():
            prefix, _, payload = fpc_compress_word(word)
            assert fpc_decode_word(prefix, payload) == word

    @pytest.mark.slow
    def test_million_random_words_round_trip(self, rng):
        words = rng.randint(0, 1 << 32, size=10 ** 6, dtype="int64").tolist()
        assert all(fpc_decode_word(*fpc_compress_word(w)[::2]) == w for w in words)

    def test_block_round_trip(self, asym, random_block):
        blocks = [Block(bytes(64)), Block.from_words(FPC_BOUNDARIES[:16], 32)]
        blocks += [random_block() for _ in range(20)]
        for block in blocks:
            assert fpc_decode(fpc_encode(block, asym)) == block

    def test_uncompressible_block_falls_back(self, asym):
        result = fpc_encode(Block.from_words([0x12345678] * 16, 32), asym)
        assert result.fallback

    def test_truncated_stream(self, asym):
        result = fpc_encode(Block(bytes(64)), asym)
        truncated = BaselineResult("fpc", BitString(str(result.written)[:-1]), result.breakdown)
        with pytest.raises(CorruptStreamError):
            fpc_decode(truncated)


class TestBDI:
    def test_all_zero_block(self, asym):
        result = bdi_encode(Block(bytes(64)), asym)
        assert str(result.written) == "0000"
        assert result.breakdown.total_cost == 8
        assert result.detail == "zeros"

    def test_repeated_value(self, asym):
        block = Block(bytes.fromhex("0102030405060708") * 8)
        result = bdi_encode(block, asym)
        assert result.detail == "repeated"
        assert len(result.written) == 68
        assert bdi_decode(result) == block

    def test_narrow_deltas(self, asym):
        block = counting_block(0x1000)
        result = bdi_encode(block, asym)
        assert result.detail == "base8-delta1"
        assert len(result.written) == 4 + 64 + 64
        assert result.breakdown.metadata_bits == 4
        assert bdi_decode(result) == block

    def test_deltas_wrap_around(self, asym):
        block = counting_block((1 << 64) - 3)
        assert encoding_bits(block, BDI_ENCODINGS[2]) is not None
        assert bdi_decode(bdi_encode(block, asym)) == block

    def test_four_byte_elements(self, asym):
        block = counting_block(0x40000000, count=16, width=4)
        result = bdi_encode(block, asym)
        assert result.detail == "base4-delta1"
        assert bdi_decode(result) == block

    def test_random_blocks_are_stored_uncompressed(self, asym, random_block):
        for _ in range(20):
            block = random_block()
            result = bdi_encode(block, asym)
            assert result.fallback and result.detail == "uncompressed"
            assert bdi_decode(result) == block

    def test_reconstruction_for_every_encoding(self):
        blocks = [counting_block(7), counting_block(0x1234, 16, 4), counting_block(0x100, 32, 2),
                  counting_block(0x8000, 8, 8), Block(bytes.fromhex("00ff") * 32)]
        for block in blocks:
            for encoding in BDI_ENCODINGS:
                bits = encoding_bits(block, encoding)
                if bits is None:
                    continue
                written = BitString(format(encoding.tag, "04b") + bits)
                assert bdi_decode(BaselineResult("bdi", written, ZERO_COST)) == block

    def test_unknown_tag(self):
        with pytest.raises(CorruptStreamError):
            bdi_decode(BaselineResult("bdi", BitString("1000"), ZERO_COST))


class TestBestOf:
    def test_zero_block_picks_bdi(self, asym):
        result = best_of(Block(bytes(64)), ["fpc", "bdi"], asym)
        assert result.codec_id == "fpc+bdi"
        assert result.detail == "bdi: zeros"
        assert result.breakdown.total_cost == 8

    def test_singleton_is_the_member(self, asym, random_block):
        block = random_block()
        assert best_of(block, ["fnw"], asym) == fnw_encode(block, 8, asym)

    def test_cost_is_the_member_minimum(self, asym, random_block):
        members = ["fpc", "bdi", "fnw"]
        for block in [Block(bytes(64)), counting_block(0x1000)] + [random_block() for _ in range(10)]:
            costs = [encode_baseline(m, block, asym).breakdown.total_cost for m in members]
            assert best_of(block, members, asym).breakdown.total_cost == min(costs)

    def test_combined_codec_id(self, asym):
        block = counting_block(0x1000)
        assert encode_baseline("fpc+bdi", block, asym) == best_of(block, ["bdi", "fpc"], asym)

    @pytest.mark.parametrize("codecs", [[], ["lz77"], ["fpc", "vlc"]])
    def test_bad_member_sets(self, asym, codecs):
        with pytest.raises(ValueError):
            best_of(Block(bytes(64)), codecs, asym)

    def test_unknown_baseline(self, asym):
        with pytest.raises(ValueError):
            encode_baseline("lz77", Block(bytes(64)), asym)
        assert "fpc+bdi" in BASELINE_CODECS

    def test_raw(self, asym):
        result = raw_encode(Block(bytes(64)), asym)
        assert result.fallback
        assert result.breakdown.total_cost == 1024
        assert result.breakdown.metadata_bits == 0
