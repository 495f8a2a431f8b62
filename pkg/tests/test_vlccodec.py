from fractions import Fraction

import numpy as np
import pytest

from codebook import Codebook, table1_codebook, validate
from genericclasses import BitString, Block, CorruptStreamError, CostModel, FormatError
from setup_corpus import SetupCorpus
from treeshapes import LEAF, TreeShape
from vlccodec import (MAGIC, EncodedBlock, block_write_cost, decode_block, encode_block, encode_blocks,
                      read_encoded_file, write_encoded_file)

TABLE1 = table1_codebook()


def random_shape(rng, leaves):
    if leaves == 1:
        return LEAF
    split = rng.randint(1, leaves)
    return TreeShape(random_shape(rng, split), random_shape(rng, leaves - split))


def random_codebook(rng):
    """A complete prefix code on a random 16-leaf shape with random edge labels and data word assignment."""
    shape = random_shape(rng, 16)

    def words(node, prefix):
        if node.is_leaf:
            return [prefix]
        flip = rng.randint(2)
        return words(node.left, prefix + str(flip)) + words(node.right, prefix + str(1 - flip))

    codewords = words(shape, "")
    order = rng.permutation(len(codewords))
    return Codebook(4, {int(s): BitString(codewords[i]) for s, i in enumerate(order)})


class TestEncodeBlock:
    def test_all_zero_block(self, asym):
        enc = encode_block(Block(bytes(64)), TABLE1)
        assert enc.encoded and enc.dirty_bit == 1
        assert enc.payload_bits == 384
        assert len(enc.payload) == 48
        breakdown = block_write_cost(enc, asym)
        assert (breakdown.written_zeros, breakdown.written_ones, breakdown.metadata_bits) == (0, 384, 1)
        assert breakdown.total_cost == 385

    def test_flag_excluded(self, asym):
        enc = encode_block(Block(bytes(64)), TABLE1)
        breakdown = block_write_cost(enc, asym, "exclude")
        assert breakdown.total_cost == 384
        assert breakdown.metadata_bits == 0

    def test_long_codewords_fall_back(self, asym):
        block = Block(b"\xdd" * 64)
        enc = encode_block(block, TABLE1)
        assert not enc.encoded and enc.dirty_bit == 0
        assert enc.payload == block.payload
        # six ones and two zeros per byte, plus a dirty bit of 0
        assert block_write_cost(enc, asym).total_cost == 64 * (6 + 2 * 2) + 2

    def test_fallback_needs_a_whole_byte_saved(self):
        # 0000 -> 111 and 1111 -> 0111: 120 ones-nibbles fill exactly 63 bytes
        fits = Block.from_nibbles([15] * 120 + [0] * 8)
        assert encode_block(fits, TABLE1).payload_bits == 504
        assert encode_block(fits, TABLE1).encoded
        too_long = Block.from_nibbles([15] * 121 + [0] * 7)
        assert not encode_block(too_long, TABLE1).encoded

    def test_cost_fallback(self):
        expensive_ones = CostModel(Fraction(1), Fraction(5))
        block = Block(bytes(64))
        assert encode_block(block, TABLE1, expensive_ones).encoded
        enc = encode_block(block, TABLE1, expensive_ones, cost_fallback=True)
        assert not enc.encoded
        assert enc.cost_mode
        assert enc.metadata == 0b10

    def test_cost_fallback_keeps_cheaper_encodings(self, asym):
        enc = encode_block(Block(bytes(64)), TABLE1, asym, cost_fallback=True)
        assert enc.encoded and enc.metadata == 0b11

    def test_bad_flag_policy(self):
        with pytest.raises(ValueError):
            encode_block(Block(bytes(64)), TABLE1, flag_policy="sometimes")

    def test_written_bits_exclude_padding(self):
        enc = encode_block(Block.from_nibbles([0] * 127 + [6]), TABLE1)
        assert enc.payload_bits == 127 * 3 + 5
        assert str(enc.written_bits()).endswith("00001")


class TestDecodeBlock:
    def test_round_trip_small_sample(self, random_block):
        setup = SetupCorpus("zero-heavy:0.7", seed=7)
        blocks = setup.random_blocks(200) + [random_block() for _ in range(50)]
        assert any(encode_block(b, TABLE1).encoded for b in blocks)
        for block in blocks:
            assert decode_block(encode_block(block, TABLE1), TABLE1) == block

    def test_random_codebooks(self, rng, random_block):
        setup = SetupCorpus("zero-heavy:0.6", seed=11)
        blocks = setup.random_blocks(400) + [random_block() for _ in range(100)]
        for _ in range(20):
            book = random_codebook(rng)
            assert validate(book) == []
            for block in blocks:
                assert decode_block(encode_block(block, book), book) == block

    @pytest.mark.slow
    def test_round_trip_hundred_thousand_blocks(self, random_block):
        setup = SetupCorpus("zero-heavy:0.55", seed=3)
        blocks = setup.random_blocks(50000) + [random_block() for _ in range(50000)]
        failures = sum(decode_block(encode_block(b, TABLE1), TABLE1) != b for b in blocks)
        assert failures == 0

    @pytest.mark.slow
    def test_random_codebooks_on_hundred_thousand_blocks(self, rng):
        setup = SetupCorpus("zero-heavy:0.55", seed=13)
        for _ in range(20):
            book = random_codebook(rng)
            uniform = rng.randint(0, 256, size=(50000, 64)).astype(np.uint8)
            blocks = setup.random_blocks(50000) + [Block(row.tobytes()) for row in uniform]
            failures = sum(decode_block(encode_block(b, book), book) != b for b in blocks)
            assert failures == 0

    def test_codewords_too_long_for_the_table_decoder(self):
        # 0000 -> 0, 0001 -> 10, ..., 1110 -> 1{14}0, 1111 -> 1{17}
        words = {s: BitString("1" * s + "0") for s in range(15)}
        words[15] = BitString("1" * 17)
        book = Codebook(4, words)
        assert book.window_decoder() is None
        block = Block.from_nibbles([15] * 4 + [3, 14] + [0] * 122)
        enc = encode_block(block, book)
        assert enc.encoded
        assert decode_block(enc, book) == block

    def test_table_decoder(self):
        table, longest = TABLE1.window_decoder()
        assert longest == 5 and len(table) == 32
        assert table[0b11100] == table[0b11111] == (0, 3)
        assert table[0b00001] == (6, 5)
        assert None not in table

    def test_stream_ending_inside_a_codeword(self):
        with pytest.raises(CorruptStreamError):
            decode_block(EncodedBlock(True, b"\x00", 4), TABLE1)

    def test_leftover_bits(self):
        text = "111" * 128 + "1"
        enc = EncodedBlock(True, BitString(text).to_bytes(), len(text))
        with pytest.raises(CorruptStreamError):
            decode_block(enc, TABLE1)

    def test_unmatched_bits(self):
        # nothing is assigned to 0000 or 0001
        book = Codebook(4, {s: BitString(format(s + 2, "04b")) for s in range(14)})
        with pytest.raises(CorruptStreamError):
            decode_block(EncodedBlock(True, b"\x00" * 60, 480), book)

    def test_invalid_encoded_blocks(self):
        with pytest.raises(CorruptStreamError):
            EncodedBlock(True, bytes(64), 512)
        with pytest.raises(CorruptStreamError):
            EncodedBlock(False, bytes(10), 80)


class TestEncodedFile:
    def test_round_trip(self, tmp_path, random_block):
        blocks = [Block(bytes(64)), Block(b"\xdd" * 64), random_block()]
        encoded = list(encode_blocks(blocks, TABLE1))
        path = str(tmp_path / "blocks.avlc")
        assert write_encoded_file(path, encoded) == 3
        restored = read_encoded_file(path)
        assert restored == encoded
        assert [decode_block(e, TABLE1) for e in restored] == blocks

    def test_layout(self, tmp_path):
        path = tmp_path / "blocks.avlc"
        write_encoded_file(str(path), [encode_block(Block(bytes(64)), TABLE1)])
        data = path.read_bytes()
        assert data[:5] == MAGIC
        assert data[5:9] == (1).to_bytes(4, "little")
        assert data[9] == 1
        assert data[10:12] == (384).to_bytes(2, "little")
        assert len(data) == 12 + 48

    @pytest.mark.parametrize("damage", ["magic", "truncated", "reserved", "trailing"])
    def test_damaged_files(self, tmp_path, damage):
        path = tmp_path / "blocks.avlc"
        write_encoded_file(str(path), [encode_block(Block(bytes(64)), TABLE1)])
        data = bytearray(path.read_bytes())
        if damage == "magic":
            data[0] ^= 0xFF
        elif damage == "truncated":
            data = data[:-1]
        elif damage == "reserved":
            data[9] |= 0x80
        else:
            data += b"\x00"
        path.write_bytes(bytes(data))
        with pytest.raises(FormatError):
            read_encoded_file(str(path))
