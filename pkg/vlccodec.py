"""Variable-length encoding of memory blocks with a 4-bit codebook.

A block is split into 4-bit data words in storage order and every word is replaced by its codeword. If the result,
rounded up to whole bytes, is smaller than the block it is stored left-aligned with a dirty bit of 1; the bits after
payload_bits in the last byte are don't-cares, stored as 0 and never costed. Otherwise the raw block is stored with a
dirty bit of 0.

Encoded file layout (little-endian): b"AVLC1", u32 block count, then per block one metadata byte (bit 0 dirty bit,
bit 1 cost-fallback marker, other bits 0), u16 payload_bits and ceil(payload_bits / 8) payload bytes."""

import dataclasses
import struct
from typing import Iterable, Iterator, List

from genericclasses import (BLOCK_BYTES, BitString, Block, CorruptStreamError, CostBreakdown, CostModel,
                            FormatError, UnsupportedSizeError)
from codebook import Codebook

MAGIC = b"AVLC1"
FLAG_POLICIES = ("include", "exclude")
DIRTY_BIT = 0x01
COST_MODE_BIT = 0x02


@dataclasses.dataclass(frozen=True)
class EncodedBlock:
    encoded: bool
    payload: bytes
    payload_bits: int
    cost_mode: bool = False
    block_bytes: int = BLOCK_BYTES

    def __post_init__(self):
        block_bits = 8 * self.block_bytes
        if self.encoded:
            if self.payload_bits > block_bits - 8 or len(self.payload) != -(-self.payload_bits // 8):
                raise CorruptStreamError(f"Encoded payload of {self.payload_bits} bits in {len(self.payload)} bytes "
                                         f"does not fit a {self.block_bytes}-byte block")
        elif self.payload_bits != block_bits or len(self.payload) != self.block_bytes:
            raise CorruptStreamError(f"Raw block must carry {self.block_bytes} bytes, got {len(self.payload)} bytes "
                                     f"and payload_bits {self.payload_bits}")

    @property
    def dirty_bit(self) -> int:
        return 1 if self.encoded else 0

    @property
    def metadata(self) -> int:
        return (DIRTY_BIT if self.encoded else 0) | (COST_MODE_BIT if self.cost_mode else 0)

    def written_bits(self) -> BitString:
        """The payload bits that are programmed, padding excluded."""
        return BitString.from_bytes(self.payload, self.payload_bits)


def _check_policy(flag_policy: str) -> None:
    if flag_policy not in FLAG_POLICIES:
        raise ValueError(f"flag_policy must be one of {FLAG_POLICIES}, got {flag_policy!r}")


def encode_bits(block: Block, book: Codebook) -> str:
    """Codewords of every 4-bit data word of block, concatenated."""
    if book.symbol_bits != 4:
        raise UnsupportedSizeError(f"Blocks are encoded with 4-bit data words, codebook has {book.symbol_bits}")
    words = book.codeword_strings()
    return "".join([words[n] for n in block.nibbles().tolist()])


def encode_block(block: Block, book: Codebook, model: CostModel = None, flag_policy: str = "include",
                 cost_fallback: bool = False) -> EncodedBlock:
    """Encode block, falling back to the raw block unless the code saves at least one byte. With cost_fallback the
    encoded form must also be strictly cheaper to write than the raw form under model."""
    _check_policy(flag_policy)
    text = encode_bits(block, book)
    block_bytes = len(block.payload)
    fits = -(-len(text) // 8) < block_bytes
    if fits and cost_fallback:
        if model is None:
            raise ValueError("cost_fallback needs a cost model")
        encoded_cost = model.cost(text.count("0"), text.count("1"))
        raw_bits = block.bits()
        raw_cost = model.cost(raw_bits.zeros(), raw_bits.ones())
        if flag_policy == "include":
            encoded_cost += model.bit_cost(1)
            raw_cost += model.bit_cost(0)
        fits = encoded_cost < raw_cost
    if fits:
        return EncodedBlock(True, BitString(text).to_bytes(), len(text), cost_fallback, block_bytes)
    return EncodedBlock(False, block.payload, 8 * block_bytes, cost_fallback, block_bytes)


def decode_block(enc: EncodedBlock, book: Codebook) -> Block:
    if not enc.encoded:
        return Block(enc.payload)
    if book.symbol_bits != 4:
        raise UnsupportedSizeError(f"Blocks are encoded with 4-bit data words, codebook has {book.symbol_bits}")
    expected = 2 * enc.block_bytes
    window = book.window_decoder()
    if window is not None:
        return Block.from_nibbles(_decode_with_table(enc, window, expected))
    text = str(enc.written_bits())
    table, shortest, longest = book.decoder()
    nibbles = []
    pos = 0
    end = len(text)
    while len(nibbles) < expected:
        for length in range(shortest, longest + 1):
            if pos + length > end:
                raise CorruptStreamError(f"Stream ends inside a codeword after {len(nibbles)} of {expected} "
                                         f"data words")
            symbol = table.get(text[pos: pos + length])
            if symbol is not None:
                nibbles.append(symbol)
                pos += length
                break
        else:
            raise CorruptStreamError(f"No codeword matches the bits at offset {pos}")
    if pos != end:
        raise CorruptStreamError(f"{end - pos} bits left over after {expected} data words")
    return Block.from_nibbles(nibbles)


def _decode_with_table(enc: EncodedBlock, window, expected: int) -> List[int]:
    table, longest = window
    end = enc.payload_bits
    # the stream, left-aligned, followed by `longest` zero bits so the last window is always full
    stream = (int.from_bytes(enc.payload, "big") >> (8 * len(enc.payload) - end)) << longest
    mask = (1 << longest) - 1
    nibbles = []
    pos = 0
    while len(nibbles) < expected:
        entry = table[(stream >> (end - pos)) & mask]
        if entry is None:
            raise CorruptStreamError(f"No codeword matches the bits at offset {pos}")
        symbol, length = entry
        if pos + length > end:
            raise CorruptStreamError(f"Stream ends inside a codeword after {len(nibbles)} of {expected} data words")
        nibbles.append(symbol)
        pos += length
    if pos != end:
        raise CorruptStreamError(f"{end - pos} bits left over after {expected} data words")
    return nibbles


def block_write_cost(enc: EncodedBlock, model: CostModel, flag_policy: str = "include") -> CostBreakdown:
    """Cost of the programmed payload bits, plus the dirty bit at its actual value when flag_policy is include."""
    _check_policy(flag_policy)
    bits = enc.written_bits()
    if flag_policy == "include":
        return CostBreakdown.from_counts(bits.zeros(), bits.ones(), model, model.bit_cost(enc.dirty_bit), 1)
    return CostBreakdown.from_counts(bits.zeros(), bits.ones(), model)


def encode_blocks(blocks: Iterable[Block], book: Codebook, model: CostModel = None, flag_policy: str = "include",
                  cost_fallback: bool = False) -> Iterator[EncodedBlock]:
    for block in blocks:
        yield encode_block(block, book, model, flag_policy, cost_fallback)


def write_encoded_file(path: str, encoded: Iterable[EncodedBlock]) -> int:
    encoded = list(encoded)
    with open(path, "wb") as wfile:
        wfile.write(MAGIC)
        wfile.write(struct.pack("<I", len(encoded)))
        for enc in encoded:
            wfile.write(struct.pack("<BH", enc.metadata, enc.payload_bits))
            wfile.write(enc.payload)
    return len(encoded)


def read_encoded_file(path: str, block_bytes: int = BLOCK_BYTES) -> List[EncodedBlock]:
    with open(path, "rb") as rfile:
        data = rfile.read()
    if data[: len(MAGIC)] != MAGIC:
        raise FormatError(f"{path}: not an encoded block file (bad magic)")
    pos = len(MAGIC)
    if len(data) < pos + 4:
        raise FormatError(f"{path}: truncated header")
    (count,) = struct.unpack_from("<I", data, pos)
    pos += 4
    blocks = []
    for index in range(count):
        if len(data) < pos + 3:
            raise FormatError(f"{path}: truncated at block {index}")
        metadata, payload_bits = struct.unpack_from("<BH", data, pos)
        pos += 3
        if metadata & ~(DIRTY_BIT | COST_MODE_BIT):
            raise FormatError(f"{path}: block {index} sets reserved metadata bits ({metadata:#04x})")
        size = -(-payload_bits // 8)
        if len(data) < pos + size:
            raise FormatError(f"{path}: payload of block {index} is truncated")
        blocks.append(EncodedBlock(bool(metadata & DIRTY_BIT), data[pos: pos + size], payload_bits,
                                   bool(metadata & COST_MODE_BIT), block_bytes))
        pos += size
    if pos != len(data):
        raise FormatError(f"{path}: {len(data) - pos} trailing bytes after {count} blocks")
    return blocks
