"""Frequent Pattern Compression, one 32-bit word at a time.

Each word is written as a 3-bit prefix naming its pattern followed by the pattern's payload. The prefixes are
metadata, the payloads are data. A word matching several patterns takes the one with the shortest payload, the
lower prefix on equal payloads. Whatever is left of the line after the last word is never programmed."""

from typing import List, Tuple

from genericclasses import BaselineResult, BitString, Block, CorruptStreamError, CostBreakdown, CostModel

WORD_BITS = 32
PREFIX_BITS = 3

ZERO_WORD = 0b000
SIGN_EXTENDED_4 = 0b001
SIGN_EXTENDED_8 = 0b010
SIGN_EXTENDED_16 = 0b011
UPPER_HALF_ZERO = 0b100
HALFWORD_BYTES = 0b101
REPEATED_BYTE = 0b110
UNCOMPRESSED = 0b111

PAYLOAD_BITS = {
    ZERO_WORD: 0,
    SIGN_EXTENDED_4: 4,
    SIGN_EXTENDED_8: 8,
    SIGN_EXTENDED_16: 16,
    UPPER_HALF_ZERO: 16,
    HALFWORD_BYTES: 16,
    REPEATED_BYTE: 8,
    UNCOMPRESSED: 32,
}


def _signed(value: int, bits: int) -> int:
    return value - (1 << bits) if value & (1 << (bits - 1)) else value


def _fits_signed(value: int, bits: int, width: int) -> bool:
    """True when the width-bit word value is the sign extension of its low `bits` bits."""
    return -(1 << (bits - 1)) <= _signed(value, width) < 1 << (bits - 1)


def fpc_compress_word(word: int) -> Tuple[int, int, int]:
    """Accepts:
        word: Type int. An unsigned 32-bit value.
    Returns: (prefix, payload width in bits, payload value)."""
    if not 0 <= word < 1 << WORD_BITS:
        raise ValueError(f"FPC works on unsigned 32-bit words, got {word}")
    matches = []
    if word == 0:
        matches.append((ZERO_WORD, 0))
    for prefix, bits in ((SIGN_EXTENDED_4, 4), (SIGN_EXTENDED_8, 8), (SIGN_EXTENDED_16, 16)):
        if _fits_signed(word, bits, WORD_BITS):
            matches.append((prefix, word & ((1 << bits) - 1)))
    if word >> 16 == 0:
        matches.append((UPPER_HALF_ZERO, word))
    high, low = word >> 16, word & 0xFFFF
    if _fits_signed(high, 8, 16) and _fits_signed(low, 8, 16):
        matches.append((HALFWORD_BYTES, ((high & 0xFF) << 8) | (low & 0xFF)))
    if word == (word & 0xFF) * 0x01010101:
        matches.append((REPEATED_BYTE, word & 0xFF))
    matches.append((UNCOMPRESSED, word))
    prefix, payload = min(matches, key=lambda m: (PAYLOAD_BITS[m[0]], m[0]))
    return prefix, PAYLOAD_BITS[prefix], payload


def fpc_decode_word(prefix: int, payload: int) -> int:
    if prefix == ZERO_WORD:
        return 0
    if prefix in (SIGN_EXTENDED_4, SIGN_EXTENDED_8, SIGN_EXTENDED_16):
        return _signed(payload, PAYLOAD_BITS[prefix]) & 0xFFFFFFFF
    if prefix == UPPER_HALF_ZERO:
        return payload
    if prefix == HALFWORD_BYTES:
        high = _signed(payload >> 8, 8) & 0xFFFF
        low = _signed(payload & 0xFF, 8) & 0xFFFF
        return (high << 16) | low
    if prefix == REPEATED_BYTE:
        return payload * 0x01010101
    if prefix == UNCOMPRESSED:
        return payload
    raise CorruptStreamError(f"Unknown FPC prefix {prefix}")


def fpc_encode(block: Block, model: CostModel) -> BaselineResult:
    pieces: List[str] = []
    data_zeros = data_ones = 0
    prefix_zeros = prefix_ones = 0
    words = block.words(WORD_BITS)
    uncompressed = 0
    for word in words:
        prefix, bits, payload = fpc_compress_word(word)
        prefix_text = format(prefix, f"0{PREFIX_BITS}b")
        payload_text = format(payload, f"0{bits}b") if bits else ""
        prefix_ones += prefix_text.count("1")
        prefix_zeros += PREFIX_BITS - prefix_text.count("1")
        data_ones += payload_text.count("1")
        data_zeros += bits - payload_text.count("1")
        uncompressed += prefix == UNCOMPRESSED
        pieces.append(prefix_text)
        pieces.append(payload_text)
    breakdown = CostBreakdown.from_counts(data_zeros, data_ones, model, model.cost(prefix_zeros, prefix_ones),
                                          PREFIX_BITS * len(words))
    return BaselineResult("fpc", BitString("".join(pieces)), breakdown, fallback=uncompressed == len(words),
                          detail=f"{uncompressed}/{len(words)} words uncompressed")


def fpc_decode(result: BaselineResult, block_bytes: int = 64) -> Block:
    text = str(result.written)
    words = []
    pos = 0
    for index in range(8 * block_bytes // WORD_BITS):
        if pos + PREFIX_BITS > len(text):
            raise CorruptStreamError(f"FPC stream ends before word {index}")
        prefix = int(text[pos: pos + PREFIX_BITS], 2)
        pos += PREFIX_BITS
        bits = PAYLOAD_BITS[prefix]
        if pos + bits > len(text):
            raise CorruptStreamError(f"FPC stream ends inside the payload of word {index}")
        payload = int(text[pos: pos + bits], 2) if bits else 0
        pos += bits
        words.append(fpc_decode_word(prefix, payload))
    if pos != len(text):
        raise CorruptStreamError(f"{len(text) - pos} bits left over after {len(words)} FPC words")
    return Block.from_words(words, WORD_BITS)
