"""Flip-N-Write by programming cost: every word is stored as is (flag 0) or complemented (flag 1), whichever costs
less to write under the cost model, the flag's own value included. Equal costs pick the branch writing more ones.

The written stream holds the stored words in order followed by one flag per word."""

import numpy as np

from genericclasses import BaselineResult, BitString, Block, CostBreakdown, CostModel, UnsupportedSizeError

FNW_WORD_BITS = (4, 8, 16, 32)


def _word_bits_matrix(block: Block, word_bits: int) -> np.ndarray:
    if word_bits not in FNW_WORD_BITS:
        raise UnsupportedSizeError(f"FNW word size must be one of {FNW_WORD_BITS}, got {word_bits}")
    if block.bit_length % word_bits:
        raise UnsupportedSizeError(f"{word_bits}-bit words do not tile a {block.bit_length}-bit block")
    bits = np.unpackbits(np.frombuffer(block.payload, dtype=np.uint8))
    return bits.reshape(block.bit_length // word_bits, word_bits)


def flip_decisions(block: Block, word_bits: int, model: CostModel, flag_policy: str = "include") -> np.ndarray:
    """True for every word stored complemented."""
    matrix = _word_bits_matrix(block, word_bits)
    c0, c1, _ = model.scaled()
    ones = matrix.sum(axis=1).astype(np.int64)
    zeros = word_bits - ones
    keep = zeros * c0 + ones * c1
    flip = ones * c0 + zeros * c1
    if flag_policy == "include":
        keep = keep + c0
        flip = flip + c1
    return (flip < keep) | ((flip == keep) & (zeros > ones))


def fnw_encode(block: Block, word_bits: int, model: CostModel, flag_policy: str = "include") -> BaselineResult:
    if flag_policy not in ("include", "exclude"):
        raise ValueError(f"flag_policy must be include or exclude, got {flag_policy!r}")
    matrix = _word_bits_matrix(block, word_bits)
    flips = flip_decisions(block, word_bits, model, flag_policy)
    stored = matrix ^ flips[:, None].astype(np.uint8)
    ones = int(stored.sum())
    zeros = stored.size - ones
    flags = flips.astype(np.uint8)
    data_text = (stored.reshape(-1) + ord("0")).tobytes().decode("ascii")
    flag_text = (flags + ord("0")).tobytes().decode("ascii")
    if flag_policy == "include":
        flag_ones = int(flags.sum())
        flag_cost = model.cost(len(flags) - flag_ones, flag_ones)
        breakdown = CostBreakdown.from_counts(zeros, ones, model, flag_cost, len(flags))
    else:
        breakdown = CostBreakdown.from_counts(zeros, ones, model)
    return BaselineResult("fnw", BitString(data_text + flag_text), breakdown,
                          detail=f"{int(flags.sum())}/{len(flags)} words flipped")


def fnw_decode(result: BaselineResult, word_bits: int = 8, block_bytes: int = 64) -> Block:
    data_bits = 8 * block_bytes
    text = str(result.written)
    words = data_bits // word_bits
    if len(text) != data_bits + words:
        raise ValueError(f"FNW stream of {len(text)} bits does not hold {words} {word_bits}-bit words and flags")
    stored = np.frombuffer(text[:data_bits].encode("ascii"), dtype=np.uint8) - ord("0")
    flags = np.frombuffer(text[data_bits:].encode("ascii"), dtype=np.uint8) - ord("0")
    original = stored.reshape(words, word_bits) ^ flags[:, None]
    return Block(np.packbits(original.reshape(-1)).tobytes())

