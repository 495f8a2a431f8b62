"""Base-Delta-Immediate compression with a single explicit base.

The block is viewed as big-endian elements of base_bytes bytes. The base is the first element and every element,
the first included, is stored as its delta from the base, wrapping modulo the element width, in delta_bytes signed
bytes. Each encoding is preceded by a 4-bit tag, which is costed as metadata. Among the encodings that represent the
block exactly, the one cheapest to write is chosen, the earlier one in BDI_ENCODINGS on equal costs."""

import dataclasses
from typing import List, Optional, Tuple

import numpy as np

from genericclasses import (BaselineResult, BitString, Block, CorruptStreamError, CostBreakdown, CostModel,
                            UnsupportedSizeError)

TAG_BITS = 4


@dataclasses.dataclass(frozen=True)
class BDIEncoding:
    name: str
    tag: int
    base_bytes: int
    delta_bytes: int


ZEROS = BDIEncoding("zeros", 0b0000, 0, 0)
REPEATED = BDIEncoding("repeated", 0b0001, 8, 0)
UNCOMPRESSED = BDIEncoding("uncompressed", 0b1111, 0, 0)

BDI_ENCODINGS = (
    ZEROS,
    REPEATED,
    BDIEncoding("base8-delta1", 0b0010, 8, 1),
    BDIEncoding("base8-delta2", 0b0011, 8, 2),
    BDIEncoding("base8-delta4", 0b0100, 8, 4),
    BDIEncoding("base4-delta1", 0b0101, 4, 1),
    BDIEncoding("base4-delta2", 0b0110, 4, 2),
    BDIEncoding("base2-delta1", 0b0111, 2, 1),
    UNCOMPRESSED,
)
_BY_TAG = {e.tag: e for e in BDI_ENCODINGS}


def _elements(payload: bytes, base_bytes: int) -> List[int]:
    return np.frombuffer(payload, dtype=np.dtype(f">u{base_bytes}")).tolist()


def _deltas(payload: bytes, encoding: BDIEncoding) -> Optional[Tuple[int, List[int]]]:
    """Base and the delta_bytes-wide two's complement deltas, or None when some delta does not fit."""
    values = _elements(payload, encoding.base_bytes)
    width = 8 * encoding.base_bytes
    base = values[0]
    wrapped = [(v - base) % (1 << width) for v in values]
    signed = [d - (1 << width) if d >> (width - 1) else d for d in wrapped]
    delta_width = 8 * encoding.delta_bytes
    if not all(-(1 << (delta_width - 1)) <= d < 1 << (delta_width - 1) for d in signed):
        return None
    return base, [d & ((1 << delta_width) - 1) for d in signed]


def encoding_bits(block: Block, encoding: BDIEncoding) -> Optional[str]:
    """The data bits of block under encoding (tag excluded), or None when encoding cannot represent block."""
    payload = block.payload
    if encoding is ZEROS:
        return "" if not any(payload) else None
    if encoding is UNCOMPRESSED:
        return str(block.bits())
    if len(payload) % encoding.base_bytes:
        return None
    if encoding is REPEATED:
        if len(set(payload[i: i + 8] for i in range(0, len(payload), 8))) != 1:
            return None
        return str(BitString.from_bytes(payload[:8]))
    found = _deltas(payload, encoding)
    if found is None:
        return None
    base, deltas = found
    delta_width = 8 * encoding.delta_bytes
    return format(base, f"0{8 * encoding.base_bytes}b") + "".join(format(d, f"0{delta_width}b") for d in deltas)


def bdi_encode(block: Block, model: CostModel) -> BaselineResult:
    best = None
    for encoding in BDI_ENCODINGS:
        bits = encoding_bits(block, encoding)
        if bits is None:
            continue
        tag = format(encoding.tag, f"0{TAG_BITS}b")
        tag_ones = tag.count("1")
        ones = bits.count("1")
        breakdown = CostBreakdown.from_counts(len(bits) - ones, ones, model,
                                              model.cost(TAG_BITS - tag_ones, tag_ones), TAG_BITS)
        if best is None or breakdown.total_cost < best[0].total_cost:
            best = (breakdown, encoding, tag + bits)
    breakdown, encoding, text = best
    return BaselineResult("bdi", BitString(text), breakdown, fallback=encoding is UNCOMPRESSED, detail=encoding.name)


def bdi_decode(result: BaselineResult, block_bytes: int = 64) -> Block:
    text = str(result.written)
    if len(text) < TAG_BITS:
        raise CorruptStreamError("BDI stream is shorter than its tag")
    encoding = _BY_TAG.get(int(text[:TAG_BITS], 2))
    if encoding is None:
        raise CorruptStreamError(f"Unknown BDI tag {text[:TAG_BITS]}")
    body = text[TAG_BITS:]
    if encoding is ZEROS:
        expected = 0
    elif encoding is UNCOMPRESSED:
        expected = 8 * block_bytes
    elif encoding is REPEATED:
        expected = 64
    else:
        if block_bytes % encoding.base_bytes:
            raise UnsupportedSizeError(f"{encoding.name} does not tile a {block_bytes}-byte block")
        expected = 8 * encoding.base_bytes + 8 * encoding.delta_bytes * (block_bytes // encoding.base_bytes)
    if len(body) != expected:
        raise CorruptStreamError(f"{encoding.name} needs {expected} bits after the tag, got {len(body)}")

    if encoding is ZEROS:
        return Block(bytes(block_bytes))
    if encoding is UNCOMPRESSED:
        return Block(BitString(body).to_bytes())
    if encoding is REPEATED:
        return Block(BitString(body).to_bytes() * (block_bytes // 8))
    width = 8 * encoding.base_bytes
    delta_width = 8 * encoding.delta_bytes
    base = int(body[:width], 2)
    values = []
    for pos in range(width, len(body), delta_width):
        delta = int(body[pos: pos + delta_width], 2)
        if delta >> (delta_width - 1):
            delta -= 1 << delta_width
        values.append((base + delta) % (1 << width))
    return Block(b"".join(v.to_bytes(encoding.base_bytes, "big") for v in values))
