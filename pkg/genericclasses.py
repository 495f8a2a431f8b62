"""Shared value types and the error hierarchy. Every other module builds on these.

Bits are always MSB-first within a byte and bytes are in address order. A block's data word i (for 4-bit words)
is therefore the high nibble of byte i // 2 when i is even and the low nibble when i is odd."""

import dataclasses
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

BLOCK_BYTES = 64
BLOCK_BITS = 8 * BLOCK_BYTES

Rational = Union[int, Fraction]


class VLCError(Exception):
    """Base class of all errors raised by this package."""


class DataError(VLCError):
    """Input data is well-formed on the surface but cannot be used (exit code 2 on the command line)."""


class EmptyDistributionError(DataError):
    pass


class UnsupportedSizeError(DataError):
    pass


class NoFeasibleCodeError(DataError):
    pass


class NoCrossoverError(DataError):
    pass


class CorruptStreamError(DataError):
    pass


class CodebookError(DataError):
    pass


class FormatError(DataError):
    pass


class MissingCodebookError(DataError):
    pass


class EmptyCorpusError(DataError):
    pass


class CorpusIOError(OSError):
    """A corpus file could not be read. The message always names the path."""


class BitString:
    """Immutable sequence of bits. Stored as a str of '0'/'1' characters, which keeps counting and slicing in C."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Union[str, Sequence[int], "BitString"] = ""):
        if isinstance(bits, BitString):
            text = bits._bits
        elif isinstance(bits, str):
            text = bits
        else:
            text = "".join("1" if b else "0" for b in bits)
        if text.strip("01"):
            raise ValueError(f"BitString accepts only '0' and '1', got {text!r}")
        self._bits = text

    @classmethod
    def from_bytes(cls, data: bytes, bit_count: Optional[int] = None) -> "BitString":
        """Bits of data MSB-first, optionally truncated to the first bit_count bits."""
        array = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
        if bit_count is not None:
            if bit_count > len(array):
                raise ValueError(f"bit_count {bit_count} exceeds the {len(array)} bits available")
            array = array[:bit_count]
        return cls((array + ord("0")).tobytes().decode("ascii"))

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitString":
        if width == 0:
            return cls("")
        if not 0 <= value < 1 << width:
            raise ValueError(f"{value} does not fit in {width} unsigned bits")
        return cls(format(value, f"0{width}b"))

    def to_bytes(self) -> bytes:
        """Pack into bytes, padding the final byte with 0 bits."""
        if not self._bits:
            return b""
        array = np.frombuffer(self._bits.encode("ascii"), dtype=np.uint8) - ord("0")
        return np.packbits(array).tobytes()

    def to_int(self) -> int:
        return int(self._bits, 2) if self._bits else 0

    def zeros(self) -> int:
        return self._bits.count("0")

    def ones(self) -> int:
        return self._bits.count("1")

    def startswith(self, other: "BitString") -> bool:
        return self._bits.startswith(str(other))

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self) -> Iterator[int]:
        return (1 if c == "1" else 0 for c in self._bits)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return BitString(self._bits[item])
        return 1 if self._bits[item] == "1" else 0

    def __add__(self, other: "BitString") -> "BitString":
        return BitString(self._bits + str(other))

    def __eq__(self, other) -> bool:
        if isinstance(other, BitString):
            return self._bits == other._bits
        if isinstance(other, str):
            return self._bits == other
        return NotImplemented

    def __lt__(self, other: "BitString") -> bool:
        return self._bits < str(other)

    def __hash__(self) -> int:
        return hash(self._bits)

    def __str__(self) -> str:
        return self._bits

    def __repr__(self) -> str:
        return f"BitString({self._bits!r})"


@dataclasses.dataclass(frozen=True)
class CostModel:
    """Per-bit write costs: alpha0 for every written 0, alpha1 for every written 1. Exact rationals."""

    alpha0: Fraction
    alpha1: Fraction

    def __post_init__(self):
        alpha0, alpha1 = Fraction(self.alpha0), Fraction(self.alpha1)
        if alpha0 < 0 or alpha1 < 0:
            raise ValueError(f"Write costs must be nonnegative, got alpha0={alpha0}, alpha1={alpha1}")
        if alpha0 == 0 and alpha1 == 0:
            raise ValueError("At least one of alpha0, alpha1 must be strictly positive")
        object.__setattr__(self, "alpha0", alpha0)
        object.__setattr__(self, "alpha1", alpha1)

    def bit_cost(self, bit: int) -> Fraction:
        return self.alpha1 if bit else self.alpha0

    def cost(self, zeros: int, ones: int) -> Fraction:
        return zeros * self.alpha0 + ones * self.alpha1

    def scaled(self) -> Tuple[int, int, int]:
        """Integer costs (c0, c1) and the common denominator d with alpha0 = c0/d, alpha1 = c1/d."""
        denominator = self.alpha0.denominator * self.alpha1.denominator
        return (int(self.alpha0 * denominator), int(self.alpha1 * denominator), denominator)

    def __str__(self) -> str:
        return f"alpha0={self.alpha0} alpha1={self.alpha1}"


@dataclasses.dataclass(frozen=True)
class Block:
    """One memory block. payload holds the bytes as stored; valid_bytes < len(payload) marks a final partial block
    of a corpus whose tail was zero-padded."""

    payload: bytes
    valid_bytes: Optional[int] = None

    def __post_init__(self):
        payload = bytes(self.payload)
        if len(payload) == 0 or len(payload) % 8:
            raise ValueError(f"Block payload must be a positive multiple of 8 bytes, got {len(payload)}")
        valid = len(payload) if self.valid_bytes is None else self.valid_bytes
        if not 0 <= valid <= len(payload):
            raise ValueError(f"valid_bytes {valid} outside [0, {len(payload)}]")
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "valid_bytes", valid)

    @property
    def padded(self) -> bool:
        return self.valid_bytes < len(self.payload)

    @property
    def bit_length(self) -> int:
        return 8 * len(self.payload)

    def bits(self) -> BitString:
        return BitString.from_bytes(self.payload)

    def symbols(self, symbol_bits: int = 4, valid_only: bool = False) -> np.ndarray:
        """Data words of symbol_bits bits in storage order. symbol_bits must divide 8."""
        if symbol_bits not in (1, 2, 4, 8):
            raise UnsupportedSizeError(f"Data words of {symbol_bits} bits do not tile a byte")
        data = np.frombuffer(self.payload[: self.valid_bytes] if valid_only else self.payload, dtype=np.uint8)
        per_byte = 8 // symbol_bits
        shifts = np.arange(8 - symbol_bits, -1, -symbol_bits).astype(np.uint8)
        mask = (1 << symbol_bits) - 1
        return ((data[:, None] >> shifts[None, :]) & mask).reshape(len(data) * per_byte).astype(np.uint8)

    def nibbles(self) -> np.ndarray:
        return self.symbols(4)

    def words(self, word_bits: int) -> Sequence[int]:
        """Big-endian unsigned words of word_bits bits (a multiple of 4 that divides the block)."""
        if word_bits % 4 or self.bit_length % word_bits:
            raise UnsupportedSizeError(f"{word_bits}-bit words do not tile a {self.bit_length}-bit block")
        digits = word_bits // 4
        text = self.payload.hex()
        return [int(text[i: i + digits], 16) for i in range(0, len(text), digits)]

    @classmethod
    def from_words(cls, words: Sequence[int], word_bits: int) -> "Block":
        digits = word_bits // 4
        return cls(bytes.fromhex("".join(format(w, f"0{digits}x") for w in words)))

    @classmethod
    def from_nibbles(cls, nibbles: Sequence[int]) -> "Block":
        array = np.asarray(nibbles, dtype=np.uint8)
        if len(array) % 2:
            raise ValueError("An odd number of nibbles does not fill whole bytes")
        return cls(((array[0::2] << 4) | array[1::2]).astype(np.uint8).tobytes())


@dataclasses.dataclass(frozen=True)
class FrequencyTable:
    """One weight per data word of symbol_bits bits, indexed by the data word's value."""

    symbol_bits: int
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        if self.symbol_bits < 1:
            raise ValueError(f"symbol_bits must be positive, got {self.symbol_bits}")
        if len(weights) != 1 << self.symbol_bits:
            raise ValueError(f"A {self.symbol_bits}-bit table needs {1 << self.symbol_bits} weights, "
                             f"got {len(weights)}")
        if any(w < 0 for w in weights):
            raise ValueError("Frequency weights must be nonnegative")
        object.__setattr__(self, "weights", weights)

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @property
    def symbol_count(self) -> int:
        return len(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, symbol: int) -> Fraction:
        return self.weights[symbol]


@dataclasses.dataclass(frozen=True)
class CostBreakdown:
    """Write-cost accounting for one block or an aggregate. written_zeros/written_ones count data bits only;
    metadata bits (flags, prefixes, tags) are counted in metadata_bits and costed in flag_bits_cost."""

    written_zeros: int
    written_ones: int
    flag_bits_cost: Fraction
    total_cost: Fraction
    metadata_bits: int = 0

    @classmethod
    def from_counts(cls, zeros: int, ones: int, model: CostModel, flag_bits_cost: Rational = 0,
                    metadata_bits: int = 0) -> "CostBreakdown":
        flag_bits_cost = Fraction(flag_bits_cost)
        return cls(written_zeros=zeros, written_ones=ones, flag_bits_cost=flag_bits_cost,
                   total_cost=model.cost(zeros, ones) + flag_bits_cost, metadata_bits=metadata_bits)

    @property
    def written_bits(self) -> int:
        return self.written_zeros + self.written_ones

    def __add__(self, other: "CostBreakdown") -> "CostBreakdown":
        return CostBreakdown(written_zeros=self.written_zeros + other.written_zeros,
                             written_ones=self.written_ones + other.written_ones,
                             flag_bits_cost=self.flag_bits_cost + other.flag_bits_cost,
                             total_cost=self.total_cost + other.total_cost,
                             metadata_bits=self.metadata_bits + other.metadata_bits)


ZERO_COST = CostBreakdown(0, 0, Fraction(0), Fraction(0), 0)


@dataclasses.dataclass(frozen=True)
class BaselineResult:
    """What a codec writes for one block. written holds every programmed bit, data and metadata (flags,
    prefixes or tags), in the codec's own layout; breakdown costs both. fallback marks a block stored uncompressed."""

    codec_id: str
    written: BitString
    breakdown: CostBreakdown
    fallback: bool = False
    detail: str = ""
