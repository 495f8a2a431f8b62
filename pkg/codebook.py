"""Prefix codes mapping k-bit data words to variable-length codewords, their expected cost, and the codebook file
format: one line per entry, `<binary dataword> <binary codeword>`, `#` starting a comment."""

import dataclasses
import os
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from genericclasses import BitString, CodebookError, CostModel, FormatError, FrequencyTable, NoCrossoverError
from costmodel import normalize, text_lines, write_cost

TABLE1_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "table1.codebook")
# longest codeword the table decoder handles
WINDOW_DECODER_BITS = 16

# Reference 4-bit code for alpha0 = 2 * alpha1, tuned to zero-heavy data word frequencies.
TABLE1 = {
    "0000": "111", "0001": "0101", "0010": "1100", "0011": "1101",
    "0100": "1011", "0101": "0100", "0110": "00001", "0111": "0110",
    "1000": "0011", "1001": "0010", "1010": "1001", "1011": "0001",
    "1100": "1010", "1101": "00000", "1110": "1000", "1111": "0111",
}


@dataclasses.dataclass(frozen=True, eq=False)
class Codebook:
    """Codewords indexed by data word value. A codebook read from a file may be incomplete or not prefix-free;
    validate() reports what is wrong with it."""

    symbol_bits: int
    entries: Mapping[int, BitString]

    def __post_init__(self):
        entries = {int(s): BitString(w) for s, w in dict(self.entries).items()}
        for symbol in entries:
            if not 0 <= symbol < 1 << self.symbol_bits:
                raise CodebookError(f"Data word {symbol} does not fit in {self.symbol_bits} bits")
        object.__setattr__(self, "entries", dict(sorted(entries.items())))
        object.__setattr__(self, "_decoder", None)
        object.__setattr__(self, "_window", None)

    @property
    def symbol_count(self) -> int:
        return 1 << self.symbol_bits

    def codeword(self, symbol: int) -> BitString:
        try:
            return self.entries[symbol]
        except KeyError:
            raise CodebookError(f"No codeword for data word {symbol:0{self.symbol_bits}b}")

    def __getitem__(self, symbol: int) -> BitString:
        return self.codeword(symbol)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Codebook) and self.symbol_bits == other.symbol_bits
                and self.entries == other.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def is_complete(self) -> bool:
        return len(self.entries) == self.symbol_count

    def lengths(self) -> Tuple[int, ...]:
        return tuple(len(w) for w in self.entries.values())

    def kraft_sum(self) -> Fraction:
        return sum((Fraction(1, 2 ** len(w)) for w in self.entries.values()), Fraction(0))

    def concatenation(self) -> str:
        """Codewords joined in data word order; the final tie-break between equally cheap codes."""
        return "".join(str(w) for w in self.entries.values())

    def codeword_strings(self) -> List[str]:
        """Codeword text per data word, for hot loops that join strings."""
        if not self.is_complete():
            raise CodebookError("Codebook does not cover every data word")
        return [str(self.entries[s]) for s in range(self.symbol_count)]

    def decoder(self) -> Tuple[Dict[str, int], int, int]:
        """Lookup from codeword text to data word, with the shortest and longest codeword lengths."""
        if self._decoder is None:
            table = {str(w): s for s, w in self.entries.items()}
            lengths = self.lengths()
            object.__setattr__(self, "_decoder", (table, min(lengths), max(lengths)))
        return self._decoder

    def window_decoder(self) -> Optional[Tuple[List[Optional[Tuple[int, int]]], int]]:
        """Table indexed by the next `longest` bits of a stream, giving (data word, codeword length) of the codeword
        those bits start with, or None. Shorter codewords win where an invalid code overlaps. None when the longest
        codeword is too long for a table."""
        if self._window is None:
            longest = max(self.lengths())
            if longest > WINDOW_DECODER_BITS:
                return None
            table = [None] * (1 << longest)
            for symbol, word in sorted(self.entries.items(), key=lambda item: -len(item[1])):
                spare = longest - len(word)
                start = word.to_int() << spare
                table[start: start + (1 << spare)] = [(symbol, len(word))] * (1 << spare)
            object.__setattr__(self, "_window", (table, longest))
        return self._window

    def __str__(self) -> str:
        return format_codebook(self)


@dataclasses.dataclass(frozen=True)
class CodeStats:
    """Expected cost, zeros, ones and length of one encoded data word."""

    expected_cost: Fraction
    expected_zeros: Fraction
    expected_ones: Fraction
    expected_length: Fraction

    @classmethod
    def from_averages(cls, zeros, ones, model: CostModel) -> "CodeStats":
        zeros, ones = Fraction(zeros), Fraction(ones)
        return cls(expected_cost=zeros * model.alpha0 + ones * model.alpha1, expected_zeros=zeros,
                   expected_ones=ones, expected_length=zeros + ones)


@dataclasses.dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def table1_codebook() -> Codebook:
    return Codebook(4, {int(data, 2): BitString(code) for data, code in TABLE1.items()})


def code_stats(book: Codebook, freqs: FrequencyTable, model: CostModel) -> CodeStats:
    """Expectation over the normalized table of the zeros, ones and cost of the codeword of one data word."""
    if book.symbol_bits != freqs.symbol_bits:
        raise CodebookError(f"Codebook maps {book.symbol_bits}-bit data words, "
                            f"frequency table has {freqs.symbol_bits}-bit data words")
    probabilities = normalize(freqs).weights
    zeros = ones = Fraction(0)
    for symbol, p in enumerate(probabilities):
        if p:
            word = book.codeword(symbol)
            zeros += p * word.zeros()
            ones += p * word.ones()
    return CodeStats.from_averages(zeros, ones, model)


def expected_cost(book: Codebook, freqs: FrequencyTable, model: CostModel) -> Fraction:
    probabilities = normalize(freqs).weights
    return sum((p * write_cost(book.codeword(s), model) for s, p in enumerate(probabilities) if p), Fraction(0))


def crossover_ratio(stats_a: CodeStats, stats_b: CodeStats) -> Fraction:
    """The r at which both codes cost the same when alpha0 = r * alpha1. Code A is cheaper below r when it writes
    more zeros than B."""
    if stats_a.expected_zeros == stats_b.expected_zeros:
        raise NoCrossoverError("Codes write the same expected number of zeros; their costs never cross")
    return (stats_a.expected_ones - stats_b.expected_ones) / (stats_b.expected_zeros - stats_a.expected_zeros)


def validate(book: Codebook) -> List[Violation]:
    """Everything that keeps book from being a complete prefix-free code. Empty means valid."""
    violations = []
    width = book.symbol_bits
    for symbol in range(book.symbol_count):
        if symbol not in book.entries:
            violations.append(Violation("missing", f"no codeword for data word {symbol:0{width}b}"))
    words = sorted(book.entries.items(), key=lambda item: (str(item[1]), item[0]))
    for symbol, word in words:
        if len(word) == 0:
            violations.append(Violation("empty", f"data word {symbol:0{width}b} has an empty codeword"))
    for i, (symbol_a, word_a) in enumerate(words):
        for symbol_b, word_b in words[i + 1:]:
            if word_a == word_b:
                violations.append(Violation("duplicate", f"data words {symbol_a:0{width}b} and {symbol_b:0{width}b} "
                                                         f"share codeword {word_a}"))
            elif len(word_a) and word_b.startswith(word_a):
                violations.append(Violation("prefix", f"{word_a} ({symbol_a:0{width}b}) is a prefix of "
                                                      f"{word_b} ({symbol_b:0{width}b})"))
    kraft = book.kraft_sum()
    if kraft > 1:
        violations.append(Violation("kraft", f"Kraft sum {kraft} exceeds 1"))
    return violations


def require_valid(book: Codebook) -> Codebook:
    violations = validate(book)
    if violations:
        raise CodebookError("Invalid codebook: " + "; ".join(str(v) for v in violations))
    return book


def format_codebook(book: Codebook, header: Optional[str] = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    for symbol, word in book.items():
        lines.append(f"{symbol:0{book.symbol_bits}b} {word}")
    return "\n".join(lines) + "\n"


def write_codebook(path: str, book: Codebook, header: Optional[str] = None) -> None:
    with open(path, "w") as wfile:
        wfile.write(format_codebook(book, header))


def read_codebook(path: str) -> Codebook:
    """Parse a codebook file. The result is not validated."""
    entries = {}
    symbol_bits = None
    with open(path, "r", encoding="utf-8") as rfile:
        for lineno, line in text_lines(rfile, path):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 2 or fields[0].strip("01") or fields[1].strip("01"):
                raise FormatError(f"{path}:{lineno}: expected '<binary dataword> <binary codeword>', got {line!r}")
            data, code = fields
            if symbol_bits is None:
                symbol_bits = len(data)
            elif len(data) != symbol_bits:
                raise FormatError(f"{path}:{lineno}: data word {data} is not {symbol_bits} bits wide")
            if int(data, 2) in entries:
                raise FormatError(f"{path}:{lineno}: data word {data} listed twice")
            entries[int(data, 2)] = BitString(code)
    if symbol_bits is None:
        raise FormatError(f"{path}: no entries")
    return Codebook(symbol_bits, entries)


def load_codebook(name: str) -> Codebook:
    """'table1' selects the built-in code, anything else is a codebook file path."""
    if name == "table1":
        return table1_codebook()
    return read_codebook(name)
