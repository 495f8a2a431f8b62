"""Write-cost accounting C = n0 * alpha0 + n1 * alpha1 and the frequency-table file format.

Frequency table files hold one line per data word, `<binary dataword> <weight>`, with `#` starting a comment.
Lines may come in any order and missing data words have weight 0. Weights are decimal strings or p/q fractions."""

from fractions import Fraction
from typing import Iterator, TextIO, Tuple, Union

from genericclasses import (BitString, Block, CostBreakdown, CostModel, EmptyDistributionError, FormatError,
                            FrequencyTable)


def parse_decimal(text: Union[str, int, Fraction], name: str = "value") -> Fraction:
    """Parse a decimal string ("0.55", "2", "3/4") into an exact fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{name} must be a decimal or fraction string, got {text!r}")


def cost_model(alpha0: Union[str, Fraction], alpha1: Union[str, Fraction]) -> CostModel:
    return CostModel(parse_decimal(alpha0, "alpha0"), parse_decimal(alpha1, "alpha1"))


def write_cost(bits: BitString, model: CostModel) -> Fraction:
    """Cost of writing every bit of bits."""
    return model.cost(bits.zeros(), bits.ones())


def block_raw_cost(block: Block, model: CostModel) -> CostBreakdown:
    """Cost of writing the block unencoded: every payload bit is written, no metadata."""
    bits = block.bits()
    return CostBreakdown.from_counts(bits.zeros(), bits.ones(), model)


def normalize(table: FrequencyTable) -> FrequencyTable:
    total = table.total
    if total == 0:
        raise EmptyDistributionError("Cannot normalize a frequency table whose weights are all zero")
    if total == 1:
        return table
    return FrequencyTable(table.symbol_bits, tuple(w / total for w in table.weights))


def text_lines(rfile: TextIO, path: str) -> Iterator[Tuple[int, str]]:
    """Numbered lines of a text data file; undecodable bytes are a format error."""
    lineno = 0
    try:
        for lineno, line in enumerate(rfile, start=1):
            yield lineno, line
    except UnicodeDecodeError as err:
        raise FormatError(f"{path}:{lineno + 1}: not UTF-8 text ({err.reason} at byte {err.start})") from err


def table_from_counts(counts, symbol_bits: int) -> FrequencyTable:
    return FrequencyTable(symbol_bits, tuple(Fraction(int(c)) for c in counts))


def read_frequency_table(path: str, symbol_bits: int = None) -> FrequencyTable:
    entries = {}
    with open(path, "r", encoding="utf-8") as rfile:
        for lineno, line in text_lines(rfile, path):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 2 or fields[0].strip("01"):
                raise FormatError(f"{path}:{lineno}: expected '<binary dataword> <weight>', got {line!r}")
            word, weight = fields
            if symbol_bits is None:
                symbol_bits = len(word)
            elif len(word) != symbol_bits:
                raise FormatError(f"{path}:{lineno}: data word {word} is not {symbol_bits} bits wide")
            symbol = int(word, 2)
            if symbol in entries:
                raise FormatError(f"{path}:{lineno}: data word {word} listed twice")
            try:
                entries[symbol] = parse_decimal(weight, "weight")
            except ValueError as err:
                raise FormatError(f"{path}:{lineno}: {err}")
            if entries[symbol] < 0:
                raise FormatError(f"{path}:{lineno}: weight of data word {word} is negative")
    if symbol_bits is None:
        raise FormatError(f"{path}: no entries, cannot infer the data word width")
    return FrequencyTable(symbol_bits, tuple(entries.get(s, Fraction(0)) for s in range(1 << symbol_bits)))


def format_frequency_table(table: FrequencyTable, header: str = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    for symbol, weight in enumerate(table.weights):
        lines.append(f"{symbol:0{table.symbol_bits}b} {weight}")
    return "\n".join(lines) + "\n"


def write_frequency_table(path: str, table: FrequencyTable, header: str = None) -> None:
    with open(path, "w") as wfile:
        wfile.write(format_frequency_table(table, header))
