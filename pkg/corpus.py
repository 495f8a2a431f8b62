"""Corpus ingestion and data word statistics.

A corpus is either a raw binary file, cut into consecutive blocks, or a `.trace` text file holding one hex-encoded
block per line (blank lines and `#` comments are skipped). A final partial block of a binary file is zero-padded and
remembers how many of its bytes are real, so the padding can be left out of the statistics."""

import itertools
import multiprocessing
from fractions import Fraction
from typing import Iterable, Iterator, List, Union

import numpy as np

import vlcconfig
from costmodel import normalize, parse_decimal, table_from_counts, text_lines
from genericclasses import (BLOCK_BYTES, Block, CorpusIOError, EmptyCorpusError, FormatError, FrequencyTable,
                            UnsupportedSizeError)

TRACE_SUFFIX = ".trace"
HISTOGRAM_SYMBOL_BITS = (2, 4)
READ_BLOCKS = 1024


def _raw_blocks(rfile, block_bytes: int) -> Iterator[Block]:
    with rfile:
        while True:
            data = rfile.read(block_bytes * READ_BLOCKS)
            if not data:
                return
            for start in range(0, len(data), block_bytes):
                piece = data[start: start + block_bytes]
                if len(piece) < block_bytes:
                    yield Block(piece + bytes(block_bytes - len(piece)), valid_bytes=len(piece))
                else:
                    yield Block(piece)


def _trace_blocks(rfile, path: str, block_bytes: int) -> Iterator[Block]:
    with rfile:
        for lineno, line in text_lines(rfile, path):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                payload = bytes.fromhex(line)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: not a hex-encoded block")
            if len(payload) != block_bytes:
                raise FormatError(f"{path}:{lineno}: expected {block_bytes} bytes, got {len(payload)}")
            yield Block(payload)


def blocks_from_file(path: str, block_bytes: int = BLOCK_BYTES) -> Iterator[Block]:
    """Blocks of the corpus at path in file order. The file is opened right away, so an unreadable path raises
    CorpusIOError here and not on the first iteration."""
    if block_bytes <= 0 or block_bytes % 8:
        raise UnsupportedSizeError(f"Block size must be a positive multiple of 8 bytes, got {block_bytes}")
    trace = str(path).endswith(TRACE_SUFFIX)
    try:
        rfile = open(path, "r", encoding="utf-8") if trace else open(path, "rb")
    except OSError as err:
        raise CorpusIOError(err.errno, f"Cannot read corpus: {err.strerror}", str(path)) from err
    if trace:
        return _trace_blocks(rfile, path, block_bytes)
    return _raw_blocks(rfile, block_bytes)


def chunked(blocks: Iterable[Block], size: int) -> Iterator[List[Block]]:
    iterator = iter(blocks)
    while True:
        chunk = list(itertools.islice(iterator, size))
        if not chunk:
            return
        yield chunk


def _symbol_counts(data: bytes, symbol_bits: int) -> np.ndarray:
    array = np.frombuffer(data, dtype=np.uint8)
    shifts = np.arange(8 - symbol_bits, -1, -symbol_bits).astype(np.uint8)
    symbols = (array[:, None] >> shifts[None, :]) & ((1 << symbol_bits) - 1)
    return np.bincount(symbols.reshape(-1), minlength=1 << symbol_bits).astype(np.int64)


def _count_chunk(job) -> np.ndarray:
    payloads, symbol_bits = job
    return _symbol_counts(b"".join(payloads), symbol_bits)


def pattern_counts(blocks: Iterable[Block], symbol_bits: int = 4, workers: int = 1,
                   chunk_blocks: int = None) -> np.ndarray:
    """Occurrences of every symbol_bits-bit data word over the real bytes of blocks. Chunk counts are summed,
    so the result does not depend on the worker count or on where block boundaries fall."""
    if symbol_bits not in HISTOGRAM_SYMBOL_BITS:
        raise UnsupportedSizeError(f"Histograms count data words of {HISTOGRAM_SYMBOL_BITS} bits, got {symbol_bits}")
    if chunk_blocks is None:
        chunk_blocks = vlcconfig.evaluation_parameters["chunk_blocks"]
    jobs = (([b.payload[: b.valid_bytes] for b in chunk], symbol_bits) for chunk in chunked(blocks, chunk_blocks))
    counts = np.zeros(1 << symbol_bits, dtype=np.int64)
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            for partial in pool.imap(_count_chunk, jobs):
                counts += partial
    else:
        for job in jobs:
            counts += _count_chunk(job)
    if vlcconfig.verbose:
        print(f"Counted {int(counts.sum())} data words of {symbol_bits} bits")
    return counts


def pattern_histogram(blocks: Iterable[Block], symbol_bits: int = 4, workers: int = 1) -> FrequencyTable:
    """Relative frequency of every data word in blocks."""
    counts = pattern_counts(blocks, symbol_bits, workers)
    if not counts.any():
        raise EmptyCorpusError("The corpus holds no data words to count")
    return normalize(table_from_counts(counts, symbol_bits))


def zero_heavy_table(p: Union[str, Fraction], symbol_bits: int = 4) -> FrequencyTable:
    """Data word 0 with probability p, every other data word equally likely.

    zero_heavy_table("0.55") approximates the pattern frequencies of typical workloads, where the all-zero nibble
    makes up about 55% of the data words."""
    p = parse_decimal(p, "p")
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rest = (1 - p) / ((1 << symbol_bits) - 1)
    return FrequencyTable(symbol_bits, (p,) + (rest,) * ((1 << symbol_bits) - 1))
