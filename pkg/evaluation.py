"""Write-cost comparison of the variable-length codec against the baseline codecs over a corpus.

Blocks are evaluated independently and in chunks; chunk totals are summed in corpus order, so the report is the
same for any worker count."""

import dataclasses
import multiprocessing
import time
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import vlcconfig
from baselines import BASELINE_CODECS, encode_baseline
from codebook import Codebook, require_valid
from corpus import chunked
from genericclasses import Block, CostBreakdown, CostModel, EmptyCorpusError, MissingCodebookError
from vlccodec import block_write_cost, encode_block

VLC = "vlc"
KNOWN_CODECS = (VLC,) + BASELINE_CODECS
REFERENCE_CODEC = "fnw"

# (block index, codec, breakdown, fallback)
BlockRecord = Tuple[int, str, CostBreakdown, bool]


@dataclasses.dataclass
class CodecTotals:
    codec: str
    total_cost: Fraction = Fraction(0)
    written_zeros: int = 0
    written_ones: int = 0
    metadata_bits: int = 0
    blocks: int = 0
    fallbacks: int = 0

    def add(self, breakdown: CostBreakdown, fallback: bool) -> None:
        self.total_cost += breakdown.total_cost
        self.written_zeros += breakdown.written_zeros
        self.written_ones += breakdown.written_ones
        self.metadata_bits += breakdown.metadata_bits
        self.blocks += 1
        self.fallbacks += int(fallback)

    def merge(self, other: "CodecTotals") -> None:
        self.total_cost += other.total_cost
        self.written_zeros += other.written_zeros
        self.written_ones += other.written_ones
        self.metadata_bits += other.metadata_bits
        self.blocks += other.blocks
        self.fallbacks += other.fallbacks


@dataclasses.dataclass
class EvalOptions:
    fnw_word_bits: int = 8
    flag_policy: str = "include"
    cost_fallback: bool = False
    workers: int = 1
    chunk_blocks: int = 256
    keep_blocks: bool = False

    @classmethod
    def from_config(cls, **overrides) -> "EvalOptions":
        parameters = vlcconfig.evaluation_parameters
        options = cls(fnw_word_bits=parameters["fnw_word_bits"], flag_policy=parameters["flag_policy"],
                      cost_fallback=parameters["cost_fallback"], workers=parameters["workers"],
                      chunk_blocks=parameters["chunk_blocks"], keep_blocks=not vlcconfig.slim_log)
        return dataclasses.replace(options, **overrides)


@dataclasses.dataclass
class CostReport:
    model: CostModel
    totals: Dict[str, CodecTotals]
    block_records: List[BlockRecord] = dataclasses.field(default_factory=list)

    @property
    def codecs(self) -> List[str]:
        return list(self.totals)

    @property
    def block_count(self) -> int:
        return next(iter(self.totals.values())).blocks if self.totals else 0

    def normalized_cost(self, codec: str) -> Optional[Fraction]:
        """total cost of codec over the total cost of FNW; None when FNW was not evaluated or cost nothing."""
        reference = self.totals.get(REFERENCE_CODEC)
        if reference is None or reference.total_cost == 0:
            return None
        return self.totals[codec].total_cost / reference.total_cost


def parse_codecs(codecs: Union[str, Iterable[str]]) -> List[str]:
    """Codec ids in the order given, without repeats."""
    if isinstance(codecs, str):
        codecs = [c.strip() for c in codecs.split(",") if c.strip()]
    ordered = list(dict.fromkeys(codecs))
    if not ordered:
        raise ValueError("At least one codec is needed")
    unknown = [c for c in ordered if c not in KNOWN_CODECS]
    if unknown:
        raise ValueError(f"Unknown codec(s) {', '.join(unknown)}; choose from {', '.join(KNOWN_CODECS)}")
    return ordered


def _evaluate_chunk(job) -> Tuple[Dict[str, CodecTotals], List[BlockRecord]]:
    first_index, blocks, codecs, model, book, options = job
    totals = {codec: CodecTotals(codec) for codec in codecs}
    records = []
    for offset, block in enumerate(blocks):
        for codec in codecs:
            if codec == VLC:
                enc = encode_block(block, book, model, options.flag_policy, options.cost_fallback)
                breakdown = block_write_cost(enc, model, options.flag_policy)
                fallback = not enc.encoded
            else:
                result = encode_baseline(codec, block, model, options.fnw_word_bits, options.flag_policy)
                breakdown, fallback = result.breakdown, result.fallback
            totals[codec].add(breakdown, fallback)
            if options.keep_blocks:
                records.append((first_index + offset, codec, breakdown, fallback))
    return totals, records


def run_eval(blocks: Iterable[Block], codecs: Union[str, Sequence[str]], model: CostModel,
             codebook: Optional[Codebook] = None, options: Optional[EvalOptions] = None) -> CostReport:
    """Accepts:
        blocks: Type iterable of Block. The corpus, consumed once.
        codecs: Type list of codec ids or a comma separated string.
        model: Type CostModel.
        codebook: Type Codebook. Required when vlc is among codecs.
        options: Type EvalOptions. Defaults come from vlcconfig.
    Returns CostReport with one CodecTotals per codec, in the order requested."""
    codecs = parse_codecs(codecs)
    if options is None:
        options = EvalOptions.from_config()
    if VLC in codecs:
        if codebook is None:
            raise MissingCodebookError("Evaluating vlc needs a codebook")
        require_valid(codebook)
    started = time.time()

    def jobs():
        index = 0
        for chunk in chunked(blocks, options.chunk_blocks):
            yield index, chunk, codecs, model, codebook, options
            index += len(chunk)

    totals = {codec: CodecTotals(codec) for codec in codecs}
    records: List[BlockRecord] = []
    if options.workers > 1:
        with multiprocessing.Pool(options.workers) as pool:
            outcomes = pool.imap(_evaluate_chunk, jobs())
            for chunk_totals, chunk_records in outcomes:
                _merge(totals, records, chunk_totals, chunk_records)
    else:
        for job in jobs():
            _merge(totals, records, *_evaluate_chunk(job))
    if vlcconfig.showprogress:
        print()

    report = CostReport(model=model, totals=totals, block_records=records)
    if report.block_count == 0:
        raise EmptyCorpusError("The corpus holds no blocks")
    if vlcconfig.verbose:
        print(f"Evaluated {report.block_count} blocks with {', '.join(codecs)} on {options.workers} worker(s) "
              f"in {time.time() - started:.2f}s")
    return report


def _merge(totals: Dict[str, CodecTotals], records: List[BlockRecord], chunk_totals: Dict[str, CodecTotals],
           chunk_records: List[BlockRecord]) -> None:
    for codec, partial in chunk_totals.items():
        totals[codec].merge(partial)
    records.extend(chunk_records)
    if vlcconfig.showprogress:
        print(f"\r{next(iter(totals.values())).blocks} blocks", end="", flush=True)
