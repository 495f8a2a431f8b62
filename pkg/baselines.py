"""Registry of the comparison codecs and the best-of combinator used for FPC+BDI."""

import dataclasses
from typing import Callable, Dict, Iterable, Sequence

from bdi import bdi_encode
from costmodel import block_raw_cost
from fnw import fnw_encode
from fpc import fpc_encode
from genericclasses import BaselineResult, Block, CostModel

# Tie order inside best_of
MEMBER_ORDER = ("fpc", "bdi", "fnw", "raw")
COMBINED = {"fpc+bdi": ("fpc", "bdi")}
BASELINE_CODECS = MEMBER_ORDER + tuple(COMBINED)


def raw_encode(block: Block, model: CostModel) -> BaselineResult:
    """The block written as is, without metadata."""
    return BaselineResult("raw", block.bits(), block_raw_cost(block, model), fallback=True, detail="raw")


def _encoders(fnw_word_bits: int, flag_policy: str) -> Dict[str, Callable[[Block, CostModel], BaselineResult]]:
    return {
        "fpc": fpc_encode,
        "bdi": bdi_encode,
        "fnw": lambda block, model: fnw_encode(block, fnw_word_bits, model, flag_policy),
        "raw": raw_encode,
    }


def best_result(results: Sequence[BaselineResult]) -> BaselineResult:
    """Cheapest of results; the first one wins ties."""
    if not results:
        raise ValueError("best_result needs at least one result")
    best = results[0]
    for result in results[1:]:
        if result.breakdown.total_cost < best.breakdown.total_cost:
            best = result
    return best


def best_of(block: Block, codecs: Iterable[str], model: CostModel, fnw_word_bits: int = 8,
            flag_policy: str = "include") -> BaselineResult:
    """Accepts:
        block: Type Block.
        codecs: Type iterable of member codec ids (fpc, bdi, fnw, raw).
        model: Type CostModel.
    Returns the cheapest member result. For more than one member the codec id is the members joined by '+' and
    detail names the member that won."""
    members = sorted(set(codecs), key=lambda c: MEMBER_ORDER.index(c) if c in MEMBER_ORDER else len(MEMBER_ORDER))
    if not members:
        raise ValueError("best_of needs a nonempty codec set")
    unknown = [c for c in members if c not in MEMBER_ORDER]
    if unknown:
        raise ValueError(f"Unknown codec(s) {unknown}; best_of combines {MEMBER_ORDER}")
    encoders = _encoders(fnw_word_bits, flag_policy)
    results = [encoders[c](block, model) for c in members]
    best = best_result(results)
    if len(members) == 1:
        return best
    return dataclasses.replace(best, codec_id="+".join(members), detail=f"{best.codec_id}: {best.detail}")


def encode_baseline(codec_id: str, block: Block, model: CostModel, fnw_word_bits: int = 8,
                    flag_policy: str = "include") -> BaselineResult:
    if codec_id in COMBINED:
        return best_of(block, COMBINED[codec_id], model, fnw_word_bits, flag_policy)
    encoders = _encoders(fnw_word_bits, flag_policy)
    if codec_id not in encoders:
        raise ValueError(f"Unknown baseline codec {codec_id!r}, expected one of {BASELINE_CODECS}")
    return encoders[codec_id](block, model)
