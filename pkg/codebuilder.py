"""Search for the cheapest prefix code under an asymmetric write cost.

For one tree shape, a code is fixed by two choices: which child of every internal node gets the 0 edge, and which
data word goes to which leaf. For a fixed labeling the best assignment pairs the most frequent data words with the
cheapest codewords (rearrangement), so only the multiset of codeword costs matters. A codeword's cost depends only
on its number of zeros and ones, so each subtree is summarised by the set of distinct (zeros, ones) multisets its
labelings reach. That set is independent of the cost model and is cached per subtree shape; shapes share most of
their subtrees, which keeps the full 16-leaf search small.

Ties are broken by enumeration order of the shape, then by the codebook whose codewords, joined in data word order,
sort first. That codebook is found on the winning shape only, over every labeling reaching the optimum."""

import collections
import dataclasses
import functools
import multiprocessing
from fractions import Fraction
from math import gcd
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from sortedcontainers import SortedList

import vlcconfig
from codebook import Codebook, CodeStats, code_stats
from genericclasses import (BitString, CodebookError, CostModel, EmptyDistributionError, FrequencyTable,
                            NoFeasibleCodeError, Rational)
from treeshapes import MAX_ENUMERATED_LEAVES, DepthConstraint, TreeShape, enumerate_shapes

# Sorted (zeros, ones) per leaf
LeafProfile = Tuple[Tuple[int, int], ...]
# labelings of shapes up to this many leaves are memoized
CACHED_LABELING_LEAVES = 8


@dataclasses.dataclass(frozen=True)
class Candidate:
    """One evaluated shape: its best expected cost and its position in the enumeration."""

    expected_cost: Fraction
    index: int
    shape: TreeShape


@dataclasses.dataclass
class SearchResult:
    codebook: Codebook
    stats: CodeStats
    shape: TreeShape
    index: int
    shapes_evaluated: int
    candidates: List[Candidate]


@functools.lru_cache(maxsize=None)
def leaf_profiles(shape: TreeShape) -> FrozenSet[LeafProfile]:
    """Every distinct multiset of (zeros, ones) the leaves of shape reach under some 0/1 edge labeling."""
    if shape.is_leaf:
        return frozenset([((0, 0),)])
    left = sorted(leaf_profiles(shape.left))
    right = left if shape.left == shape.right else sorted(leaf_profiles(shape.right))
    symmetric = right is left
    profiles = set()
    for i, left_profile in enumerate(left):
        for right_profile in (right[i:] if symmetric else right):
            zero_left = [(z + 1, o) for z, o in left_profile] + [(z, o + 1) for z, o in right_profile]
            one_left = [(z, o + 1) for z, o in left_profile] + [(z + 1, o) for z, o in right_profile]
            profiles.add(tuple(sorted(zero_left)))
            profiles.add(tuple(sorted(one_left)))
    return frozenset(profiles)


def labelings(shape: TreeShape) -> Tuple[Tuple[str, ...], ...]:
    """Leaf codewords, left to right, of every 0/1 edge labeling of shape."""
    if shape.leaf_count <= CACHED_LABELING_LEAVES:
        return _cached_labelings(shape)
    return _labelings(shape)


@functools.lru_cache(maxsize=None)
def _cached_labelings(shape: TreeShape) -> Tuple[Tuple[str, ...], ...]:
    return _labelings(shape)


def _labelings(shape: TreeShape) -> Tuple[Tuple[str, ...], ...]:
    if shape.is_leaf:
        return (("",),)
    left = labelings(shape.left)
    right = labelings(shape.right)
    result = []
    for left_words in left:
        zero_left = tuple("0" + w for w in left_words)
        one_left = tuple("1" + w for w in left_words)
        for right_words in right:
            result.append(zero_left + tuple("1" + w for w in right_words))
            result.append(one_left + tuple("0" + w for w in right_words))
    return tuple(result)


def _scaled_weights(weights: Sequence[Rational]) -> Tuple[List[int], int]:
    """Integer weights and the common denominator they were scaled by."""
    weights = [Fraction(w) for w in weights]
    denominator = 1
    for w in weights:
        denominator = denominator * w.denominator // gcd(denominator, w.denominator)
    return [int(w * denominator) for w in weights], denominator


def _smallest_assignment(words: Sequence[str], weights: Sequence[int], c0: int, c1: int) -> List[str]:
    """Among the minimum-cost assignments of words, the one whose concatenation in data word order sorts first.

    An assignment is optimal exactly when every weight class receives the costs of its slice of the sorted order, so
    data words are served in order with the smallest codeword whose cost their class still needs. Codewords are
    prefix free, so a smaller codeword for an earlier data word always gives a smaller concatenation."""
    cost = {w: w.count("0") * c0 + w.count("1") * c1 for w in words}
    needed = collections.defaultdict(collections.Counter)
    ranked = sorted(words, key=cost.get)
    for rank, s in enumerate(sorted(range(len(weights)), key=lambda s: -weights[s])):
        needed[weights[s]][cost[ranked[rank]]] += 1
    available = sorted(words)
    assigned = []
    for weight in weights:
        wanted = needed[weight]
        for i, word in enumerate(available):
            if wanted[cost[word]]:
                wanted[cost[word]] -= 1
                assigned.append(available.pop(i))
                break
    return assigned


def _best_cost(shape: TreeShape, weights: Sequence[int], c0: int, c1: int) -> int:
    """Minimum of sum(weight * scaled codeword cost) over all codes on shape."""
    profiles = list(leaf_profiles(shape))
    descending = sorted(weights, reverse=True)
    bound = max(descending) * max(c0, c1) * shape.leaf_count * shape.leaf_count
    dtype = np.int64 if bound < 2 ** 62 else object
    counts = np.array(profiles, dtype=dtype)
    costs = counts[:, :, 0] * c0 + counts[:, :, 1] * c1
    costs.sort(axis=1)
    return min(int(t) for t in costs.dot(np.array(descending, dtype=dtype)))


def _best_for_shape(shape: TreeShape, weights: Sequence[int], c0: int, c1: int) -> Tuple[int, List[str]]:
    """The minimum cost on shape and the codeword of every weight in the code reaching it whose concatenation sorts
    first."""
    best = _best_cost(shape, weights, c0, c1)
    descending = sorted(weights, reverse=True)
    chosen = None
    for words in labelings(shape):
        costs = sorted(w.count("0") * c0 + w.count("1") * c1 for w in words)
        if sum(c * w for c, w in zip(costs, descending)) != best:
            continue
        assigned = _smallest_assignment(words, weights, c0, c1)
        if chosen is None or "".join(assigned) < "".join(chosen):
            chosen = assigned
    return best, chosen


def optimal_assignment(shape: TreeShape, weights: Sequence[Rational],
                       model: CostModel) -> Tuple[Fraction, List[BitString]]:
    """Accepts:
        shape: Type TreeShape. One leaf per weight.
        weights: Type sequence of nonnegative rationals, not necessarily normalized.
        model: Type CostModel.
    Returns the minimum of sum(weight * codeword cost) over every code on shape, and the codeword given to each
    weight."""
    if shape.leaf_count != len(weights):
        raise CodebookError(f"Shape has {shape.leaf_count} leaves but there are {len(weights)} weights")
    scaled, denominator = _scaled_weights(weights)
    c0, c1, d = model.scaled()
    cost, words = _best_for_shape(shape, scaled, c0, c1)
    return Fraction(cost, denominator * d), [BitString(w) for w in words]


def optimal_codebook_for_shape(shape: TreeShape, freqs: FrequencyTable,
                               model: CostModel) -> Tuple[Codebook, CodeStats]:
    """The exact minimum expected-cost code whose codewords are the leaf paths of shape."""
    if shape.leaf_count != freqs.symbol_count:
        raise CodebookError(f"Shape has {shape.leaf_count} leaves but the table has {freqs.symbol_count} data words")
    _, words = optimal_assignment(shape, freqs.weights, model)
    book = Codebook(freqs.symbol_bits, {s: w for s, w in enumerate(words)})
    return book, code_stats(book, freqs, model)


def _evaluate_chunk(job) -> List[Tuple[int, int]]:
    """Worker entry: (scaled cost, index) for each shape of the chunk."""
    chunk, weights, c0, c1 = job
    results = []
    for index, notation in chunk:
        shape = TreeShape.from_notation(notation)
        results.append((_best_cost(shape, weights, c0, c1), index))
    return results


def search_codebooks(freqs: FrequencyTable, model: CostModel, constraint: Optional[DepthConstraint] = None,
                     top: int = 0, workers: int = 1) -> SearchResult:
    """Evaluate every admissible shape and keep the cheapest code; also rank the top cheapest shapes."""
    if freqs.symbol_count > MAX_ENUMERATED_LEAVES:
        raise CodebookError(f"Code search supports at most {MAX_ENUMERATED_LEAVES} data words, "
                            f"got {freqs.symbol_count}")
    if freqs.total == 0:
        raise EmptyDistributionError("Cannot build a code for an all-zero frequency table")
    shapes = list(enumerate_shapes(freqs.symbol_count, constraint))
    if not shapes:
        raise NoFeasibleCodeError(f"No {freqs.symbol_count}-leaf code tree has every codeword length in "
                                  f"[{constraint.min_depth}, {constraint.max_depth}]")
    weights, _ = _scaled_weights(freqs.weights)
    c0, c1, d = model.scaled()
    jobs = [(chunk, weights, c0, c1) for chunk in _chunks(shapes, workers)]
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            outcomes = pool.map(_evaluate_chunk, jobs)
    else:
        outcomes = [_evaluate_chunk(job) for job in jobs]

    best = None
    ranking = SortedList()
    for outcome in outcomes:
        for entry in outcome:
            if best is None or entry < best:
                best = entry
            if top:
                ranking.add(entry)
                if len(ranking) > top:
                    ranking.pop()
    if vlcconfig.verbose:
        print(f"Evaluated {len(shapes)} code trees with {freqs.symbol_count} leaves")

    shape = shapes[best[1]]
    book, stats = optimal_codebook_for_shape(shape, freqs, model)
    total_weight = sum(weights)
    candidates = [Candidate(Fraction(cost, total_weight * d), index, shapes[index])
                  for cost, index in ranking]
    return SearchResult(codebook=book, stats=stats, shape=shape, index=best[1], shapes_evaluated=len(shapes),
                        candidates=candidates)


def build_codebook(freqs: FrequencyTable, model: CostModel, constraint: Optional[DepthConstraint] = None,
                   workers: int = 1) -> Tuple[Codebook, CodeStats]:
    """The minimum expected-cost code over every shape admitted by constraint."""
    result = search_codebooks(freqs, model, constraint, workers=workers)
    return result.codebook, result.stats


def _chunks(shapes: Sequence[TreeShape], workers: int) -> List[List[Tuple[int, str]]]:
    indexed = [(i, s.notation()) for i, s in enumerate(shapes)]
    if workers <= 1:
        return [indexed]
    size = max(1, -(-len(indexed) // (4 * workers)))
    return [indexed[i: i + size] for i in range(0, len(indexed), size)]
