"""Structurally distinct full binary trees, the candidate shapes of a prefix code with a given number of leaves.

Two trees are the same shape when one turns into the other by swapping children at any nodes. Each shape is kept
in canonical form: at every internal node the left subtree is not greater than the right subtree under the order

    leaf < any internal node;  internal nodes compare by leaf count, then left subtree, then right subtree.

This is the order of TreeShape.key. Enumeration yields shapes in ascending key order, which is also the order used
to break ties between equally cheap codes."""

import dataclasses
import functools
from typing import Iterator, Optional, Tuple

from genericclasses import FormatError, UnsupportedSizeError

MAX_ENUMERATED_LEAVES = 16


class TreeShape:
    __slots__ = ("left", "right", "leaf_count", "key", "_hash")

    def __init__(self, left: "TreeShape" = None, right: "TreeShape" = None):
        if (left is None) != (right is None):
            raise ValueError("An internal node needs exactly two children")
        if left is None:
            self.leaf_count = 1
            self.key = (1,)
        else:
            if right.key < left.key:
                left, right = right, left
            self.leaf_count = left.leaf_count + right.leaf_count
            self.key = (self.leaf_count, left.key, right.key)
        self.left = left
        self.right = right
        self._hash = hash(self.key)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def internal_nodes(self) -> int:
        return self.leaf_count - 1

    def height(self) -> int:
        return max(leaf_depths(self))

    def notation(self) -> str:
        """Nested-parentheses form, '.' for a leaf: the balanced 4-leaf shape is ((..)(..))."""
        if self.is_leaf:
            return "."
        return "(" + self.left.notation() + self.right.notation() + ")"

    @classmethod
    def from_notation(cls, text: str) -> "TreeShape":
        text = "".join(text.split())
        shape, end = cls._parse(text, 0)
        if end != len(text):
            raise FormatError(f"Trailing characters after shape at position {end}: {text!r}")
        return shape

    @classmethod
    def _parse(cls, text: str, pos: int) -> Tuple["TreeShape", int]:
        if pos >= len(text):
            raise FormatError(f"Shape notation ends early: {text!r}")
        if text[pos] == ".":
            return LEAF, pos + 1
        if text[pos] != "(":
            raise FormatError(f"Unexpected {text[pos]!r} at position {pos} of {text!r}")
        left, pos = cls._parse(text, pos + 1)
        right, pos = cls._parse(text, pos)
        if pos >= len(text) or text[pos] != ")":
            raise FormatError(f"Expected ')' at position {pos} of {text!r}")
        return cls(left, right), pos + 1

    def __eq__(self, other) -> bool:
        return isinstance(other, TreeShape) and self.key == other.key

    def __lt__(self, other: "TreeShape") -> bool:
        return self.key < other.key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"TreeShape({self.notation()})"

    def __str__(self) -> str:
        return self.notation()


LEAF = TreeShape()


@dataclasses.dataclass(frozen=True)
class DepthConstraint:
    """Every leaf depth d (the length of its codeword) must satisfy min_depth <= d <= max_depth."""

    min_depth: int
    max_depth: int

    def __post_init__(self):
        if self.min_depth < 1:
            raise ValueError(f"min_depth must be at least 1, got {self.min_depth}")
        if self.max_depth < self.min_depth:
            raise ValueError(f"max_depth {self.max_depth} is below min_depth {self.min_depth}")

    def admits(self, shape: TreeShape) -> bool:
        depths = leaf_depths(shape)
        return self.min_depth <= depths[0] and depths[-1] <= self.max_depth

    def satisfiable(self, leaf_count: int) -> bool:
        return (1 << self.min_depth) <= leaf_count <= (1 << self.max_depth)


def leaf_depths(shape: TreeShape) -> Tuple[int, ...]:
    """Depth of every leaf (root depth 0), ascending."""
    depths = []
    stack = [(shape, 0)]
    while stack:
        node, depth = stack.pop()
        if node.is_leaf:
            depths.append(depth)
        else:
            stack.append((node.left, depth + 1))
            stack.append((node.right, depth + 1))
    return tuple(sorted(depths))


def _bounds(leaf_count: int, constraint: Optional[DepthConstraint]) -> Tuple[int, int]:
    if constraint is None:
        return 0, leaf_count - 1
    return constraint.min_depth, constraint.max_depth


def _shapes(leaf_count: int, low: int, high: int) -> Tuple[TreeShape, ...]:
    # low/high bound the leaf depths relative to this subtree's root
    return _canonical_shapes(leaf_count, max(low, 0), min(high, leaf_count - 1))


@functools.lru_cache(maxsize=None)
def _canonical_shapes(leaf_count: int, low: int, high: int) -> Tuple[TreeShape, ...]:
    if leaf_count == 1:
        return (LEAF,) if low == 0 else ()
    if high < 1 or leaf_count > 1 << high or leaf_count < 1 << low:
        return ()
    shapes = []
    for small_count in range(1, leaf_count // 2 + 1):
        big_count = leaf_count - small_count
        smalls = _shapes(small_count, low - 1, high - 1)
        if small_count < big_count:
            bigs = _shapes(big_count, low - 1, high - 1)
            shapes.extend(TreeShape(a, b) for a in smalls for b in bigs)
        else:
            shapes.extend(TreeShape(a, smalls[j]) for i, a in enumerate(smalls) for j in range(i, len(smalls)))
    shapes.sort(key=lambda s: s.key)
    return tuple(shapes)


def enumerate_shapes(leaf_count: int, constraint: Optional[DepthConstraint] = None) -> Iterator[TreeShape]:
    """Every canonical shape with leaf_count leaves (and, with a constraint, every leaf depth in range) exactly once,
    in ascending key order. An unsatisfiable constraint yields nothing."""
    if leaf_count < 1:
        raise ValueError(f"leaf_count must be at least 1, got {leaf_count}")
    if leaf_count > MAX_ENUMERATED_LEAVES:
        raise UnsupportedSizeError(f"Exhaustive shape enumeration supports at most {MAX_ENUMERATED_LEAVES} leaves, "
                                   f"got {leaf_count}")
    low, high = _bounds(leaf_count, constraint)
    yield from _shapes(leaf_count, low, min(high, leaf_count - 1))


@functools.lru_cache(maxsize=None)
def _we_count(leaf_count: int) -> int:
    if leaf_count == 1:
        return 1
    half, odd = divmod(leaf_count, 2)
    total = sum(_we_count(i) * _we_count(leaf_count - i) for i in range(1, half + odd))
    if not odd:
        total += _we_count(half) * (_we_count(half) + 1) // 2
    return total


def _bounded_count(leaf_count: int, low: int, high: int) -> int:
    return _canonical_count(leaf_count, max(low, 0), min(high, leaf_count - 1))


@functools.lru_cache(maxsize=None)
def _canonical_count(leaf_count: int, low: int, high: int) -> int:
    if leaf_count == 1:
        return 1 if low == 0 else 0
    if high < 1 or leaf_count > 1 << high or leaf_count < 1 << low:
        return 0
    total = 0
    for i in range(1, leaf_count // 2 + 1):
        a = _bounded_count(i, low - 1, high - 1)
        if 2 * i < leaf_count:
            total += a * _bounded_count(leaf_count - i, low - 1, high - 1)
        else:
            total += a * (a + 1) // 2
    return total


def count_shapes(leaf_count: int, constraint: Optional[DepthConstraint] = None) -> int:
    """Number of structurally distinct full binary trees (Wedderburn-Etherington numbers), computed by recurrence.
    With a constraint, the number whose leaf depths all lie in range. No size limit."""
    if leaf_count < 1:
        raise ValueError(f"leaf_count must be at least 1, got {leaf_count}")
    if constraint is None:
        return _we_count(leaf_count)
    return _bounded_count(leaf_count, constraint.min_depth, constraint.max_depth)
