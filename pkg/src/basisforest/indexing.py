"""Multi-indices, index trees and index merging strategies.

Multi-indices are plain tuples of non-negative ints.  An index tree is kept
in compressed form: ``Value`` is a leaf, ``Uniform(count, child)`` a node
whose children all share one shape, ``NonUniform(children)`` a node with
heterogeneous children.  Its leaf paths are the multi-indices it contains.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

MAX_MULTI_INDEX_LENGTH = 8

MultiIndex = tuple


class IndexTreeError(ValueError):
    pass


def multi_index(*digits: int) -> tuple[int, ...]:
    if len(digits) > MAX_MULTI_INDEX_LENGTH:
        raise IndexTreeError(
            f"multi-index length {len(digits)} exceeds capacity {MAX_MULTI_INDEX_LENGTH}"
        )
    if any(int(d) != d or d < 0 for d in digits):
        raise IndexTreeError(f"multi-index digits must be non-negative integers: {digits}")
    return tuple(int(d) for d in digits)


def format_multi_index(mi: Sequence[int]) -> str:
    return "(" + ",".join(str(d) for d in mi) + ")"


@dataclass(frozen=True)
class Value:
    def __str__(self):
        return "Value"


@dataclass(frozen=True)
class Uniform:
    count: int
    child: "IndexTree"

    def __post_init__(self):
        if self.count < 1:
            raise IndexTreeError(f"uniform node needs at least one child, got {self.count}")

    def __str__(self):
        return f"Uniform({self.count}, {self.child})"


@dataclass(frozen=True)
class NonUniform:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 1:
            raise IndexTreeError("non-uniform node needs at least one child")

    def __str__(self):
        return "NonUniform(" + ", ".join(str(c) for c in self.children) + ")"


IndexTree = Union[Value, Uniform, NonUniform]

VALUE = Value()


def make_node(children: Sequence[IndexTree]) -> IndexTree:
    """Inner node over the given children, compressed to Uniform when possible."""
    children = tuple(children)
    if not children:
        raise IndexTreeError("inner node needs at least one child")
    first = children[0]
    if all(c == first for c in children[1:]):
        return Uniform(len(children), first)
    return NonUniform(children)


def child_count(tree: IndexTree) -> int:
    if isinstance(tree, Uniform):
        return tree.count
    if isinstance(tree, NonUniform):
        return len(tree.children)
    return 0


def child(tree: IndexTree, i: int) -> IndexTree:
    if isinstance(tree, Uniform):
        if not 0 <= i < tree.count:
            raise IndexError(f"digit {i} out of range [0, {tree.count})")
        return tree.child
    if isinstance(tree, NonUniform):
        if not 0 <= i < len(tree.children):
            raise IndexError(f"digit {i} out of range [0, {len(tree.children)})")
        return tree.children[i]
    raise IndexError("cannot descend below a leaf")


def children(tree: IndexTree) -> list[IndexTree]:
    if isinstance(tree, Uniform):
        return [tree.child] * tree.count
    if isinstance(tree, NonUniform):
        return list(tree.children)
    return []


def subtree(tree: IndexTree, prefix: Sequence[int]) -> IndexTree:
    node = tree
    for pos, d in enumerate(prefix):
        try:
            node = child(node, d)
        except IndexError as exc:
            raise IndexTreeError(
                f"prefix {format_multi_index(prefix)} not in tree (digit {pos}: {exc})"
            ) from None
    return node


def deg_plus(tree: IndexTree, prefix: Sequence[int] = ()) -> int:
    """Out-degree of the node addressed by ``prefix``."""
    node = subtree(tree, prefix)
    if isinstance(node, Value):
        raise IndexTreeError(f"prefix {format_multi_index(prefix)} addresses a leaf")
    return child_count(node)


def leaf_count(tree: IndexTree) -> int:
    if isinstance(tree, Value):
        return 1
    if isinstance(tree, Uniform):
        return tree.count * leaf_count(tree.child)
    return sum(leaf_count(c) for c in tree.children)


def depth(tree: IndexTree) -> int:
    """Length of the longest leaf path."""
    if isinstance(tree, Value):
        return 0
    if isinstance(tree, Uniform):
        return 1 + depth(tree.child)
    return 1 + max(depth(c) for c in tree.children)


def leaf_depths(tree: IndexTree) -> frozenset[int]:
    if isinstance(tree, Value):
        return frozenset({0})
    if isinstance(tree, Uniform):
        return frozenset(d + 1 for d in leaf_depths(tree.child))
    return frozenset(d + 1 for c in tree.children for d in leaf_depths(c))


def leaf_paths(tree: IndexTree, prefix: tuple = ()) -> Iterator[tuple[int, ...]]:
    """All leaf paths in lexicographic order."""
    if isinstance(tree, Value):
        yield prefix
    elif isinstance(tree, Uniform):
        for i in range(tree.count):
            yield from leaf_paths(tree.child, prefix + (i,))
    else:
        for i, c in enumerate(tree.children):
            yield from leaf_paths(c, prefix + (i,))


def contains(tree: IndexTree, mi: Sequence[int]) -> bool:
    try:
        return isinstance(subtree(tree, mi), Value)
    except IndexTreeError:
        return False


def is_valid_index_tree(paths: Iterable[Sequence[int]]) -> bool:
    """Check the index-tree property of a set of multi-indices.

    Every digit must be preceded by all smaller siblings, and no member
    may be a strict prefix of another member.
    """
    members = {tuple(p) for p in paths}
    prefixes = set()
    for p in members:
        for n in range(len(p)):
            prefixes.add(p[:n])
    if members & prefixes:
        return False
    nodes = members | prefixes
    for p in nodes:
        if p and p[-1] > 0 and (p[:-1] + (p[-1] - 1,)) not in nodes:
            return False
    return True


def tree_from_paths(paths: Iterable[Sequence[int]]) -> IndexTree:
    """Rebuild the compressed tree of a valid set of multi-indices."""
    members = [tuple(p) for p in paths]
    if not is_valid_index_tree(members):
        raise IndexTreeError("paths do not form an index tree")
    if not members:
        raise IndexTreeError("empty path set")

    def build(group):
        if group == [()]:
            return VALUE
        by_first: dict[int, list] = {}
        for p in group:
            by_first.setdefault(p[0], []).append(p[1:])
        return make_node([build(by_first[i]) for i in range(len(by_first))])

    return build(members)


def format_tree(tree: IndexTree, indent: int = 0) -> str:
    """Indented rendering with one node per line and its size annotation."""
    pad = "  " * indent
    if isinstance(tree, Value):
        return pad + "Value"
    if isinstance(tree, Uniform):
        return f"{pad}Uniform[{tree.count}]\n" + format_tree(tree.child, indent + 1)
    lines = [f"{pad}NonUniform[{len(tree.children)}]"]
    lines.extend(format_tree(c, indent + 1) for c in tree.children)
    return "\n".join(lines)


class MergingStrategy(enum.Enum):
    FLAT_LEXICOGRAPHIC = "flatLexicographic"
    FLAT_INTERLEAVED = "flatInterleaved"
    BLOCKED_LEXICOGRAPHIC = "blockedLexicographic"
    BLOCKED_INTERLEAVED = "blockedInterleaved"
    BLOCKED_BY_ENTITY = "blockedByEntity"

    @property
    def is_flat(self) -> bool:
        return self in (MergingStrategy.FLAT_LEXICOGRAPHIC, MergingStrategy.FLAT_INTERLEAVED)

    @property
    def power_only(self) -> bool:
        return self in (
            MergingStrategy.FLAT_INTERLEAVED,
            MergingStrategy.BLOCKED_INTERLEAVED,
            MergingStrategy.BLOCKED_BY_ENTITY,
        )

    @classmethod
    def from_name(cls, name: str) -> "MergingStrategy":
        for s in cls:
            if s.value == name:
                return s
        raise ValueError(f"unknown merging strategy {name!r}")


FLAT_LEXICOGRAPHIC = MergingStrategy.FLAT_LEXICOGRAPHIC
FLAT_INTERLEAVED = MergingStrategy.FLAT_INTERLEAVED
BLOCKED_LEXICOGRAPHIC = MergingStrategy.BLOCKED_LEXICOGRAPHIC
BLOCKED_INTERLEAVED = MergingStrategy.BLOCKED_INTERLEAVED
BLOCKED_BY_ENTITY = MergingStrategy.BLOCKED_BY_ENTITY


def merge_index(
    strategy: MergingStrategy,
    child_index: int,
    child_mi: Sequence[int],
    *,
    offset: int | None = None,
    stride: int | None = None,
    entity_offset: int | None = None,
) -> tuple[int, ...]:
    """Map a child's multi-index to the parent's multi-index.

    ``offset`` is the first-digit offset of child ``child_index`` for
    flat-lexicographic merging, ``stride`` the number of children for
    flat-interleaved merging, and ``entity_offset`` the number of DOFs that
    earlier children attach to the same entity for blocked-by-entity
    merging.  For blocked-by-entity the last digit of ``child_mi`` is the
    within-entity index and all preceding digits identify the entity.
    """
    child_mi = tuple(child_mi)
    i = child_index
    if strategy is MergingStrategy.BLOCKED_LEXICOGRAPHIC:
        return (i,) + child_mi
    if strategy is MergingStrategy.BLOCKED_INTERLEAVED:
        return child_mi + (i,)
    if not child_mi:
        raise IndexTreeError(f"{strategy.value} needs a non-empty child multi-index")
    if strategy is MergingStrategy.FLAT_LEXICOGRAPHIC:
        if offset is None:
            raise IndexTreeError("flatLexicographic needs the child offset")
        return (offset + child_mi[0],) + child_mi[1:]
    if strategy is MergingStrategy.FLAT_INTERLEAVED:
        if stride is None:
            raise IndexTreeError("flatInterleaved needs the child count")
        return (child_mi[0] * stride + i,) + child_mi[1:]
    if strategy is MergingStrategy.BLOCKED_BY_ENTITY:
        if entity_offset is None:
            raise IndexTreeError("blockedByEntity needs the entity-local offset")
        if len(child_mi) < 2:
            raise IndexTreeError("blockedByEntity needs (entity..., within) multi-indices")
        return child_mi[:-1] + (child_mi[-1] + entity_offset,)
    raise IndexTreeError(f"unknown strategy {strategy}")


def flat_offsets(trees: Sequence[IndexTree]) -> list[int]:
    """First-digit offsets L_i = sum of root out-degrees of earlier children."""
    offsets, total = [], 0
    for t in trees:
        offsets.append(total)
        total += deg_plus(t, ())
    return offsets


def entity_offset(trees: Sequence[IndexTree], child_index: int, entity: Sequence[int]) -> int:
    """Number of DOFs that children before ``child_index`` attach to ``entity``."""
    return sum(deg_plus(t, entity) for t in trees[:child_index])


def _require_identical(strategy, trees):
    if any(t != trees[0] for t in trees[1:]):
        raise IndexTreeError(f"{strategy.value} requires identical children (power node)")


def _merge_by_entity(trees: Sequence[IndexTree]) -> IndexTree:
    first = trees[0]
    if isinstance(first, Value) or any(type(t) is not type(first) for t in trees):
        raise IndexTreeError("blockedByEntity children have incompatible entity layouts")
    if all(all(isinstance(c, Value) for c in children(t)) for t in trees):
        return Uniform(sum(child_count(t) for t in trees), VALUE)
    counts = {child_count(t) for t in trees}
    if len(counts) != 1:
        raise IndexTreeError("blockedByEntity children do not share the same entity set")
    n = counts.pop()
    return make_node([_merge_by_entity([child(t, k) for t in trees]) for k in range(n)])


def merge_tree(strategy: MergingStrategy, trees: Sequence[IndexTree]) -> IndexTree:
    """Index tree of a parent node whose children carry the given index trees."""
    trees = list(trees)
    if not trees:
        raise IndexTreeError("cannot merge an empty list of children")
    m = len(trees)

    if strategy is MergingStrategy.BLOCKED_LEXICOGRAPHIC:
        return make_node(trees)

    if strategy is MergingStrategy.BLOCKED_INTERLEAVED:
        _require_identical(strategy, trees)

        def append(t):
            if isinstance(t, Value):
                return Uniform(m, VALUE)
            return make_node([append(c) for c in children(t)])

        return append(trees[0])

    if strategy is MergingStrategy.BLOCKED_BY_ENTITY:
        return _merge_by_entity(trees)

    if any(isinstance(t, Value) for t in trees):
        raise IndexTreeError(f"{strategy.value} cannot merge a child with an empty multi-index")
    if strategy is MergingStrategy.FLAT_INTERLEAVED:
        _require_identical(strategy, trees)
        subs = [c for group in zip(*(children(t) for t in trees)) for c in group]
    elif strategy is MergingStrategy.FLAT_LEXICOGRAPHIC:
        subs = [c for t in trees for c in children(t)]
    else:
        raise IndexTreeError(f"unknown strategy {strategy}")
    # suffix shapes below the first digit must agree between children
    depths = {frozenset().union(*(leaf_depths(c) for c in children(t))) for t in trees}
    if len(depths) > 1:
        raise IndexTreeError(
            f"{strategy.value}: children have different depths below the first digit"
        )
    return make_node(subs)
