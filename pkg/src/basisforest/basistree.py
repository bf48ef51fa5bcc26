"""Global bases assembled from descriptor trees.

Each descriptor node becomes a node basis that knows its own index tree and,
for any cell, the multi-indices of its shape functions on that cell in
depth-first pre-order of the leaves.  Inner nodes build both from their
children with :func:`merge_tree` and :func:`merge_index`.
"""

from __future__ import annotations

from functools import cached_property

from . import indexing
from .descriptors import (
    BasisDescriptor,
    Composite,
    Lagrange,
    Power,
    format_descriptor,
    parse_descriptor,
    sub_descriptor,
    validate,
)
from .indexing import (
    VALUE,
    IndexTree,
    IndexTreeError,
    MergingStrategy,
    Uniform,
    deg_plus,
    make_node,
    merge_index,
    merge_tree,
)
from .localfe import LagrangeSimplex
from .mesh import REFERENCE_EDGES, Mesh

# entity classes in numbering order: (codim, name)
ENTITY_CLASSES = ((2, "vertex"), (1, "edge"), (0, "cell"))


class LeafBasis:
    """Lagrange leaf over a mesh.

    Continuous leaves number vertex DOFs first, then edge DOFs, then cell
    DOFs, each block ordered by entity index and within-entity index.
    Discontinuous leaves use (cell, within-cell) pairs.
    """

    def __init__(self, mesh: Mesh, degree: int, continuous: bool = True):
        self.mesh = mesh
        self.fe = LagrangeSimplex(degree)
        self.continuous = continuous
        self.multiplicity = {codim: self.fe.dofs_per_entity(codim) for codim, _ in ENTITY_CLASSES}
        self.block_offset = {}
        total = 0
        for codim, _ in ENTITY_CLASSES:
            self.block_offset[codim] = total
            total += mesh.entity_count(codim) * self.multiplicity[codim]
        self.size = total if continuous else mesh.entity_count(0) * self.fe.size

    @cached_property
    def index_tree(self) -> IndexTree:
        if self.continuous:
            return Uniform(self.size, VALUE)
        return Uniform(self.mesh.entity_count(0), Uniform(self.fe.size, VALUE))

    def dof_entities(self, cell: int) -> list[tuple[int, int, int]]:
        """(codim, global entity, within-entity index) for each local DOF."""
        mesh = self.mesh
        verts = mesh.cells[cell]
        out = []
        for key in self.fe.keys:
            codim, sub, w = key
            if codim == 2:
                out.append((2, verts[sub], w))
            elif codim == 1:
                a, b = REFERENCE_EDGES[sub]
                edge = mesh.cell_edges[cell][sub]
                if verts[a] > verts[b]:
                    w = self.multiplicity[1] - 1 - w
                out.append((1, edge, w))
            else:
                out.append((0, cell, w))
        return out

    def cell_indices(self, cell: int) -> list[tuple[int, ...]]:
        if not self.continuous:
            return [(cell, k) for k in range(self.fe.size)]
        return [
            (self.block_offset[codim] + entity * self.multiplicity[codim] + w,)
            for codim, entity, w in self.dof_entities(cell)
        ]

    # entity-resolved numbering (class, entity, within) for blockedByEntity parents
    @cached_property
    def _classes(self):
        return [codim for codim, _ in ENTITY_CLASSES if self.multiplicity[codim] > 0]

    @cached_property
    def entity_tree(self) -> IndexTree:
        return make_node(
            [
                Uniform(self.mesh.entity_count(codim), Uniform(self.multiplicity[codim], VALUE))
                for codim in self._classes
            ]
        )

    def cell_entity_indices(self, cell: int) -> list[tuple[int, ...]]:
        cls = {codim: i for i, codim in enumerate(self._classes)}
        return [(cls[codim], entity, w) for codim, entity, w in self.dof_entities(cell)]


class PowerBasis:
    def __init__(self, child: LeafBasis | "PowerBasis" | "CompositeBasis", exponent: int, strategy):
        self.child = child
        self.exponent = exponent
        self.strategy = strategy
        self.by_entity = strategy is MergingStrategy.BLOCKED_BY_ENTITY
        if self.by_entity and not (isinstance(child, LeafBasis) and child.continuous):
            raise IndexTreeError("blockedByEntity needs a power of a continuous Lagrange leaf")
        child_tree = child.entity_tree if self.by_entity else child.index_tree
        self._child_trees = [child_tree] * exponent
        self.index_tree = merge_tree(strategy, self._child_trees)
        self._offsets = (
            indexing.flat_offsets(self._child_trees)
            if strategy is MergingStrategy.FLAT_LEXICOGRAPHIC
            else None
        )

    @property
    def children(self):
        return [self.child] * self.exponent

    def cell_indices(self, cell: int) -> list[tuple[int, ...]]:
        if self.by_entity:
            child_mis = self.child.cell_entity_indices(cell)
            tree = self._child_trees[0]
            return [
                merge_index(self.strategy, i, mi, entity_offset=i * deg_plus(tree, mi[:-1]))
                for i in range(self.exponent)
                for mi in child_mis
            ]
        child_mis = self.child.cell_indices(cell)
        return [
            merge_index(
                self.strategy,
                i,
                mi,
                offset=self._offsets[i] if self._offsets else None,
                stride=self.exponent,
            )
            for i in range(self.exponent)
            for mi in child_mis
        ]


class CompositeBasis:
    def __init__(self, children: list, strategy):
        if strategy.power_only:
            raise IndexTreeError(f"{strategy.value} is only allowed on power nodes")
        self.children = list(children)
        self.strategy = strategy
        trees = [c.index_tree for c in self.children]
        self.index_tree = merge_tree(strategy, trees)
        self._offsets = (
            indexing.flat_offsets(trees) if strategy is MergingStrategy.FLAT_LEXICOGRAPHIC else None
        )

    def cell_indices(self, cell: int) -> list[tuple[int, ...]]:
        return [
            merge_index(
                self.strategy, i, mi, offset=self._offsets[i] if self._offsets else None
            )
            for i, c in enumerate(self.children)
            for mi in c.cell_indices(cell)
        ]


def _build(mesh: Mesh, desc: BasisDescriptor):
    if isinstance(desc, Lagrange):
        return LeafBasis(mesh, desc.degree, desc.continuous)
    if isinstance(desc, Power):
        return PowerBasis(_build(mesh, desc.child), desc.exponent, desc.strategy)
    if isinstance(desc, Composite):
        return CompositeBasis([_build(mesh, c) for c in desc.children], desc.strategy)
    raise TypeError(f"not a basis descriptor: {desc!r}")


class GlobalBasis:
    """A basis tree bound to a mesh, with its global multi-index numbering."""

    def __init__(self, mesh: Mesh, descriptor: BasisDescriptor):
        self.mesh = mesh
        self.descriptor = validate(descriptor)
        self.node = _build(mesh, descriptor)
        tree = self.node.index_tree
        if indexing.depth(tree) > indexing.MAX_MULTI_INDEX_LENGTH:
            raise IndexTreeError(
                f"multi-indices of length {indexing.depth(tree)} exceed capacity "
                f"{indexing.MAX_MULTI_INDEX_LENGTH}"
            )
        self._tree = tree

    def __repr__(self):
        return f"GlobalBasis({self.mesh!r}, {format_descriptor(self.descriptor)!r})"

    @property
    def root_basis(self) -> "GlobalBasis":
        return self

    @property
    def prefix_path(self) -> tuple:
        return ()

    def dimension(self) -> int:
        return indexing.leaf_count(self._tree)

    def container_descriptor(self) -> IndexTree:
        return self._tree

    index_tree = container_descriptor

    def size_of_prefix(self, prefix=()) -> int:
        return deg_plus(self._tree, tuple(prefix))

    def node_at(self, path):
        """Node basis addressed by a tree path."""
        node = self.node
        for d in path:
            node = node.children[d]
        return node

    def cell_indices(self, cell: int) -> list[tuple[int, ...]]:
        return self.node.cell_indices(cell)

    def local_view(self):
        from .localview import LocalView

        return LocalView(self)


def make_basis(mesh: Mesh, descriptor: BasisDescriptor | str) -> GlobalBasis:
    if isinstance(descriptor, str):
        descriptor = parse_descriptor(descriptor)
    return GlobalBasis(mesh, descriptor)


def dimension(basis: GlobalBasis) -> int:
    return basis.dimension()


def container_descriptor(basis: GlobalBasis) -> IndexTree:
    return basis.container_descriptor()


def size_of_prefix(basis: GlobalBasis, prefix=()) -> int:
    return basis.size_of_prefix(prefix)


__all__ = [
    "GlobalBasis",
    "LeafBasis",
    "PowerBasis",
    "CompositeBasis",
    "make_basis",
    "dimension",
    "container_descriptor",
    "size_of_prefix",
    "sub_descriptor",
]
