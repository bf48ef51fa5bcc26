"""Restriction of a global basis to single cells.

Local indices are assigned leaf by leaf in depth-first pre-order, so each
leaf occupies a contiguous range ``offset .. offset + size - 1``.  Since all
leaves are Lagrange elements on triangles, these ranges do not depend on the
bound cell and the local tree is built once per view.
"""

from __future__ import annotations

from .basistree import GlobalBasis, LeafBasis


class UnboundViewError(RuntimeError):
    pass


class LeafNode:
    def __init__(self, path, basis_node: LeafBasis, offset: int):
        self.path = path
        self.basis_node = basis_node
        self.offset = offset
        self.size = basis_node.fe.size

    is_leaf = True

    def finite_element(self):
        return self.basis_node.fe

    def local_index(self, k: int) -> int:
        if not 0 <= k < self.size:
            raise IndexError(f"leaf-local index {k} out of range [0, {self.size})")
        return self.offset + k

    def leaves(self):
        return [self]

    def __repr__(self):
        return f"LeafNode(path={self.path}, offset={self.offset}, size={self.size})"


class InnerNode:
    def __init__(self, path, kids, offset: int):
        self.path = path
        self.kids = kids
        self.offset = offset
        self.size = sum(k.size for k in kids)

    is_leaf = False

    def degree(self) -> int:
        return len(self.kids)

    def child(self, i: int):
        return self.kids[i]

    def leaves(self):
        return [leaf for k in self.kids for leaf in k.leaves()]

    def __repr__(self):
        return f"InnerNode(path={self.path}, children={len(self.kids)}, size={self.size})"


def _local_tree(node, path, offset):
    if isinstance(node, LeafBasis):
        return LeafNode(path, node, offset)
    kids = []
    for i, c in enumerate(node.children):
        kid = _local_tree(c, path + (i,), offset)
        offset += kid.size
        kids.append(kid)
    return InnerNode(path, kids, kids[0].offset if kids else offset)


class LocalView:
    """Cursor over the cells of a basis (or of a sub-tree of it).

    ``index(i)`` always returns the multi-index in the numbering of the
    root basis.  For a sub-tree view the local indices are renumbered from
    zero in pre-order of the sub-tree.
    """

    def __init__(self, root: GlobalBasis, prefix_path=(), basis=None):
        self.root = root
        self.basis = basis if basis is not None else root
        self.prefix_path = tuple(prefix_path)
        full = _local_tree(root.node, (), 0)
        node = full
        for pos, d in enumerate(self.prefix_path):
            if node.is_leaf or not 0 <= d < node.degree():
                raise IndexError(f"tree path {self.prefix_path} invalid at position {pos}")
            node = node.child(d)
        self._base = node.offset
        self._tree = _local_tree(root.node_at(self.prefix_path), self.prefix_path, 0)
        self._element = None
        self._indices = None

    def bind(self, cell: int) -> "LocalView":
        if not 0 <= cell < self.root.mesh.entity_count(0):
            raise IndexError(f"cell index {cell} out of range")
        indices = self.root.cell_indices(cell)
        self._indices = indices[self._base : self._base + self._tree.size]
        self._element = cell
        return self

    def unbind(self):
        self._element = None
        self._indices = None

    @property
    def bound(self) -> bool:
        return self._element is not None

    def element(self) -> int:
        self._check_bound()
        return self._element

    def _check_bound(self):
        if self._element is None:
            raise UnboundViewError("local view is unbound; call bind(cell) first")

    def tree(self):
        return self._tree

    def size(self) -> int:
        self._check_bound()
        return self._tree.size

    def max_size(self) -> int:
        return self._tree.size

    def index(self, i: int) -> tuple[int, ...]:
        self._check_bound()
        if not 0 <= i < len(self._indices):
            raise IndexError(f"local index {i} out of range [0, {len(self._indices)})")
        return self._indices[i]

    def indices(self) -> list[tuple[int, ...]]:
        self._check_bound()
        return list(self._indices)

    def tree_child(self, path=()):
        node = self._tree
        for pos, d in enumerate(path):
            if node.is_leaf or not 0 <= d < node.degree():
                raise IndexError(f"tree path {tuple(path)} invalid at position {pos}")
            node = node.child(d)
        return node


def local_view(basis) -> LocalView:
    return basis.local_view()


def bind(view: LocalView, cell: int) -> LocalView:
    return view.bind(cell)


def index(view: LocalView, i: int) -> tuple[int, ...]:
    return view.index(i)


def tree_child(view: LocalView, path) -> LeafNode | InnerNode:
    return view.tree_child(path)
