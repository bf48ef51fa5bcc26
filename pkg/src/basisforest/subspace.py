"""Sub-trees of a basis used as bases in their own right."""

from __future__ import annotations

from .basistree import GlobalBasis
from .descriptors import sub_descriptor
from .localview import LocalView


class SubspaceBasis:
    """The basis functions below ``prefix_path``, numbered as in the root basis.

    The multi-indices are in general neither consecutive nor zero-based.
    """

    def __init__(self, root: GlobalBasis, prefix_path=()):
        self.root_basis = root
        self.prefix_path = tuple(prefix_path)
        self.descriptor = sub_descriptor(root.descriptor, self.prefix_path)

    def __repr__(self):
        return f"SubspaceBasis({self.root_basis!r}, {self.prefix_path})"

    @property
    def mesh(self):
        return self.root_basis.mesh

    def local_view(self) -> LocalView:
        return LocalView(self.root_basis, self.prefix_path, basis=self)

    def container_descriptor(self):
        return self.root_basis.container_descriptor()

    def multi_indices(self) -> set[tuple[int, ...]]:
        view = self.local_view()
        out = set()
        for cell in range(self.mesh.entity_count(0)):
            view.bind(cell)
            out.update(view.indices())
        return out

    def dimension(self) -> int:
        return len(self.multi_indices())


def subspace_basis(basis, path=()) -> SubspaceBasis:
    if isinstance(basis, SubspaceBasis):
        return SubspaceBasis(basis.root_basis, basis.prefix_path + tuple(path))
    return SubspaceBasis(basis, path)


def root_basis(sb) -> GlobalBasis:
    return sb.root_basis


def prefix_path(sb) -> tuple:
    return sb.prefix_path
