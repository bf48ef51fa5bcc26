"""Nested scalar containers shaped by index trees, and backend views on them."""

from __future__ import annotations

from typing import Iterator

from .indexing import IndexTree, Uniform, Value, format_multi_index, leaf_paths


class ContainerIndexError(LookupError):
    pass


def _build(shape: IndexTree, default):
    if isinstance(shape, Value):
        return default
    if isinstance(shape, Uniform):
        return [_build(shape.child, default) for _ in range(shape.count)]
    return [_build(c, default) for c in shape.children]


class NestedContainer:
    """Dense tree-shaped storage; ``Value`` leaves hold one scalar each.

    The scalar type is fixed per container: ``float`` or ``bool``.  Mask
    containers use ``bool`` scalars stored unpacked.
    """

    def __init__(self, shape: IndexTree | None, default=0.0):
        self.scalar_type = bool if isinstance(default, bool) else float
        self.default = self.scalar_type(default)
        self.shape = shape
        # a root holder keeps the root-is-a-leaf case uniform
        self._root = [_build(shape, self.default)] if shape is not None else []

    def __repr__(self):
        return f"NestedContainer({self.shape}, {self.scalar_type.__name__})"

    def _parent(self, mi):
        if self.shape is None:
            raise ContainerIndexError("container has no shape; resize it first")
        mi = tuple(mi)
        node, data, key = self.shape, self._root, 0
        for pos, d in enumerate(mi):
            if isinstance(node, Value):
                raise ContainerIndexError(
                    f"multi-index {format_multi_index(mi)} too long (leaf reached after {pos} digits)"
                )
            n = node.count if isinstance(node, Uniform) else len(node.children)
            if not 0 <= d < n:
                raise ContainerIndexError(
                    f"digit {pos} of {format_multi_index(mi)} out of range [0, {n})"
                )
            data = data[key]
            key = d
            node = node.child if isinstance(node, Uniform) else node.children[d]
        if not isinstance(node, Value):
            raise ContainerIndexError(
                f"multi-index {format_multi_index(mi)} addresses a block, not a scalar"
            )
        return data, key

    def __getitem__(self, mi):
        data, key = self._parent(mi)
        return data[key]

    def __setitem__(self, mi, value):
        data, key = self._parent(mi)
        data[key] = self.scalar_type(value)

    def leaf_paths(self) -> Iterator[tuple[int, ...]]:
        if self.shape is None:
            return iter(())
        return leaf_paths(self.shape)

    def items(self):
        for mi in self.leaf_paths():
            yield mi, self[mi]

    def __len__(self):
        return sum(1 for _ in self.leaf_paths())

    def copy(self) -> "NestedContainer":
        out = NestedContainer(self.shape, self.default)
        for mi, v in self.items():
            out[mi] = v
        return out

    def reshape(self, shape: IndexTree):
        self.shape = shape
        self._root = [_build(shape, self.default)]

    def dump(self) -> str:
        """One ``multi-index value`` line per scalar, in lexicographic order."""
        lines = []
        for mi, v in self.items():
            text = ("1" if v else "0") if self.scalar_type is bool else repr(v)
            lines.append(f"{format_multi_index(mi)} {text}")
        return "\n".join(lines)


def make_container(descriptor: IndexTree, default=0.0) -> NestedContainer:
    return NestedContainer(descriptor, default)


class ConstVectorBackend:
    """Read access to a nested container by multi-index."""

    mutable = False

    def __init__(self, container: NestedContainer):
        self.container = container

    def __getitem__(self, mi):
        return self.container[mi]

    @property
    def shape(self):
        return self.container.shape


class VectorBackend(ConstVectorBackend):
    """Read/write access plus basis-driven resizing."""

    mutable = True

    def __setitem__(self, mi, value):
        self.container[mi] = value

    def resize(self, basis) -> NestedContainer:
        """Reshape to the basis' container descriptor; values are reset to the default."""
        self.container.reshape(basis.container_descriptor())
        return self.container


def const_vector_backend(container) -> ConstVectorBackend:
    if isinstance(container, ConstVectorBackend):
        return ConstVectorBackend(container.container)
    return ConstVectorBackend(container)


def vector_backend(container) -> VectorBackend:
    if isinstance(container, VectorBackend):
        return container
    if isinstance(container, ConstVectorBackend):
        raise TypeError("cannot obtain a mutable backend from a const view")
    return VectorBackend(container)


def get(view: ConstVectorBackend, mi):
    return view[mi]


def set(view: VectorBackend, mi, value):  # noqa: A001
    if not view.mutable:
        raise TypeError("const backend view is read-only")
    view[mi] = value


def resize(view: VectorBackend, basis) -> NestedContainer:
    return view.resize(basis)


__all__ = [
    "ContainerIndexError",
    "NestedContainer",
    "ConstVectorBackend",
    "VectorBackend",
    "make_container",
    "const_vector_backend",
    "vector_backend",
    "get",
    "set",
    "resize",
]
