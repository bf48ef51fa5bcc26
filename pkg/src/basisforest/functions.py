"""Discrete functions, nodal interpolation and boundary DOF traversal."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .containers import ConstVectorBackend, NestedContainer, const_vector_backend, vector_backend


class ShapeMismatchError(ValueError):
    pass


def _container(coeffs) -> NestedContainer:
    return coeffs.container if isinstance(coeffs, ConstVectorBackend) else coeffs


def _check_shape(basis, coeffs, what="coefficient"):
    root = basis.root_basis
    if _container(coeffs).shape != root.container_descriptor():
        raise ShapeMismatchError(f"{what} container is not shaped for the root basis")


def _components(value, r: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=float)).ravel()
    if arr.size != r:
        raise ShapeMismatchError(f"function returned {arr.size} components, basis has {r} leaves")
    return arr


class LocalFunction:
    """Restriction of a discrete function to one bound cell."""

    def __init__(self, function: "DiscreteFunction"):
        self.function = function
        self.view = function.basis.local_view()
        self.leaves = self.view.tree().leaves()
        self._coeffs = None

    def bind(self, cell: int) -> "LocalFunction":
        self.view.bind(cell)
        c = self.function.coefficients
        self._coeffs = [
            np.array([c[self.view.index(leaf.local_index(k))] for k in range(leaf.size)])
            for leaf in self.leaves
        ]
        return self

    def __call__(self, xi) -> np.ndarray:
        if self._coeffs is None:
            raise RuntimeError("local function is unbound; call bind(cell) first")
        return np.array(
            [
                coeffs @ leaf.finite_element().evaluate_values(xi)
                for leaf, coeffs in zip(self.leaves, self._coeffs)
            ]
        )


class DiscreteFunction:
    """Sum of coefficient times basis function over a (sub)tree's leaves.

    Leaf number ``l`` in pre-order contributes to range component ``l``.
    """

    def __init__(self, basis, coefficients, range_dim: int):
        self.basis = basis
        self.coefficients = const_vector_backend(coefficients)
        self.range_dim = range_dim
        leaves = basis.local_view().tree().leaves()
        if len(leaves) != range_dim:
            raise ShapeMismatchError(
                f"range dimension {range_dim} does not match {len(leaves)} leaves"
            )
        _check_shape(basis, self.coefficients)

    def local_function(self) -> LocalFunction:
        return LocalFunction(self)

    def evaluate(self, cell: int, xi) -> np.ndarray:
        return self.local_function().bind(cell)(xi)

    def __call__(self, x) -> np.ndarray:
        cell, xi = self.basis.mesh.locate(x)
        return self.evaluate(cell, xi)


def make_discrete_function(basis, coefficients, range_dim: int) -> DiscreteFunction:
    return DiscreteFunction(basis, coefficients, range_dim)


def interpolate(basis, coefficients, f: Callable, mask=None):
    """Nodal interpolation of ``f`` into the coefficients of ``basis``.

    ``f`` maps a world point to a scalar or to one value per leaf of the
    (sub)tree.  Coefficients of other parts of the root basis are left
    untouched; with ``mask`` only entries flagged true are written.
    """
    backend = vector_backend(coefficients)
    _check_shape(basis, backend)
    if mask is not None:
        mask = _container(mask)
        if mask.shape != backend.shape:
            raise ShapeMismatchError("mask container does not match the coefficient shape")
    view = basis.local_view()
    leaves = view.tree().leaves()
    r = len(leaves)
    mesh = basis.mesh
    for cell in range(mesh.entity_count(0)):
        view.bind(cell)
        geo = mesh.geometry(cell)
        cache = {}
        for comp, leaf in enumerate(leaves):
            fe = leaf.finite_element()
            for k, xi in enumerate(fe.nodes):
                mi = view.index(leaf.local_index(k))
                if mask is not None and not mask[mi]:
                    continue
                key = (float(xi[0]), float(xi[1]))
                if key not in cache:
                    cache[key] = _components(f(geo.global_(xi)), r)
                backend[mi] = cache[key][comp]
    return backend.container


def interpolate_masked(basis, coefficients, f: Callable, mask):
    return interpolate(basis, coefficients, f, mask=mask)


def boundary_dofs(basis) -> list[tuple[int, ...]]:
    """Multi-indices of DOFs attached to boundary vertices or edges, first-seen order."""
    view = basis.local_view()
    leaves = view.tree().leaves()
    for leaf in leaves:
        if not leaf.basis_node.continuous:
            raise ValueError("boundary DOFs are only defined for continuous Lagrange leaves")
    mesh = basis.mesh
    boundary = {2: mesh.boundary_vertices, 1: frozenset(mesh.boundary_edges), 0: frozenset()}
    seen = set()
    out = []
    for cell in range(mesh.entity_count(0)):
        view.bind(cell)
        for leaf in leaves:
            for k, (codim, entity, _) in enumerate(leaf.basis_node.dof_entities(cell)):
                if entity in boundary[codim]:
                    mi = view.index(leaf.local_index(k))
                    if mi not in seen:
                        seen.add(mi)
                        out.append(mi)
    return out


def for_each_boundary_dof(basis, callback: Callable) -> None:
    for mi in boundary_dofs(basis):
        callback(mi)


def vertex_values(function: DiscreteFunction) -> np.ndarray:
    """Function values at the mesh vertices, shape (V, range_dim)."""
    mesh = function.basis.mesh
    out = np.zeros((mesh.entity_count(2), function.range_dim))
    corners = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    local = function.local_function()
    for cell, verts in enumerate(mesh.cells):
        local.bind(cell)
        for v, xi in zip(verts, corners):
            out[v] = local(xi)
    return out


def write_vtk(path, mesh, point_data: dict) -> None:
    """Legacy ASCII VTK file with scalar (V,) or vector (V, 2|3) point data."""
    lines = [
        "# vtk DataFile Version 3.0",
        "basisforest output",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {mesh.entity_count(2)} double",
    ]
    lines += [f"{x:.17g} {y:.17g} 0" for x, y in mesh.vertices]
    ncells = mesh.entity_count(0)
    lines.append(f"CELLS {ncells} {4 * ncells}")
    lines += [f"3 {a} {b} {c}" for a, b, c in mesh.cells]
    lines.append(f"CELL_TYPES {ncells}")
    lines += ["5"] * ncells
    lines.append(f"POINT_DATA {mesh.entity_count(2)}")
    for name, data in point_data.items():
        data = np.asarray(data, dtype=float)
        if data.ndim == 2 and data.shape[1] == 1:
            data = data[:, 0]
        if data.ndim == 1:
            lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default"]
            lines += [f"{v:.17g}" for v in data]
        else:
            padded = np.zeros((data.shape[0], 3))
            padded[:, : data.shape[1]] = data
            lines.append(f"VECTORS {name} double")
            lines += [" ".join(f"{v:.17g}" for v in row) for row in padded]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
