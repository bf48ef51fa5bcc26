"""Structured triangle meshes of the unit square.

Vertices are ordered lexicographically by (y, x), cells row-major with the
lower triangle of each square before the upper one.  Edges are numbered by
first appearance while sweeping the cells in order, visiting each cell's
reference edges (0,1), (0,2), (1,2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# vertex pairs of the reference triangle edges
REFERENCE_EDGES = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class ElementGeometry:
    """Affine map x = origin + jacobian @ xi from the reference triangle."""

    origin: np.ndarray
    jacobian: np.ndarray

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.jacobian))

    @cached_property
    def jacobian_inverse(self) -> np.ndarray:
        return np.linalg.inv(self.jacobian)

    @cached_property
    def jacobian_inverse_transposed(self) -> np.ndarray:
        return self.jacobian_inverse.T

    def global_(self, xi) -> np.ndarray:
        return self.origin + self.jacobian @ np.asarray(xi, dtype=float)

    def local(self, x) -> np.ndarray:
        return self.jacobian_inverse @ (np.asarray(x, dtype=float) - self.origin)

    def integration_element(self) -> float:
        return abs(self.determinant)


class Mesh:
    """Conforming triangle mesh with vertex, edge and cell tables.

    Only meshes produced by :func:`make_structured_mesh` are supported; the
    grid resolution is kept for point location.
    """

    def __init__(self, vertices, cells, nx: int, ny: int):
        self.vertices = np.asarray(vertices, dtype=float)
        self.cells = tuple(tuple(int(v) for v in c) for c in cells)
        self.nx = nx
        self.ny = ny

        edge_ids: dict[tuple[int, int], int] = {}
        edges: list[tuple[int, int]] = []
        cell_edges = []
        edge_cells: list[list[int]] = []
        for ci, cell in enumerate(self.cells):
            local = []
            for a, b in REFERENCE_EDGES:
                key = tuple(sorted((cell[a], cell[b])))
                if key not in edge_ids:
                    edge_ids[key] = len(edges)
                    edges.append(key)
                    edge_cells.append([])
                e = edge_ids[key]
                edge_cells[e].append(ci)
                local.append(e)
            cell_edges.append(tuple(local))

        self.edges = tuple(edges)
        self.cell_edges = tuple(cell_edges)
        self.edge_cells = tuple(tuple(c) for c in edge_cells)
        self._edge_ids = edge_ids

    def __repr__(self):
        return f"Mesh(nx={self.nx}, ny={self.ny})"

    def entity_count(self, codim: int) -> int:
        if codim == 0:
            return len(self.cells)
        if codim == 1:
            return len(self.edges)
        if codim == 2:
            return len(self.vertices)
        raise ValueError(f"codim must be 0, 1 or 2, got {codim}")

    def edge_index(self, a: int, b: int) -> int:
        return self._edge_ids[(min(a, b), max(a, b))]

    def geometry(self, cell: int) -> ElementGeometry:
        if not 0 <= cell < len(self.cells):
            raise IndexError(f"cell index {cell} out of range [0, {len(self.cells)})")
        p0, p1, p2 = (self.vertices[v] for v in self.cells[cell])
        return ElementGeometry(p0.copy(), np.column_stack([p1 - p0, p2 - p0]))

    @cached_property
    def boundary_edges(self) -> tuple[int, ...]:
        return tuple(e for e, cs in enumerate(self.edge_cells) if len(cs) == 1)

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(v for e in self.boundary_edges for v in self.edges[e])

    def locate(self, x) -> tuple[int, np.ndarray]:
        """Return (cell, reference coordinates) of a world point in [0,1]^2."""
        px, py = float(x[0]), float(x[1])
        if not (-1e-12 <= px <= 1 + 1e-12 and -1e-12 <= py <= 1 + 1e-12):
            raise ValueError(f"point {(px, py)} lies outside the unit square")
        i = min(max(int(np.floor(px * self.nx)), 0), self.nx - 1)
        j = min(max(int(np.floor(py * self.ny)), 0), self.ny - 1)
        s = px * self.nx - i
        t = py * self.ny - j
        cell = 2 * (j * self.nx + i) + (0 if t <= s else 1)
        return cell, self.geometry(cell).local((px, py))


def make_structured_mesh(nx: int, ny: int) -> Mesh:
    """Split an nx-by-ny grid of squares along the lower-left/upper-right diagonals."""
    if nx < 1 or ny < 1:
        raise ValueError(f"mesh resolution must be positive, got ({nx}, {ny})")
    xs = np.linspace(0.0, 1.0, nx + 1)
    ys = np.linspace(0.0, 1.0, ny + 1)
    vertices = [(x, y) for y in ys for x in xs]

    def vid(i, j):
        return j * (nx + 1) + i

    cells = []
    for j in range(ny):
        for i in range(nx):
            v00, v10, v01, v11 = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            cells.append((v00, v10, v11))
            cells.append((v00, v11, v01))
    return Mesh(vertices, cells, nx, ny)


def entity_count(mesh: Mesh, codim: int) -> int:
    return mesh.entity_count(codim)


def geometry(mesh: Mesh, cell: int) -> ElementGeometry:
    return mesh.geometry(cell)


def boundary_edges(mesh: Mesh) -> list[int]:
    return list(mesh.boundary_edges)
