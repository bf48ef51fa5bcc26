"""Lagrange finite elements on the reference triangle.

Shape functions use the product form in barycentric coordinates: the node
with barycentric lattice index (a0, a1, a2), a0 + a1 + a2 = k, owns

    phi = prod_i prod_{j < a_i} (k * lambda_i - j) / (j + 1)

which is one at that node and zero at every other lattice point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from .mesh import REFERENCE_EDGES

MAX_DEGREE = 3

REFERENCE_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

# d(lambda_i)/d(xi) for lambda = (1 - x - y, x, y)
_BARY_GRAD = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])


class LocalKey(NamedTuple):
    subentity_codim: int
    subentity_index: int
    within_index: int


def barycentric(p) -> np.ndarray:
    x, y = float(p[0]), float(p[1])
    return np.array([1.0 - x - y, x, y])


def _lattice_nodes(k: int):
    """Barycentric lattice indices and keys, ordered vertices, edges, interior."""
    if k == 0:
        return [(0, 0, 0)], [LocalKey(0, 0, 0)]
    lattice, keys = [], []
    for v in range(3):
        a = [0, 0, 0]
        a[v] = k
        lattice.append(tuple(a))
        keys.append(LocalKey(2, v, 0))
    for e, (va, vb) in enumerate(REFERENCE_EDGES):
        # walk from the lower to the higher reference vertex
        for t in range(1, k):
            a = [0, 0, 0]
            a[va] = k - t
            a[vb] = t
            lattice.append(tuple(a))
            keys.append(LocalKey(1, e, t - 1))
    interior = sorted(
        (a0, a1, k - a0 - a1)
        for a0 in range(1, k)
        for a1 in range(1, k - a0)
        if k - a0 - a1 >= 1
    )
    for w, a in enumerate(interior):
        lattice.append(a)
        keys.append(LocalKey(0, 0, w))
    return lattice, keys


def _factor(k: int, a: int, lam: float) -> tuple[float, float]:
    """Value and lambda-derivative of prod_{j<a} (k*lam - j)/(j+1)."""
    value, deriv = 1.0, 0.0
    for j in range(a):
        f = (k * lam - j) / (j + 1)
        df = k / (j + 1)
        deriv = deriv * f + value * df
        value *= f
    return value, deriv


@dataclass(frozen=True)
class LagrangeSimplex:
    """Equispaced Lagrange element of degree k on the reference triangle."""

    degree: int

    def __post_init__(self):
        if not 0 <= self.degree <= MAX_DEGREE:
            raise ValueError(f"Lagrange degree must be in 0..{MAX_DEGREE}, got {self.degree}")

    @cached_property
    def _table(self):
        return _lattice_nodes(self.degree)

    @property
    def lattice(self) -> list[tuple[int, int, int]]:
        return self._table[0]

    @property
    def keys(self) -> list[LocalKey]:
        return self._table[1]

    @property
    def size(self) -> int:
        return (self.degree + 1) * (self.degree + 2) // 2

    def __len__(self):
        return self.size

    @cached_property
    def nodes(self) -> np.ndarray:
        """Nodal points in reference coordinates, one row per shape function."""
        if self.degree == 0:
            return np.array([[1.0 / 3.0, 1.0 / 3.0]])
        return np.array([[a[1] / self.degree, a[2] / self.degree] for a in self.lattice])

    def dofs_per_entity(self, codim: int) -> int:
        """Number of shape functions attached to a single subentity of the given codim."""
        return sum(1 for key in self.keys if key.subentity_codim == codim and key.subentity_index == 0)

    def evaluate_values(self, p) -> np.ndarray:
        lam = barycentric(p)
        if self.degree == 0:
            return np.ones(1)
        k = self.degree
        out = np.empty(self.size)
        for n, a in enumerate(self.lattice):
            out[n] = np.prod([_factor(k, a[i], lam[i])[0] for i in range(3)])
        return out

    def evaluate_gradients(self, p) -> np.ndarray:
        """Reference gradients, shape (size, 2)."""
        lam = barycentric(p)
        if self.degree == 0:
            return np.zeros((1, 2))
        k = self.degree
        out = np.zeros((self.size, 2))
        for n, a in enumerate(self.lattice):
            f = [_factor(k, a[i], lam[i]) for i in range(3)]
            for i in range(3):
                others = np.prod([f[j][0] for j in range(3) if j != i])
                out[n] += f[i][1] * others * _BARY_GRAD[i]
        return out

    def interpolate_local(self, f: Callable) -> np.ndarray:
        """Nodal interpolation: coefficient i is f at node i."""
        return np.array([float(f(x)) for x in self.nodes])


def lagrange_simplex(k: int) -> LagrangeSimplex:
    return LagrangeSimplex(k)


def evaluate_values(fe: LagrangeSimplex, p) -> np.ndarray:
    return fe.evaluate_values(p)


def evaluate_gradients(fe: LagrangeSimplex, p) -> np.ndarray:
    return fe.evaluate_gradients(p)


def interpolate_local(fe: LagrangeSimplex, f: Callable) -> np.ndarray:
    return fe.interpolate_local(f)
