"""Element-wise assembly over local views and the Poisson / Stokes demos."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .basistree import GlobalBasis, make_basis
from .containers import make_container
from .descriptors import Lagrange, taylor_hood
from .functions import boundary_dofs, interpolate, make_discrete_function
from .indexing import BLOCKED_INTERLEAVED, BLOCKED_LEXICOGRAPHIC, leaf_paths
from .mesh import make_structured_mesh
from .subspace import subspace_basis

# symmetric 6-point rule, exact for polynomials of degree 4; weights sum to 1
_A, _WA = 0.445948490915965, 0.223381589678011
_B, _WB = 0.091576213509771, 0.109951743655322
QUADRATURE_POINTS = np.array(
    [[_A, _A], [1 - 2 * _A, _A], [_A, 1 - 2 * _A], [_B, _B], [1 - 2 * _B, _B], [_B, 1 - 2 * _B]]
)
QUADRATURE_WEIGHTS = 0.5 * np.array([_WA] * 3 + [_WB] * 3)  # reference area 1/2

DEFAULT_MAX_CELLS = 16 * 16


class NumericalFailure(RuntimeError):
    pass


@dataclass
class DemoReport:
    """Line-oriented ``key=value`` summary of a demo run."""

    values: dict = field(default_factory=dict)
    basis: GlobalBasis | None = None
    coefficients: object = None

    def __getitem__(self, key):
        return self.values[key]

    def __setitem__(self, key, value):
        self.values[key] = value

    def format(self) -> str:
        def text(v):
            return f"{v:.6e}" if isinstance(v, float) else str(v)

        return "\n".join(f"{k}={text(v)}" for k, v in self.values.items())


def flat_numbering(basis) -> dict[tuple[int, ...], int]:
    """Position of each multi-index in lexicographic leaf order."""
    return {mi: n for n, mi in enumerate(leaf_paths(basis.container_descriptor()))}


def occupation_pattern(basis) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs of multi-indices whose basis functions share a cell."""
    view = basis.local_view()
    pairs = set()
    for cell in range(basis.mesh.entity_count(0)):
        view.bind(cell)
        idx = view.indices()
        pairs.update((i, j) for i in idx for j in idx)
    return pairs


def pattern_matrix(basis) -> np.ndarray:
    pos = flat_numbering(basis)
    n = len(pos)
    out = np.zeros((n, n), dtype=bool)
    for i, j in occupation_pattern(basis):
        out[pos[i], pos[j]] = True
    return out


def write_pbm(path, matrix: np.ndarray) -> None:
    """Plain PBM; 1 (black) marks a potentially nonzero entry."""
    rows, cols = matrix.shape
    with open(path, "w") as fh:
        fh.write(f"P1\n{cols} {rows}\n")
        for row in matrix:
            fh.write(" ".join("1" if v else "0" for v in row) + "\n")


def _shape_tables(fe, geo):
    """Values (q, n) and world gradients (q, n, 2) at the quadrature points."""
    values = np.array([fe.evaluate_values(p) for p in QUADRATURE_POINTS])
    grads = np.array([fe.evaluate_gradients(p) for p in QUADRATURE_POINTS]) @ geo.jacobian_inverse
    return values, grads


def assemble_poisson(basis: GlobalBasis, f):
    pos = flat_numbering(basis)
    n = len(pos)
    rows, cols, vals = [], [], []
    rhs = np.zeros(n)
    view = basis.local_view()
    leaf = view.tree()
    fe = leaf.finite_element()
    mesh = basis.mesh
    for cell in range(mesh.entity_count(0)):
        view.bind(cell)
        geo = mesh.geometry(cell)
        values, grads = _shape_tables(fe, geo)
        weights = QUADRATURE_WEIGHTS * geo.integration_element()
        local_a = np.einsum("q,qid,qjd->ij", weights, grads, grads)
        fq = np.array([f(geo.global_(p)) for p in QUADRATURE_POINTS])
        local_b = values.T @ (weights * fq)
        g = [pos[view.index(leaf.local_index(k))] for k in range(leaf.size)]
        for a, ga in enumerate(g):
            rhs[ga] += local_b[a]
            rows.extend([ga] * len(g))
            cols.extend(g)
            vals.extend(local_a[a])
    matrix = scipy.sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    return matrix, rhs, pos


def _nodal_points(basis):
    """(multi-index, world point, leaf number) for every DOF, deduplicated."""
    view = basis.local_view()
    leaves = view.tree().leaves()
    seen = {}
    mesh = basis.mesh
    for cell in range(mesh.entity_count(0)):
        view.bind(cell)
        geo = mesh.geometry(cell)
        for comp, leaf in enumerate(leaves):
            for k, xi in enumerate(leaf.finite_element().nodes):
                mi = view.index(leaf.local_index(k))
                if mi not in seen:
                    seen[mi] = (geo.global_(xi), comp)
    return seen


# corners, edge midpoints and barycenter of the reference triangle
SAMPLE_POINTS = np.array(
    [(0, 0), (1, 0), (0, 1), (0.5, 0), (0, 0.5), (0.5, 0.5), (1 / 3, 1 / 3)], dtype=float
)


def solve_poisson(nx: int, ny: int, degree: int, exact=None, source=None) -> DemoReport:
    """-Laplace u = f with Dirichlet data from ``exact``; defaults to u = x^2 + y^2, f = -4."""
    if degree not in (1, 2, 3):
        raise ValueError(f"Poisson demo degree must be 1, 2 or 3, got {degree}")
    if exact is None:
        exact = lambda x: x[0] ** 2 + x[1] ** 2  # noqa: E731
        source = lambda x: -4.0  # noqa: E731
    elif source is None:
        raise ValueError("a custom exact solution needs its source term")
    mesh = make_structured_mesh(nx, ny)
    basis = make_basis(mesh, Lagrange(degree))
    matrix, rhs, pos = assemble_poisson(basis, source)
    n = len(pos)

    coeffs = make_container(basis.container_descriptor(), 0.0)
    mask = make_container(basis.container_descriptor(), False)
    for mi in boundary_dofs(basis):
        mask[mi] = True
    interpolate(basis, coeffs, exact, mask=mask)

    is_bnd = np.zeros(n, dtype=bool)
    u = np.zeros(n)
    for mi, p in pos.items():
        is_bnd[p] = mask[mi]
        u[p] = coeffs[mi]
    inner = ~is_bnd
    a_ii = matrix[inner][:, inner]
    b = rhs[inner] - matrix[inner][:, is_bnd] @ u[is_bnd]
    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    if a_ii.shape[0]:
        x, info = scipy.sparse.linalg.cg(
            a_ii, b, rtol=1e-12, atol=0.0, maxiter=10 * n, callback=count
        )
        if info != 0:
            raise NumericalFailure(f"conjugate gradients did not converge (info={info})")
        u[inner] = x
    for mi, p in pos.items():
        coeffs[mi] = u[p]

    uh = make_discrete_function(basis, coeffs, 1)
    nodal = max(abs(coeffs[mi] - exact(x)) for mi, (x, _) in _nodal_points(basis).items())
    local = uh.local_function()
    sampled = 0.0
    for cell in range(mesh.entity_count(0)):
        local.bind(cell)
        geo = mesh.geometry(cell)
        for xi in SAMPLE_POINTS:
            sampled = max(sampled, abs(local(xi)[0] - exact(geo.global_(xi))))

    report = DemoReport()
    report["problem"] = "poisson"
    report["nx"] = nx
    report["ny"] = ny
    report["basis"] = f"lagrange({degree})"
    report["dimension"] = basis.dimension()
    report["solver"] = "cg"
    report["iterations"] = iterations
    report["nodal_error"] = float(nodal)
    report["max_error"] = float(max(sampled, nodal))
    report.basis = basis
    report.coefficients = coeffs
    return report


def stokes_basis(nx: int, ny: int, layout: str = "fig4", dim: int = 2) -> GlobalBasis:
    if layout not in ("fig3", "fig4"):
        raise ValueError(f"layout must be 'fig3' or 'fig4', got {layout!r}")
    strategy = BLOCKED_INTERLEAVED if layout == "fig4" else BLOCKED_LEXICOGRAPHIC
    return make_basis(make_structured_mesh(nx, ny), taylor_hood(dim, strategy))


def assemble_stokes(basis: GlobalBasis) -> tuple[np.ndarray, dict]:
    """Dense Taylor-Hood Stokes operator (viscosity 1) without boundary conditions."""
    pos = flat_numbering(basis)
    n = len(pos)
    matrix = np.zeros((n, n))
    view = basis.local_view()
    velocity = view.tree_child((0,))
    pressure = view.tree_child((1,))
    dim = velocity.degree()
    vfe = velocity.child(0).finite_element()
    pfe = pressure.finite_element()
    mesh = basis.mesh
    for cell in range(mesh.entity_count(0)):
        view.bind(cell)
        geo = mesh.geometry(cell)
        weights = QUADRATURE_WEIGHTS * geo.integration_element()
        _, vgrad = _shape_tables(vfe, geo)
        pval, _ = _shape_tables(pfe, geo)
        lap = np.einsum("q,qid,qjd->ij", weights, vgrad, vgrad)
        pg = [pos[view.index(pressure.local_index(k))] for k in range(pressure.size)]
        for d in range(dim):
            leaf = velocity.child(d)
            vg = [pos[view.index(leaf.local_index(k))] for k in range(leaf.size)]
            matrix[np.ix_(vg, vg)] += lap
            # -(q, d_d v)
            div = -np.einsum("q,qi,qj->ij", weights, pval, vgrad[:, :, d])
            matrix[np.ix_(pg, vg)] += div
            matrix[np.ix_(vg, pg)] += div.T
    return matrix, pos


def poiseuille_velocity(x):
    return (x[1] * (1 - x[1]), 0.0)


def poiseuille_pressure(x):
    return -2.0 * x[0]


def solve_stokes(nx: int, ny: int, layout: str = "fig4", max_cells: int = DEFAULT_MAX_CELLS):
    if nx * ny > max_cells:
        raise ValueError(f"mesh {nx}x{ny} exceeds the dense-solve cap of {max_cells} squares")
    basis = stokes_basis(nx, ny, layout)
    matrix, pos = assemble_stokes(basis)
    n = len(pos)
    system = matrix.copy()
    rhs = np.zeros(n)

    velocity = subspace_basis(basis, (0,))
    coeffs = make_container(basis.container_descriptor(), 0.0)
    mask = make_container(basis.container_descriptor(), False)
    for mi in boundary_dofs(velocity):
        mask[mi] = True
    interpolate(velocity, coeffs, poiseuille_velocity, mask=mask)

    fixed = {pos[mi]: coeffs[mi] for mi, _ in mask.items() if mask[mi]}
    fixed[pos[(1, 0)]] = 0.0  # pressure gauge
    for row, value in fixed.items():
        system[row, :] = 0.0
        system[row, row] = 1.0
        rhs[row] = value
    try:
        sol = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"singular Stokes system: {exc}") from None
    for mi, p in pos.items():
        coeffs[mi] = sol[p]

    verr = 0.0
    perr = []
    nodes = _nodal_points(basis)
    for mi, (x, comp) in nodes.items():
        if mi[0] == 0:
            verr = max(verr, abs(coeffs[mi] - poiseuille_velocity(x)[comp]))
        else:
            perr.append(coeffs[mi] - poiseuille_pressure(x))
    perr = np.array(perr)
    perr -= perr.mean()

    report = DemoReport()
    report["problem"] = "stokes"
    report["nx"] = nx
    report["ny"] = ny
    report["layout"] = layout
    report["basis"] = (
        "composite(power(lagrange(2),2,"
        + ("blockedInterleaved" if layout == "fig4" else "blockedLexicographic")
        + "),lagrange(1),blockedLexicographic)"
    )
    report["dimension"] = basis.dimension()
    report["solver"] = "dense-lu"
    report["iterations"] = 1
    report["velocity_error"] = float(verr)
    report["pressure_error"] = float(np.abs(perr).max())
    report.basis = basis
    report.coefficients = coeffs
    return report
