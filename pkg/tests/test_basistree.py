import itertools

import numpy as np
import pytest

from basisforest import make_basis, make_structured_mesh
from basisforest.basistree import container_descriptor, dimension, size_of_prefix
from basisforest.descriptors import composite, dg, lagrange, power, taylor_hood
from basisforest.indexing import (
    BLOCKED_INTERLEAVED,
    VALUE,
    IndexTreeError,
    NonUniform,
    Uniform,
    is_valid_index_tree,
    leaf_paths,
)

from conftest import BASIS_MATRIX, MESH_SIZES


def gather(basis):
    view = basis.local_view()
    out = []
    for c in range(basis.mesh.entity_count(0)):
        view.bind(c)
        out.extend(view.indices())
    return out


def node_map(basis):
    """(cell-or-None, leaf number, world node) -> multi-index, from local views.

    Continuous leaves key nodes by position only, so a shared DOF seen from two
    cells must map to the same multi-index.
    """
    view = basis.local_view()
    leaves = view.tree().leaves()
    seen = {}
    for c in range(basis.mesh.entity_count(0)):
        view.bind(c)
        geo = basis.mesh.geometry(c)
        for n, leaf in enumerate(leaves):
            for k, xi in enumerate(leaf.finite_element().nodes):
                x = tuple(np.round(geo.global_(xi), 12))
                key = (None if leaf.basis_node.continuous else c, n, x)
                mi = view.index(leaf.local_index(k))
                assert seen.setdefault(key, mi) == mi
    return seen


def test_p1_dimension_is_vertex_count():
    for nx, ny in [(1, 1), (2, 2), (3, 5)]:
        mesh = make_structured_mesh(nx, ny)
        assert dimension(make_basis(mesh, lagrange(1))) == mesh.entity_count(2)


def test_dimensions_on_unit_mesh(unit_mesh, th_fig4):
    assert dimension(make_basis(unit_mesh, lagrange(2))) == 9
    assert dimension(th_fig4) == 22
    assert dimension(make_basis(unit_mesh, "power(lagrange(1),3,flatInterleaved)")) == 12


def test_p1_on_2x2(mesh22):
    assert make_basis(mesh22, lagrange(1)).dimension() == 9


def test_container_descriptor_taylor_hood(th_fig4):
    assert container_descriptor(th_fig4) == NonUniform(
        (Uniform(9, Uniform(2, VALUE)), Uniform(4, VALUE))
    )


def test_container_descriptor_scalar(unit_mesh):
    assert make_basis(unit_mesh, lagrange(1)).container_descriptor() == Uniform(4, VALUE)
    flat = make_basis(unit_mesh, composite(lagrange(1), lagrange(1), "flatLexicographic"))
    assert flat.container_descriptor() == Uniform(8, VALUE)
    assert set(gather(flat)) == {(k,) for k in range(8)}


def test_size_of_prefix(th_fig4, unit_mesh):
    assert size_of_prefix(th_fig4, ()) == 2
    assert size_of_prefix(th_fig4, (1,)) == 4
    assert size_of_prefix(th_fig4, (0,)) == 9
    assert size_of_prefix(make_basis(unit_mesh, lagrange(1)), ()) == 4
    with pytest.raises(IndexTreeError):
        size_of_prefix(th_fig4, (1, 0))


def test_dg_leaf_indices(unit_mesh):
    basis = make_basis(unit_mesh, dg(1))
    assert basis.container_descriptor() == Uniform(2, Uniform(3, VALUE))
    view = basis.local_view().bind(1)
    assert view.indices() == [(1, 0), (1, 1), (1, 2)]


def test_flat_dg_under_mixed_parent_rejected(unit_mesh):
    with pytest.raises(IndexTreeError):
        make_basis(unit_mesh, composite(dg(1), lagrange(1), "flatLexicographic"))


def test_blocked_by_entity(unit_mesh):
    basis = make_basis(unit_mesh, power(lagrange(2), 2, "blockedByEntity"))
    assert basis.container_descriptor() == NonUniform(
        (Uniform(4, Uniform(2, VALUE)), Uniform(5, Uniform(2, VALUE)))
    )
    view = basis.local_view().bind(0)
    cell = unit_mesh.cells[0]
    for comp in range(2):
        leaf = view.tree_child((comp,))
        # vertex DOFs: (vertex class, vertex, component)
        for k in range(3):
            assert view.index(leaf.local_index(k)) == (0, cell[k], comp)
        for e in range(3):
            assert view.index(leaf.local_index(3 + e)) == (1, unit_mesh.cell_edges[0][e], comp)


def test_p3_edge_dofs_shared_with_orientation():
    mesh = make_structured_mesh(2, 1)
    node_map(make_basis(mesh, lagrange(3)))


@pytest.mark.parametrize("name", list(BASIS_MATRIX))
@pytest.mark.parametrize("size", MESH_SIZES)
def test_injective_and_continuous(name, size):
    basis = make_basis(make_structured_mesh(*size), BASIS_MATRIX[name]())
    nodes = node_map(basis)
    leaf_set = set(leaf_paths(basis.container_descriptor()))
    assert set(nodes.values()) == leaf_set
    assert len(set(nodes.values())) == len(nodes)  # distinct DOFs, distinct indices
    assert len(leaf_set) == basis.dimension()
    assert is_valid_index_tree(leaf_set)


def test_root_strategy_swap_is_bijection(unit_mesh):
    blocked = make_basis(unit_mesh, composite(lagrange(1), lagrange(2), "blockedLexicographic"))
    flat = make_basis(unit_mesh, composite(lagrange(1), lagrange(2), "flatLexicographic"))
    assert blocked.dimension() == flat.dimension() == 13
    pairs = set(zip(gather(blocked), gather(flat)))
    assert len({a for a, _ in pairs}) == len({b for _, b in pairs}) == len(pairs) == 13


def test_flat_taylor_hood_is_consecutive(mesh22):
    basis = make_basis(
        mesh22,
        composite(power(lagrange(2), 2, "flatInterleaved"), lagrange(1), "flatLexicographic"),
    )
    n = 2 * 25 + 9
    assert basis.container_descriptor() == Uniform(n, VALUE)
    assert set(gather(basis)) == {(k,) for k in range(n)}


def test_taylor_hood_three_components(unit_mesh):
    basis = make_basis(unit_mesh, taylor_hood(3, BLOCKED_INTERLEAVED))
    assert basis.dimension() == 3 * 9 + 4


def test_all_legal_small_descriptors(unit_mesh):
    leaves = [lagrange(1), lagrange(2), dg(0)]
    strategies = ["flatLexicographic", "flatInterleaved", "blockedLexicographic", "blockedInterleaved"]
    for leaf, s, n in itertools.product(leaves, strategies, (1, 2, 3)):
        basis = make_basis(unit_mesh, power(leaf, n, s))
        paths = gather(basis)
        assert set(paths) == set(leaf_paths(basis.container_descriptor()))
