import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from basisforest import make_basis, make_structured_mesh
from basisforest.containers import (
    ContainerIndexError,
    NestedContainer,
    const_vector_backend,
    get,
    make_container,
    resize,
    set as set_value,
    vector_backend,
)
from basisforest.descriptors import lagrange
from basisforest.indexing import VALUE, Uniform, leaf_paths


def test_uniform_zeros():
    c = make_container(Uniform(4, VALUE), 0)
    assert [c[(k,)] for k in range(4)] == [0.0] * 4
    assert c.scalar_type is float


def test_taylor_hood_shape(th_fig4):
    c = make_container(th_fig4.container_descriptor(), 0.0)
    assert len(c) == 22
    assert len(c._root[0][0]) == 9 and all(len(b) == 2 for b in c._root[0][0])
    assert len(c._root[0][1]) == 4


def test_mask_container(th_fig4):
    mask = make_container(th_fig4.container_descriptor(), False)
    assert mask.scalar_type is bool
    assert not any(v for _, v in mask.items())
    mask[(0, 3, 1)] = 1
    assert mask[(0, 3, 1)] is True


def test_get_set(th_fig4):
    c = make_container(th_fig4.container_descriptor())
    view = vector_backend(c)
    set_value(view, (0, 3, 1), 2.5)
    assert get(view, (0, 3, 1)) == 2.5
    for bad in [(0, 3), (0,), (), (0, 3, 1, 0), (0, 9, 0), (2, 0), (1, 4)]:
        with pytest.raises(ContainerIndexError):
            view[bad]


def test_const_view_is_read_only(th_fig4):
    c = make_container(th_fig4.container_descriptor())
    view = const_vector_backend(c)
    assert view[(1, 0)] == 0.0
    with pytest.raises(TypeError):
        view[(1, 0)] = 1.0
    with pytest.raises(TypeError):
        set_value(view, (1, 0), 1.0)
    with pytest.raises(TypeError):
        vector_backend(view)


def test_ordinal_round_trip(th_fig4):
    c = make_container(th_fig4.container_descriptor())
    paths = list(leaf_paths(th_fig4.container_descriptor()))
    for n, mi in enumerate(paths):
        c[mi] = n
    assert [c[mi] for mi in paths] == list(range(len(paths)))


def test_resize(th_fig4):
    c = NestedContainer(None)
    with pytest.raises(ContainerIndexError):
        c[(0,)]
    view = vector_backend(c)
    resize(view, th_fig4)
    assert c.shape == th_fig4.container_descriptor()
    resize(view, th_fig4)
    assert c.shape == th_fig4.container_descriptor()
    lv = th_fig4.local_view()
    for cell in range(2):
        lv.bind(cell)
        for mi in lv.indices():
            assert view[mi] == 0.0


def test_root_value_container():
    c = make_container(VALUE, 1.5)
    assert c[()] == 1.5
    c[()] = 2
    assert c[()] == 2.0
    assert c.dump() == "() 2.0"


def test_dump_order(unit_mesh):
    c = make_container(make_basis(unit_mesh, lagrange(1)).container_descriptor())
    c[(2,)] = 0.5
    assert c.dump().splitlines() == ["(0) 0.0", "(1) 0.0", "(2) 0.5", "(3) 0.0"]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 21), st.floats(allow_nan=False)), max_size=40))
def test_get_set_identity(ops):
    basis = make_basis(make_structured_mesh(1, 1), "composite(power(lagrange(2),2,blockedInterleaved),lagrange(1),blockedLexicographic)")
    paths = list(leaf_paths(basis.container_descriptor()))
    c = make_container(basis.container_descriptor())
    reference = {mi: 0.0 for mi in paths}
    for n, v in ops:
        c[paths[n]] = v
        reference[paths[n]] = v
    assert {mi: c[mi] for mi in paths} == reference
