"""Tree-composed finite element bases with multi-index numbering."""

from .basistree import GlobalBasis, make_basis
from .containers import NestedContainer, const_vector_backend, make_container, vector_backend
from .descriptors import (
    Composite,
    Lagrange,
    Power,
    composite,
    dg,
    format_descriptor,
    lagrange,
    parse_descriptor,
    power,
    taylor_hood,
)
from .functions import (
    DiscreteFunction,
    for_each_boundary_dof,
    interpolate,
    interpolate_masked,
    make_discrete_function,
)
from .indexing import MergingStrategy, NonUniform, Uniform, Value, deg_plus, merge_index, merge_tree
from .localfe import LagrangeSimplex, LocalKey, lagrange_simplex
from .localview import LocalView
from .mesh import Mesh, make_structured_mesh
from .subspace import SubspaceBasis, subspace_basis

__version__ = "0.1.0"
