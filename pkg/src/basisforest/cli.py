"""``basisforest inspect|poisson|stokes``.

Exit status: 0 on success, 2 on usage errors (bad flags, bad basis text),
1 on numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .assembly import (
    DEFAULT_MAX_CELLS,
    NumericalFailure,
    pattern_matrix,
    solve_poisson,
    solve_stokes,
    stokes_basis,
    write_pbm,
)
from .basistree import make_basis
from .descriptors import DescriptorError, format_descriptor, parse_descriptor
from .functions import make_discrete_function, vertex_values, write_vtk
from .indexing import format_multi_index, format_tree
from .mesh import make_structured_mesh
from .subspace import subspace_basis


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="basisforest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="print the index tree and local multi-indices of a basis")
    p.add_argument("--nx", type=_positive, default=1)
    p.add_argument("--ny", type=_positive, default=1)
    p.add_argument("--basis", required=True, help='e.g. "power(lagrange(1),2,flatInterleaved)"')
    p.add_argument("--print-index-tree", action="store_true")
    p.add_argument("--print-local-indices", action="store_true")
    p.add_argument("--pattern", metavar="FILE", help="write the occupation pattern as PBM")

    p = sub.add_parser("poisson", help="P_k Poisson demo with u = x^2 + y^2")
    p.add_argument("--nx", type=_positive, default=4)
    p.add_argument("--ny", type=_positive, default=4)
    p.add_argument("--degree", type=int, choices=(1, 2, 3), default=2)
    p.add_argument("--vtk", metavar="FILE")

    p = sub.add_parser("stokes", help="Taylor-Hood Stokes demo with Poiseuille flow")
    p.add_argument("--nx", type=_positive, default=4)
    p.add_argument("--ny", type=_positive, default=4)
    p.add_argument("--layout", choices=("fig3", "fig4"), default="fig4")
    p.add_argument("--pattern", metavar="FILE", help="write the occupation pattern as PBM")
    p.add_argument("--max-cells", type=_positive, default=DEFAULT_MAX_CELLS)
    p.add_argument("--vtk", metavar="FILE")
    return parser


def cmd_inspect(args, out) -> int:
    try:
        desc = parse_descriptor(args.basis)
        basis = make_basis(make_structured_mesh(args.nx, args.ny), desc)
    except DescriptorError as exc:
        print(f"basisforest: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"basisforest: error: invalid basis: {exc}", file=sys.stderr)
        return 2
    print(f"basis={format_descriptor(desc)}", file=out)
    print(f"dimension={basis.dimension()}", file=out)
    print(f"container_descriptor={basis.container_descriptor()}", file=out)
    if args.print_index_tree:
        print(format_tree(basis.container_descriptor()), file=out)
    if args.print_local_indices:
        view = basis.local_view()
        for cell in range(basis.mesh.entity_count(0)):
            view.bind(cell)
            for i, mi in enumerate(view.indices()):
                print(f"cell {cell} local {i} -> {format_multi_index(mi)}", file=out)
    if args.pattern:
        write_pbm(args.pattern, pattern_matrix(basis))
    return 0


def cmd_poisson(args, out) -> int:
    report = solve_poisson(args.nx, args.ny, args.degree)
    print(report.format(), file=out)
    if args.vtk:
        uh = make_discrete_function(report.basis, report.coefficients, 1)
        write_vtk(args.vtk, report.basis.mesh, {"u": vertex_values(uh)})
    return 0


def cmd_stokes(args, out) -> int:
    try:
        report = solve_stokes(args.nx, args.ny, args.layout, max_cells=args.max_cells)
    except ValueError as exc:
        print(f"basisforest: error: {exc}", file=sys.stderr)
        return 2
    print(report.format(), file=out)
    if args.pattern:
        write_pbm(args.pattern, pattern_matrix(stokes_basis(args.nx, args.ny, args.layout)))
    if args.vtk:
        basis = report.basis
        u = make_discrete_function(subspace_basis(basis, (0,)), report.coefficients, 2)
        p = make_discrete_function(subspace_basis(basis, (1,)), report.coefficients, 1)
        write_vtk(args.vtk, basis.mesh, {"velocity": vertex_values(u), "pressure": vertex_values(p)})
    return 0


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    handler = {"inspect": cmd_inspect, "poisson": cmd_poisson, "stokes": cmd_stokes}[args.command]
    try:
        return handler(args, out)
    except NumericalFailure as exc:
        print(f"basisforest: numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
