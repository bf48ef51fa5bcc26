import pytest

from basisforest import make_basis, make_structured_mesh
from basisforest.descriptors import dg, lagrange, power, taylor_hood
from basisforest.indexing import BLOCKED_INTERLEAVED, BLOCKED_LEXICOGRAPHIC

# name -> descriptor factory; the basis matrix used by several property checks
BASIS_MATRIX = {
    "P1": lambda: lagrange(1),
    "P2": lambda: lagrange(2),
    "P3": lambda: lagrange(3),
    "DG1": lambda: dg(1),
    "vector-P2": lambda: power(lagrange(2), 2, BLOCKED_INTERLEAVED),
    "TH-fig3": lambda: taylor_hood(2, BLOCKED_LEXICOGRAPHIC),
    "TH-fig4": lambda: taylor_hood(2, BLOCKED_INTERLEAVED),
}
MESH_SIZES = [(1, 1), (2, 2), (4, 4)]


@pytest.fixture(scope="session")
def unit_mesh():
    return make_structured_mesh(1, 1)


@pytest.fixture(scope="session")
def mesh22():
    return make_structured_mesh(2, 2)


@pytest.fixture(scope="session")
def th_fig4(unit_mesh):
    return make_basis(unit_mesh, taylor_hood(2, BLOCKED_INTERLEAVED))


@pytest.fixture(scope="session")
def th_fig3(unit_mesh):
    return make_basis(unit_mesh, taylor_hood(2, BLOCKED_LEXICOGRAPHIC))


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _criteria[report.nodeid] = (report.outcome, getattr(report, "criterion", None))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    doc = getattr(item.function, "__doc__", None) or item.name
    rep.criterion = doc.strip().splitlines()[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    grouped = {}
    for outcome, label in _criteria.values():
        grouped.setdefault(label, []).append(outcome == "passed")
    terminalreporter.section("acceptance criteria")
    for label, oks in grouped.items():
        status = "PASS" if all(oks) else "FAIL"
        terminalreporter.write_line(f"{status}  {label} [{sum(oks)}/{len(oks)} cases]")
