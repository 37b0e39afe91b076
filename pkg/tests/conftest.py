"""Collects acceptance-criterion outcomes and prints one line per criterion."""

from collections import defaultdict

CRITERIA = {
    1: "formal-group axioms and height through order 20 at p^10",
    2: "quasi-logarithm coefficients and p*l_i = l_0(x^(p^i))",
    3: "period map origin, n_max doubling, scale invariance",
    4: "Newton polygons vs brute force, sigma-conjugation, Kottwitz counts",
    5: "kappa(x_C) = 1, Frobenius scaling, fundamental domain",
    6: "Hecke validation and global-point commutativity",
    7: "O_D relations, J/GL commutation, Weil inverses, tower transition",
    8: "byte-reproducible CLI output",
}

_criterion_of: dict[str, int] = {}
_outcomes: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criterion_of[item.nodeid] = mark.args[0]


def pytest_runtest_logreport(report):
    n = _criterion_of.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes[n].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        results = _outcomes.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {CRITERIA[n]}")
