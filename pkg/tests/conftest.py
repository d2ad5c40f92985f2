import re

import pytest

from sigmalab import classical, quad
from sigmalab.lattice import PANEL, TruncationPolicy, preset

DEFAULT_POLICY = TruncationPolicy()

_acceptance: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def policy():
    return DEFAULT_POLICY


@pytest.fixture(scope="session")
def lattices():
    return {name: preset(name) for name in PANEL}


@pytest.fixture(scope="session")
def invs(lattices):
    return {name: classical.invariants(lat, DEFAULT_POLICY) for name, lat in lattices.items()}


@pytest.fixture(scope="session")
def rules(lattices):
    return {name: quad.build_rule(lat.nu, 32) for name, lat in lattices.items()}


@pytest.fixture(scope="session")
def panel_audit():
    from sigmalab.audit import run_audit

    return run_audit()


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    n, name = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or report.outcome != "passed":
        prev = _acceptance.get(n, (None, name))[0]
        if prev != "FAIL":
            _acceptance[n] = ("PASS" if report.outcome == "passed" else "FAIL", name)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        verdict, name = _acceptance[n]
        terminalreporter.write_line(f"criterion {n:2d}  {verdict}  {name}")
