import math

import pytest

from eitfwm.medium import MediumParams


def scaled(optical_depth=10.0, gamma_gs=0.0, omega=1.0, eta_eff=0.0, delta=1.0, gamma_ge=1.0):
    """Medium in units where gamma_ge = 1."""
    return MediumParams(
        optical_depth=optical_depth,
        gamma_ge=gamma_ge,
        gamma_gs=gamma_gs,
        delta=delta,
        omega=omega,
        eta_eff=eta_eff,
    )


@pytest.fixture
def two_pi():
    return 2 * math.pi


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _ACCEPTANCE.items():
        name = nodeid.split("::")[-1]
        label = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{label}  {name}")
