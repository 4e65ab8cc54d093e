"""Shared fixtures and the acceptance criteria summary.

Acceptance tests register one line each through ``record_criterion``;
the terminal summary prints them as PASS/FAIL after the run.
"""

import pytest

from ccdarp.instance import generate_benchmark, synthetic_instance
from ccdarp.utility import ChanceModel, ClassParams, FareStructure

_CRITERIA: dict[str, tuple[bool, str]] = {}


def record_criterion(label: str, passed: bool, detail: str = "") -> None:
    _CRITERIA[label] = (passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA):
        passed, detail = _CRITERIA[label]
        suffix = f"  [{detail}]" if detail else ""
        terminalreporter.write_line(
            f"{'PASS' if passed else 'FAIL'}  {label}{suffix}")


@pytest.fixture(scope="session")
def default_model() -> ChanceModel:
    return ChanceModel.default()


def tiny_model(p: float = 0.9, s: float = 5.0, fare: float = 30.0) -> ChanceModel:
    """Parameters under which small random instances often serve someone."""
    cp = ClassParams.from_hourly("1", 10.6, 21.2, 10.0, s, p)
    return ChanceModel({"1": cp}, FareStructure.flat(fare))


def tiny_instance(seed: int):
    """2 to 4 requests, 1 or 2 vehicles; private option priced to be beatable."""
    return synthetic_instance(2 + seed % 3, 1 + seed % 2, seed=seed,
                              private_cost_rate=4.0)


@pytest.fixture(scope="session")
def small_benchmark():
    return generate_benchmark("a2-16")
