import os

import pytest

from lotforge import instances as ref
from lotforge.tabu import PAPER_ITERATIONS, run_experiments

HARNESS_SEED = 20240611
HARNESS_Z = 1000

_criteria: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for n in getattr(report, "criteria", ()):
        _criteria.setdefault(n, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criteria = [m.args[0] for m in item.iter_markers("criterion")]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcomes = _criteria[n]
        if any(o == "failed" for o in outcomes):
            status = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(f"criterion {n:>2}: {status}")


@pytest.fixture
def small():
    return ref.THREE_PERIOD, ref.THREE_PERIOD_PARAMS


@pytest.fixture
def twelve():
    return ref.TWELVE_PERIOD, ref.TWELVE_PERIOD_PARAMS


@pytest.fixture(scope="session")
def harness_stats():
    """The z=1000 sweep over the paper's iteration counts (about a minute)."""
    return run_experiments(
        ref.TWELVE_PERIOD, ref.TWELVE_PERIOD_PARAMS, PAPER_ITERATIONS,
        experiments=HARNESS_Z, base_seed=HARNESS_SEED,
        optimum_cost=ref.TWELVE_PERIOD_BEST_COST,
        workers=int(os.environ.get("LOTFORGE_WORKERS", "1")),
    )
