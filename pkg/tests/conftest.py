import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def reference_doc() -> str:
    return (ROOT / "paper.md").read_text(encoding="utf-8")


CRITERION_OUTCOMES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number = marker.args[0]
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    if rep.when == "call" or failed:
        previous = CRITERION_OUTCOMES.get(number, (True, item.name))[0]
        CRITERION_OUTCOMES[number] = (previous and not failed, item.name)


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERION_OUTCOMES):
        ok, name = CRITERION_OUTCOMES[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {name}")
