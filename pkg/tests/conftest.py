"""Shared fixtures and the acceptance summary printed at the end of a run."""

from collections import defaultdict

import pytest

from tritrophic import rescale_params
from tritrophic.presets import GLOBALLY_STABLE, STABLE_FOCUS, STABLE_NODE, UNSTABLE_FOCUS

_outcomes: dict[str, list[tuple[str, str]]] = defaultdict(list)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    criterion = report.user_properties and dict(report.user_properties).get("criterion")
    if criterion:
        _outcomes[criterion].append((report.nodeid.split("::")[-1], report.outcome))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        item.user_properties.append(("criterion", str(marker.args[0])))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_outcomes, key=lambda c: (len(c), c)):
        parts = _outcomes[criterion]
        ok = all(outcome == "passed" for _, outcome in parts)
        failed = [name for name, outcome in parts if outcome != "passed"]
        detail = f" (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"ACCEPTANCE criterion {criterion}: {'PASS' if ok else 'FAIL'}{detail}")


@pytest.fixture
def node_rp():
    return rescale_params(STABLE_NODE)


@pytest.fixture
def focus_rp():
    return rescale_params(STABLE_FOCUS)


@pytest.fixture
def unstable_rp():
    return rescale_params(UNSTABLE_FOCUS)


@pytest.fixture
def global_rp():
    return rescale_params(GLOBALLY_STABLE)
