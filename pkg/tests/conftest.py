import re

import pytest

from speclap.harness import build_context

# outcome per acceptance criterion, filled by the logreport hook
_ACCEPTANCE: dict[int, tuple[str, str]] = {}

_CRITERION_RE = re.compile(r"test_criterion_(\d+)_([a-z0-9_]+)")


@pytest.fixture(scope="session")
def interval_ctx():
    return build_context("interval", 200)


@pytest.fixture(scope="session")
def square_ctx():
    return build_context("square", 24)


@pytest.fixture(scope="session")
def lshape_ctx():
    return build_context("l_shape", 12)


def pytest_runtest_logreport(report):
    m = _CRITERION_RE.search(report.nodeid)
    if not m or report.when != "call":
        return
    num, label = int(m.group(1)), m.group(2)
    outcome = "PASS" if report.passed else "FAIL"
    _ACCEPTANCE[num] = (label, outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        label, outcome = _ACCEPTANCE[num]
        terminalreporter.write_line(
            f"criterion {num:02d} {label.replace('_', ' '):44s} {outcome}"
        )
