from __future__ import annotations

import sys
import time
from collections import defaultdict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import FIXTURES  # noqa: E402

# criterion id -> {"title": str, "outcomes": [bool], "notes": [str]}
_CRITERIA: dict[str, dict] = defaultdict(lambda: {"title": "", "outcomes": [], "notes": []})

# criteria that also bound the wall time of the whole test session, in seconds
SUITE_BUDGET = {"1": 60.0}
_SESSION = {"start": 0.0}


def pytest_sessionstart(session):
    _SESSION["start"] = time.perf_counter()


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(id, title): test belongs to an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        entry = _CRITERIA[marker.args[0]]
        entry["title"] = marker.args[1]
        entry["outcomes"].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    elapsed = time.perf_counter() - _SESSION["start"]
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: int(c)):
        entry = _CRITERIA[cid]
        passed = bool(entry["outcomes"]) and all(entry["outcomes"])
        notes = list(entry["notes"])
        if cid in SUITE_BUDGET:
            passed = passed and elapsed < SUITE_BUDGET[cid]
            notes.append(f"whole session {elapsed:.1f} s, budget {SUITE_BUDGET[cid]:.0f} s")
        status = "PASS" if passed else "FAIL"
        notes = "; ".join(notes)
        line = f"[{status}] criterion {cid}: {entry['title']}"
        terminalreporter.write_line(line + (f" ({notes})" if notes else ""))


@pytest.fixture
def note(request):
    """Attach a measured value to the criterion's summary line."""
    marker = request.node.get_closest_marker("acceptance")

    def add(text: str) -> None:
        if marker is not None:
            _CRITERIA[marker.args[0]]["notes"].append(text)

    return add


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES

