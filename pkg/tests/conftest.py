from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from torusfill.sl2z import GeneratorWord

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

letters = st.sampled_from(["Em1", "E1p"])


def words(max_len: int = 10):
    return st.lists(letters, max_size=max_len).map(lambda xs: GeneratorWord(tuple(xs)))


def matrices(max_len: int = 10):
    return words(max_len).map(lambda w: w.evaluate())


@pytest.fixture
def rng():
    return random.Random(20240611)


# --- acceptance reporting ----------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else "FAIL"
        prev = _CRITERIA.get(number)
        if prev is None or prev[0] == "PASS":
            _CRITERIA[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
