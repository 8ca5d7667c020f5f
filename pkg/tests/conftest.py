import random

import pytest

from netdef.instances import gen_greedy_hard, gen_integrality_gap, gen_random


@pytest.fixture
def gap2():
    return gen_integrality_gap()


@pytest.fixture
def path3_iso():
    return gen_greedy_hard("isolated")


@pytest.fixture
def path3_st():
    return gen_greedy_hard("single_threshold")


def small_random(seed, max_n=8, max_m=12, **kwargs):
    """Seeded random instance with 2 <= n <= max_n and n-1 <= m <= max_m."""
    rng = random.Random(seed)
    n = rng.randint(2, max_n)
    m = rng.randint(n - 1, min(max_m, n * (n - 1) // 2))
    return gen_random(seed, n, m, **kwargs)


_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number = marker.args[0]
    title = (item.function.__doc__ or item.name).strip().splitlines()[0]
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _criteria[number] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
