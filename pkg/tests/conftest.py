import random

import pytest

from sortedrange import Point

# filled by test_acceptance.py, printed after the run
ACCEPTANCE_LINES = []


def random_rank_points(n, rng):
    """``n`` points whose x and y are each a permutation of 1..n."""
    ys = rng.sample(range(1, n + 1), n)
    return [Point(i + 1, ys[i], i) for i in range(n)]


def clustered_points(n, g, rng):
    """Rank-space points where every run of ``g`` consecutive x holds a burst of
    the lowest y values, so one group can supply many low samples."""
    ys = list(range(1, n + 1))
    low, rest = ys[:n // 3], ys[n // 3:]
    rng.shuffle(rest)
    out = [0] * n
    pool = list(low)
    for start in range(0, n, g):
        grp = list(range(start, min(n, start + g)))
        take = min(len(grp) // 2, len(pool))
        for x in grp[:take]:
            out[x] = pool.pop()
    leftovers = pool + rest
    rng.shuffle(leftovers)
    it = iter(leftovers)
    for x in range(n):
        if out[x] == 0:
            out[x] = next(it)
    return [Point(i + 1, out[i], i) for i in range(n)]


@pytest.fixture
def rng():
    return random.Random(42)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
