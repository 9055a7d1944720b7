import functools

import pytest

from minklab.field import enumerate_permutation_set
from minklab.plane import build_from_permutation_set


@functools.lru_cache(maxsize=None)
def model(kind: str, q: int | None = None):
    """Planes are immutable, so one instance per model is shared by the whole session."""
    return build_from_permutation_set(enumerate_permutation_set(kind, q))


@pytest.fixture(scope="session")
def pgl():
    return lambda q: model("pgl2", q)


@pytest.fixture(scope="session")
def p5():
    return model("pgl2", 5)


@pytest.fixture(scope="session")
def p4():
    return model("pgl2", 4)


@pytest.fixture(scope="session")
def p7():
    return model("pgl2", 7)


@pytest.fixture(scope="session")
def nf9():
    return model("nearfield9")


def swap_mutation(text: str, rng) -> str:
    """Swap the second coordinates of two points on one circle line of a MINK file."""
    lines = text.splitlines()
    n = int(lines[0].split("n=")[1])
    start = lines.index("CIRCLES") + 1
    row = start + int(rng.integers(len(lines) - start))
    pts = [int(t) for t in lines[row].split()]
    i, j = rng.choice(len(pts), size=2, replace=False)
    (xi, yi), (xj, yj) = divmod(pts[i], n), divmod(pts[j], n)
    pts[i], pts[j] = xi * n + yj, xj * n + yi
    lines[row] = " ".join(map(str, sorted(pts)))
    return "\n".join(lines) + "\n"


def row_shift_mutation(text: str, K: int = 0) -> str:
    """Move one point of a circle to another row of its column, so the circle meets a row twice."""
    lines = text.splitlines()
    n = int(lines[0].split("n=")[1])
    row = lines.index("CIRCLES") + 1 + K
    pts = [int(t) for t in lines[row].split()]
    x0, _ = divmod(pts[0], n)
    _, y1 = divmod(pts[1], n)
    pts[0] = x0 * n + y1
    lines[row] = " ".join(map(str, sorted(pts)))
    return "\n".join(lines) + "\n"


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
