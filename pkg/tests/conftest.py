from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


# plain brute force used as an independent oracle in several modules

def brute_independent(kind: str, n: int, s: int = 2):
    """Every independent set of P_n, C_n or the (s-1)-th power of C_n."""
    def ok(S):
        for a, b in combinations(S, 2):
            d = b - a
            if kind == "path":
                if d == 1:
                    return False
            elif min(d, n - d) < s:
                return False
        return True

    for r in range(n + 1):
        for S in combinations(range(n), r):
            if ok(S):
                yield S


def brute_total(classes, S, beta=2) -> Fraction:
    m = max(classes) + 1
    tot = Fraction(0)
    for i in range(m):
        size = classes.count(i)
        got = sum(1 for p in S if classes[p] == i)
        tot += max(Fraction(0), Fraction(size, beta) - got)
    return tot


def brute_perm_counts(colors, m):
    n = len(colors)
    for p in permutations(range(n)):
        c = [0] * m
        for i, j in enumerate(p):
            c[colors[i][j]] += 1
        yield p, c


@st.composite
def surjective_labels(draw, min_n=1, max_n=10, max_m=3):
    """0-based class labels using every class 0..m-1."""
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(1, min(max_m, n)))
    base = list(range(m)) + [draw(st.integers(0, m - 1)) for _ in range(n - m)]
    return tuple(draw(st.permutations(base)))


@st.composite
def perms(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    return tuple(draw(st.permutations(range(n))))


@st.composite
def color_rows(draw, min_n=2, max_n=5, m=3, all_parts=True):
    n = draw(st.integers(min_n, max_n))
    cells = [draw(st.integers(0, m - 1)) for _ in range(n * n)]
    if all_parts and n * n >= m:
        pos = draw(st.permutations(range(n * n)))
        for part, p in enumerate(pos[:m]):
            cells[p] = part
    return tuple(tuple(cells[i * n:(i + 1) * n]) for i in range(n))


@st.composite
def masks(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    return tuple(tuple(draw(st.booleans()) for _ in range(n)) for _ in range(n))


@pytest.fixture
def p4():
    from fairrep.core import path
    return path([0, 0, 1, 0])
