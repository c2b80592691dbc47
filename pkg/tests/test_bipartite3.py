from __future__ import annotations

from collections import Counter
from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fairrep.bipartite3 import (
    ARC_TAGS, BoundaryViolation, EarlyExit, MINUS, NoRainbow, PLUS, PLUSPLUS, PropertyTag,
    SimplicialDisk, arc_forbids, boundary_walk, build_disk, color_of, deficits, fill_square,
    find_rainbow, is_good, lopsided_coloring, lopsided_matching, quotas, reductions,
    resolve_triangle_traced, shift, shift_all, solve_three, solve_three_traced, theorem_bounds,
    within_bounds,
)
from fairrep.core import (
    ColorMatrix, PreconditionViolation, color_matrix, from_cycles, hamming_distance, identity, sim,
)

from conftest import color_rows, perms


# ---- shift ------------------------------------------------------------------

def test_shift_examples():
    assert shift(0, (1, 0, 2)) == (0, 1, 2)
    assert shift(0, (1, 2, 0)) == (0, 2, 1)
    assert shift(2, (0, 1, 2)) == (0, 1, 2)


@given(perms(max_n=10), st.data())
def test_shift_fixes_i_and_stays_close(p, data):
    i = data.draw(st.integers(0, len(p) - 1))
    q = shift(i, p)
    assert q[i] == i
    assert sorted(q) == list(range(len(p)))
    assert hamming_distance(p, q) in (0, 2)


@given(perms(min_n=2, max_n=10), st.data())
def test_shift_preserves_sim(p, data):
    n = len(p)
    pos = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=3, unique=True))
    vals = [p[x] for x in pos]
    img = data.draw(st.permutations(vals))
    q = list(p)
    for x, v in zip(pos, img):
        q[x] = v
    q = tuple(q)
    assert sim(p, q)
    i = data.draw(st.integers(0, n - 1))
    assert sim(shift(i, p), shift(i, q))


@pytest.mark.parametrize("n", range(1, 7))
def test_shift_all_is_identity(n):
    assert all(shift_all(p) == identity(n) for p in permutations(range(n)))


# ---- properties and colours ------------------------------------------------------

def test_property_tags():
    assert PropertyTag(0, PLUS).holds((0, 1, -1))
    assert not PropertyTag(0, PLUSPLUS).holds((0, 1, -1))
    assert PropertyTag(2, MINUS).holds((0, 1, -1))
    assert str(PropertyTag(0, PLUS)) == "1(+)"
    assert str(PropertyTag(1, PLUSPLUS)) == "2(++)"
    with pytest.raises(ValueError):
        PropertyTag(0, "?")


def test_colour_and_arc_rules():
    assert color_of((0, 0, 0)) is None
    assert color_of((-1, 1, 0)) == 1
    assert color_of((2, -1, -1)) == 0
    assert arc_forbids(PropertyTag(0, MINUS)) == ("vertex", frozenset({0}))
    assert arc_forbids(PropertyTag(1, PLUS)) == ("edge", frozenset({0, 2}))
    assert is_good((1, -1, 0)) and not is_good((2, -1, -1))


def test_quotas_need_multiples():
    A = color_matrix([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    assert quotas(A) == (1, 1, 1)
    with pytest.raises(PreconditionViolation):
        quotas(color_matrix([[0, 0, 2], [1, 2, 0], [2, 0, 1]]))


# ---- random instances with part sizes divisible by n -------------------------------

@st.composite
def divisible(draw, min_n=4, max_n=7, inner=True):
    n = draw(st.integers(min_n, max_n))
    lo = 1
    hi = n - 2 if inner else n - 1
    k0 = draw(st.integers(lo, min(hi, n - 2)))
    k1 = draw(st.integers(lo, min(hi, n - k0 - 1)))
    k2 = n - k0 - k1
    assume(lo <= k2 <= hi)
    cells = [0] * (k0 * n) + [1] * (k1 * n) + [2] * (k2 * n)
    cells = draw(st.permutations(cells))
    return ColorMatrix(tuple(tuple(cells[i * n:(i + 1) * n]) for i in range(n)), 3)


@given(divisible(max_n=8, inner=False), st.data())
def test_lopsided_matching_bounds(A, data):
    n = A.n
    boost, cap = data.draw(st.sampled_from([(b, c) for b in range(3) for c in range(3) if b != c]))
    p = lopsided_matching(A, boost, cap)
    counts = A.counts(p)
    assert counts[boost] >= -(-A.sizes[boost] // n)
    assert counts[cap] <= -(-A.sizes[cap] // n)
    edges, color = lopsided_coloring(A, cap)
    assert all(0 <= c < n for c in color)
    seen = set()
    for (i, j), c in zip(edges, color):
        assert ("L", i, c) not in seen and ("R", j, c) not in seen
        seen |= {("L", i, c), ("R", j, c)}
    sizes = Counter(color)
    assert max(sizes[c] for c in range(n)) - min(sizes[c] for c in range(n)) <= 1


def test_lopsided_needs_two_parts():
    A = color_matrix([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    with pytest.raises(PreconditionViolation):
        lopsided_matching(A, 1, 1)


@given(divisible(), st.data())
def test_boundary_walk_keeps_property(A, data):
    k = quotas(A)
    tag = data.draw(st.sampled_from(ARC_TAGS))
    starts = [p for p in permutations(range(A.n)) if tag.holds(deficits(A, k, p))]
    a = data.draw(st.sampled_from(starts))
    b = data.draw(st.sampled_from(starts))
    walk = boundary_walk(A, a, b, tag, k)
    assert walk[0] == a and walk[-1] == b
    assert all(tag.holds(deficits(A, k, p)) for p in walk)
    assert all(sim(x, y) for x, y in zip(walk, walk[1:]))


def test_boundary_walk_rejects_bad_endpoint():
    A = color_matrix([[0, 0, 1, 2], [0, 1, 1, 2], [0, 1, 2, 2], [0, 1, 2, 1]], 3)
    # sizes 5, 6, 5 are not multiples; use explicit quotas
    k = (1, 2, 1)
    tag = PropertyTag(0, PLUSPLUS)
    bad = next(p for p in permutations(range(4)) if not tag.holds(deficits(A, k, p)))
    with pytest.raises(PreconditionViolation):
        boundary_walk(A, bad, bad, tag, k)


# ---- filling squares ---------------------------------------------------------------

def _square_ok(s, t, i):
    aux, tris = fill_square(s, t, i)
    pool = [s, t, shift(i, t), shift(i, s)] + aux
    for tri in tris:
        for u, v in combinations(tri, 2):
            assert sim(pool[u], pool[v]), (s, t, i, tri)
    if len({s, t, shift(i, t), shift(i, s)}) == 4:
        uses = Counter(frozenset(e) for tri in tris for e in combinations(tri, 2))
        outer = {frozenset(e) for e in ((0, 1), (1, 2), (2, 3), (3, 0))}
        for e, c in uses.items():
            assert c == (1 if e in outer else 2), (s, t, i)
        assert outer <= set(uses)


def test_fill_square_example():
    n = 4
    s = from_cycles(n, [0, 1])
    t = from_cycles(n, [0, 1], [2, 3])
    _square_ok(s, t, 0)


@pytest.mark.parametrize("n", [4, 5])
def test_fill_square_exhaustive(n):
    ps = list(permutations(range(n)))
    for s in ps:
        for t in ps:
            if s != t and sim(s, t):
                for i in range(n):
                    _square_ok(s, t, i)


def test_fill_square_needs_sim():
    with pytest.raises(PreconditionViolation):
        fill_square((0, 1, 2, 3), (1, 0, 3, 2), 0)


# ---- the disk and its rainbow triangle ---------------------------------------------

@given(divisible(min_n=4, max_n=6))
def test_build_disk_invariants(A):
    try:
        disk = build_disk(A)
    except (EarlyExit, BoundaryViolation):
        return
    assert disk.problems() == []
    a, b, c = find_rainbow(disk)
    k = quotas(A)
    assert [color_of(deficits(A, k, p)) for p in (a, b, c)] == [0, 1, 2]
    blob = disk.to_json()
    assert len(blob["arcs"]) == 6
    assert {v["color"] for v in blob["vertices"]} <= {1, 2, 3}


def test_find_rainbow_on_hand_built_disks():
    p = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    disk = SimplicialDisk(p, [0, 1, 2, 0], [(0, 1, 3), (0, 1, 2)], [])
    assert find_rainbow(disk) == (p[0], p[1], p[2])
    flat = SimplicialDisk(p, [0, 1, 1, 0], [(0, 1, 3), (0, 1, 2)], [])
    with pytest.raises(NoRainbow):
        find_rainbow(flat)


def test_build_disk_quota_range():
    A = color_matrix([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    with pytest.raises(PreconditionViolation):
        build_disk(A, (0, 1, 2))
    with pytest.raises(PreconditionViolation):
        build_disk(color_matrix([[0, 0, 0], [0, 0, 0], [1, 1, 2]]), (2, 0, 1))


# ---- resolving a rainbow triangle ----------------------------------------------------

def worked_example():
    """n = 5, a Latin square block in the corner, then a44 = 1, a55 = 2."""
    rows = [
        [1, 2, 3, 1, 2],
        [3, 1, 2, 1, 2],
        [2, 3, 1, 1, 2],
        [1, 2, 3, 1, 1],
        [2, 1, 3, 2, 2],
    ]
    return color_matrix([[x - 1 for x in r] for r in rows])


def test_resolve_worked_example():
    A = worked_example()
    k = quotas(A)
    assert k == (2, 2, 1)
    n = 5
    s1 = identity(n)
    s2 = from_cycles(n, [0, 1, 2])
    s3 = from_cycles(n, [0, 2, 1])
    assert [deficits(A, k, s) for s in (s1, s2, s3)] == [(2, -1, -1), (-1, 2, -1), (-1, -1, 2)]
    perm, route = resolve_triangle_traced(A, k, s1, s2, s3)
    assert route == "all-two"
    assert perm == from_cycles(n, [0, 1])
    assert deficits(A, k, perm) == (0, 0, 0)


def test_resolve_direct_when_a_corner_is_balanced():
    rng = np.random.default_rng(11)
    n = 6
    for _ in range(2000):
        cells = rng.permutation([0] * 12 + [1] * 12 + [2] * 12).reshape(n, n)
        A = ColorMatrix(tuple(map(tuple, cells.tolist())), 3)
        k = quotas(A)
        base = tuple(int(x) for x in rng.permutation(n))
        near = [base] + [q for q in _neighbours(base)]
        by = {}
        for q in near:
            c = color_of(deficits(A, k, q))
            if c is not None and c not in by:
                by[c] = q
        if len(by) == 3 and all(sim(by[a], by[b]) for a, b in combinations(range(3), 2)):
            trio = [by[0], by[1], by[2]]
            if any(is_good(deficits(A, k, q)) for q in trio):
                perm, route = resolve_triangle_traced(A, k, *trio)
                assert route == "direct"
                assert is_good(deficits(A, k, perm))
                return
    pytest.fail("no direct case found in the seeded search")


def _neighbours(p):
    n = len(p)
    for a, b in combinations(range(n), 2):
        q = list(p)
        q[a], q[b] = q[b], q[a]
        yield tuple(q)


def test_resolve_preconditions():
    A = worked_example()
    k = quotas(A)
    n = 5
    with pytest.raises(PreconditionViolation):
        resolve_triangle_traced(A, k, identity(n), from_cycles(n, [0, 1], [2, 3]),
                                from_cycles(n, [0, 2, 1]))
    with pytest.raises(PreconditionViolation):
        resolve_triangle_traced(A, k, from_cycles(n, [0, 1, 2]), identity(n), from_cycles(n, [0, 2, 1]))


def adversarial(rng):
    """A triple where alpha has d = (1, -2, 1) and beta = alpha o (0 1 2) has d_Y = 1.

    Cells around the R rows (diagonal in part Z) are biased toward Z so that
    the simple transpositions fail and the later cases have to do the work.
    """
    n = int(rng.integers(8, 14))
    kX = int(rng.integers(2, n - 3))
    kY = int(rng.integers(2, n - kX))
    kZ = n - kX - kY
    if kZ < 1 or kZ + 4 > n:
        return None
    X, Y, Z = 0, 1, 2
    M = -np.ones((n, n), int)
    M[:3, :3] = [[X, Y, Z], [Z, X, Y], [Y, Z, X]]
    S = [0, 1, 2]
    R = list(range(3, 4 + kZ))
    O = list(range(4 + kZ, n))
    for r in R:
        M[r, r] = Z
    od = [X] * (kX + 1 - 3) + [Y] * (kY - 2)
    rng.shuffle(od)
    for p, v in zip(O, od):
        M[p, p] = v
    budget = {X: kX * n, Y: kY * n, Z: kZ * n}
    for v in M[M >= 0]:
        budget[int(v)] -= 1
    if min(budget.values()) < 0:
        return None
    bias = [1.0, 1.0 if rng.random() < .6 else rng.random(), rng.random()]
    groups = [[(i, j) for i in R for j in S] + [(j, i) for i in R for j in S],
              [(i, j) for i in R for j in R if i != j],
              [(i, j) for i in R for j in O] + [(j, i) for i in R for j in O]]
    for g, b in zip(groups, bias):
        for c in g:
            if M[c] < 0 and budget[Z] > 0 and rng.random() < b:
                M[c] = Z
                budget[Z] -= 1
    rest = [v for v, c in budget.items() for _ in range(c)]
    rng.shuffle(rest)
    free = np.argwhere(M < 0)
    if len(rest) != len(free):
        return None
    for (i, j), v in zip(free, rest):
        M[i, j] = v
    A = ColorMatrix(tuple(map(tuple, M.tolist())), 3)
    alpha = identity(n)
    beta = from_cycles(n, [0, 1, 2])
    return A, (kX, kY, kZ), (alpha, beta, alpha)


def test_resolve_adversarial_triples():
    rng = np.random.default_rng(7)
    routes = Counter()
    for _ in range(600):
        made = adversarial(rng)
        if made is None:
            continue
        A, k, trio = made
        d = [deficits(A, k, p) for p in trio]
        if not (d[0][0] == 1 and d[0][1] == -2 and d[1][1] == 1):
            continue
        perm, route = resolve_triangle_traced(A, k, *trio)
        assert is_good(deficits(A, k, perm))
        routes[route] += 1
    assert routes["safety-net"] == 0
    assert sum(routes.values()) > 50
    assert routes["transposition"] < sum(routes.values())


# ---- the solver -------------------------------------------------------------------

def test_theorem_bounds():
    assert theorem_bounds([10, 10, 5], 5) == [(1, 3), (1, 3), (0, 2)]
    assert theorem_bounds([7, 1, 1], 3) == [(1, 4), (-1, 2), (-1, 2)]


@given(color_rows(min_n=2, max_n=7))
def test_solve_three_within_bounds(rows):
    A = color_matrix(rows, 3)
    run = solve_three_traced(A)
    assert within_bounds(A, run.perm)
    assert not run.safety_net
    perm, rep = solve_three(A)
    assert rep.counts == tuple(A.counts(perm))


@given(color_rows(min_n=3, max_n=7))
def test_reductions_hit_multiples(rows):
    A = color_matrix(rows, 3)
    for red in reductions(A):
        assert all(s % A.n == 0 for s in red.matrix.sizes)
        assert tuple(s // A.n for s in red.matrix.sizes) == red.k
        assert sum(1 for i in range(A.n) for j in range(A.n)
                   if red.matrix.colors[i][j] != A.colors[i][j]) == len(red.moved)


def test_solve_three_rejects_two_parts():
    with pytest.raises(PreconditionViolation):
        solve_three(color_matrix([[0, 1], [1, 0]]))


def test_full_disks_from_seeded_search():
    """Most random inputs exit early; keep sampling until 20 disks are complete."""
    rng = np.random.default_rng(5)
    built = 0
    for _ in range(20000):
        n = int(rng.integers(4, 7))
        k0 = int(rng.integers(1, n - 1))
        k1 = int(rng.integers(1, n - k0))
        k2 = n - k0 - k1
        if not (1 <= k2 <= n - 2 and max(k0, k1) <= n - 2):
            continue
        cells = rng.permutation([0] * (k0 * n) + [1] * (k1 * n) + [2] * (k2 * n)).reshape(n, n)
        A = ColorMatrix(tuple(map(tuple, cells.tolist())), 3)
        try:
            disk = build_disk(A)
        except (EarlyExit, BoundaryViolation):
            continue
        assert disk.problems() == []
        trio = find_rainbow(disk)
        perm, route = resolve_triangle_traced(A, quotas(A), *trio)
        assert is_good(deficits(A, quotas(A), perm))
        assert route != "safety-net"
        built += 1
        if built == 20:
            return
    pytest.fail(f"only {built} complete disks")
