from __future__ import annotations

from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from fairrep.bipartite2 import (
    WalkStats, achievable, almost_fair_two, as_mask, block_gap, check_rigidity, count_in,
    exact_count_matching, extreme_counts, from_mask, is_block_sum, parity_signature, rigid_achievable,
)
from fairrep.core import CountInfeasible, OutOfRange, PreconditionViolation, RigidInfeasible, color_matrix

from conftest import masks


def counts_by_enumeration(mask):
    n = len(mask)
    return sorted({sum(mask[i][p[i]] for i in range(n)) for p in permutations(range(n))})


def block_mask(n, k, l):
    """K x L plus the complementary block, K and L the first k rows and l columns."""
    return tuple(tuple((i < k) == (j < l) for j in range(n)) for i in range(n))


RIGID6 = block_mask(6, 3, 3)


def test_rigid6_example():
    cert = check_rigidity(RIGID6)
    assert cert.rigid
    assert cert.K == (0, 1, 2) and cert.L == (0, 1, 2)
    assert rigid_achievable(6, 3, 3) == (0, 2, 4, 6)
    assert counts_by_enumeration(RIGID6) == [0, 2, 4, 6]
    with pytest.raises(RigidInfeasible) as err:
        exact_count_matching(RIGID6, 3)
    assert tuple(err.value.achievable) == (0, 2, 4, 6)
    for c in (0, 2, 4, 6):
        assert count_in(RIGID6, exact_count_matching(RIGID6, c)) == c


def test_non_rigid_witness_has_opposite_parities():
    F = ((1, 0, 0), (1, 1, 0), (0, 0, 1))
    cert = check_rigidity(F)
    assert not cert.rigid
    a, b = cert.witness
    mask = as_mask(F)
    assert (count_in(mask, a) - count_in(mask, b)) % 2 == 1
    assert cert.parity is None


def test_full_and_empty_sets_are_rigid():
    n = 4
    full = tuple((1,) * n for _ in range(n))
    empty = tuple((0,) * n for _ in range(n))
    assert check_rigidity(full).rigid and parity_signature(full) == "even"
    assert check_rigidity(empty).rigid
    assert counts_by_enumeration(full) == [4]


@given(masks(min_n=1, max_n=5))
def test_rigidity_agrees_with_parity_enumeration(mask):
    assert parity_signature(mask) == parity_signature(mask, exhaustive=True)


@given(masks(min_n=1, max_n=6))
def test_extremes_against_assignment_solver(mask):
    lo, hi, wlo, whi = extreme_counts(mask)
    w = np.array(mask, dtype=int)
    r, c = linear_sum_assignment(-w)
    assert hi == int(w[r, c].sum())
    r, c = linear_sum_assignment(w)
    assert lo == int(w[r, c].sum())
    assert count_in(mask, wlo) == lo and count_in(mask, whi) == hi


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_rigid_achievable_against_enumeration(n):
    for k in range(n + 1):
        for l in range(n + 1):
            assert list(rigid_achievable(n, k, l)) == counts_by_enumeration(block_mask(n, k, l))


@pytest.mark.parametrize("n", [3, 4])
def test_gap_characterisation_exhaustive(n):
    """Every count in [c_min, c_max] is reachable except the block-sum gap."""
    colors_all = np.array(list(product((0, 1), repeat=n * n)), dtype=np.int8).reshape(-1, n, n)
    from fairrep.matching import perm_counts
    counts = perm_counts(1 - colors_all, 2)[..., 0]
    for mask_arr, cs in zip(colors_all, counts):
        mask = tuple(tuple(bool(x) for x in r) for r in mask_arr)
        seen = set(cs.tolist())
        assert tuple(sorted(seen)) == achievable(mask)
        lo, hi = min(seen), max(seen)
        if not check_rigidity(mask).rigid:
            missing = set(range(lo, hi + 1)) - seen
            gap = block_gap(mask)
            assert missing == ({gap} if gap is not None else set())


def test_identity_misses_n_minus_one():
    F = tuple(tuple(i == j for j in range(3)) for i in range(3))
    assert is_block_sum(F)
    assert counts_by_enumeration(F) == [0, 1, 3]
    with pytest.raises(CountInfeasible) as err:
        exact_count_matching(F, 2)
    assert err.value.count == 2


@given(masks(min_n=2, max_n=6), st.data())
def test_exact_count_hits_every_achievable_count(mask, data):
    ach = achievable(mask)
    c = data.draw(st.sampled_from(ach))
    stats = WalkStats()
    p = exact_count_matching(mask, c, stats)
    assert count_in(mask, p) == c
    assert sorted(p) == list(range(len(mask)))


def test_out_of_range():
    F = ((1, 0), (0, 0))
    with pytest.raises(OutOfRange):
        exact_count_matching(F, 2)


@given(masks(min_n=2, max_n=6))
def test_almost_fair_two_near_average(mask):
    n = len(mask)
    size = sum(map(sum, mask))
    c = count_in(mask, almost_fair_two(mask))
    assert size // n - 1 <= c <= -(-size // n) + 1
    if not check_rigidity(mask).rigid:
        assert size // n <= c <= -(-size // n)


def test_as_mask_checks_shape_and_parts():
    with pytest.raises(PreconditionViolation):
        as_mask([[1, 0]])
    with pytest.raises(PreconditionViolation):
        as_mask(color_matrix([[0, 1], [2, 0]]))
    F = ((1, 0), (0, 1))
    assert as_mask(from_mask(F)) == F
