"""Perfect matchings of K_{n,n} with a prescribed number of edges from a set F.

F is given as a two-part :class:`ColorMatrix` whose part 0 is F, or as a
boolean mask. Between the extreme counts every value is achievable except
in two situations: F is rigid (K x L plus the complementary block; counts
then share a parity), or F or its complement is a direct sum of at least
three all-ones blocks (count n - 1, resp. 1, is then impossible because a
matching never has exactly one cell off the blocks).
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import (
    ColorMatrix,
    CountInfeasible,
    OutOfRange,
    Perm,
    PreconditionViolation,
    RigidInfeasible,
    SearchExhausted,
    InternalInvariantViolation,
    subset_matrix,
)
from .matching import ENUMERATION_CAP, all_perms, best_perm, perm_counts

log = logging.getLogger(__name__)

Mask = tuple[tuple[bool, ...], ...]


def as_mask(F: ColorMatrix | Sequence[Sequence[bool | int]]) -> Mask:
    if isinstance(F, ColorMatrix):
        if F.m != 2:
            raise PreconditionViolation(f"expected a 2-part matrix, got m={F.m}")
        return F.mask(0)
    rows = tuple(tuple(bool(x) for x in r) for r in F)
    if not rows or any(len(r) != len(rows) for r in rows):
        raise PreconditionViolation("F must be a square 0/1 matrix")
    return rows


def count_in(mask: Mask, perm: Sequence[int]) -> int:
    return sum(1 for i, j in enumerate(perm) if mask[i][j])


@dataclass(frozen=True)
class RigidityCertificate:
    rigid: bool
    n: int
    K: tuple[int, ...] = ()
    L: tuple[int, ...] = ()
    witness: tuple[Perm, Perm] | None = None

    @property
    def parity(self) -> int | None:
        """Common parity of |P & F| over all perfect matchings, if rigid."""
        if not self.rigid:
            return None
        return (self.n - len(self.K) - len(self.L)) % 2


def check_rigidity(F) -> RigidityCertificate:
    """Rigid iff every row equals row 0 or its complement.

    Then K = rows equal to row 0 and L = the columns where row 0 is in F. If a
    row b is neither, it agrees with row 0 at some column p and differs at
    some q; sending (0 -> p, b -> q) or (0 -> q, b -> p), with the other rows
    matched identically, gives counts of opposite parity.
    """
    mask = as_mask(F)
    n = len(mask)
    row0 = mask[0]
    K = []
    for i, row in enumerate(mask):
        if row == row0:
            K.append(i)
            continue
        if all(a != b for a, b in zip(row, row0)):
            continue
        p = next(j for j in range(n) if row[j] == row0[j])
        q = next(j for j in range(n) if row[j] != row0[j])
        rest_rows = [r for r in range(n) if r not in (0, i)]
        rest_cols = [c for c in range(n) if c not in (p, q)]
        first = [0] * n
        second = [0] * n
        for r, c in zip(rest_rows, rest_cols):
            first[r] = second[r] = c
        first[0], first[i] = p, q
        second[0], second[i] = q, p
        return RigidityCertificate(False, n, witness=(tuple(first), tuple(second)))
    L = [j for j in range(n) if row0[j]]
    return RigidityCertificate(True, n, tuple(K), tuple(L))


def rigid_achievable(n: int, k: int, l: int) -> tuple[int, ...]:
    """Counts |P & F| over perfect matchings P when F = K x L plus the complementary block.

    With t = |P & (K x L)| the count is n - k - l + 2t, and t ranges over
    max(0, k + l - n) .. min(k, l).
    """
    return tuple(n - k - l + 2 * t for t in range(max(0, k + l - n), min(k, l) + 1))


def is_block_sum(mask: Mask) -> bool:
    """True when F is a direct sum of at least three all-ones blocks.

    Equivalently: rows with equal patterns form groups, the groups' patterns
    partition the columns, and each pattern has as many columns as rows.
    """
    groups: dict[tuple[bool, ...], int] = {}
    for row in mask:
        groups[row] = groups.get(row, 0) + 1
    if len(groups) < 3:
        return False
    covered = [0] * len(mask)
    for pattern, rows in groups.items():
        if sum(pattern) != rows:
            return False
        for j, x in enumerate(pattern):
            covered[j] += x
    return all(c == 1 for c in covered)


def block_gap(F) -> int | None:
    """The count that a non-rigid F misses inside [c_min, c_max], if any."""
    mask = as_mask(F)
    if is_block_sum(mask):
        return len(mask) - 1
    if is_block_sum(tuple(tuple(not x for x in row) for row in mask)):
        return 1
    return None


def achievable(F) -> tuple[int, ...]:
    """Every achievable count, in closed form.

    The rigid progression, or the integer interval [c_min, c_max] minus the
    block-sum gap.
    """
    cert = check_rigidity(F)
    n = len(as_mask(F))
    if cert.rigid:
        return rigid_achievable(n, len(cert.K), len(cert.L))
    lo, hi, _, _ = extreme_counts(F)
    gap = block_gap(F)
    return tuple(c for c in range(lo, hi + 1) if c != gap)


def extreme_counts(F) -> tuple[int, int, Perm, Perm]:
    """(c_min, c_max, witness for c_min, witness for c_max).

    c_max is the largest matching inside F; c_min is n minus the largest
    matching inside the complement. A partial matching completed arbitrarily
    cannot pick up further cells of the set it maximised.
    """
    mask = as_mask(F)
    n = len(mask)
    c_max, w_max = best_perm(mask)
    comp = tuple(tuple(not x for x in row) for row in mask)
    nu, w_min = best_perm(comp)
    c_min = n - nu
    if count_in(mask, w_max) != c_max or count_in(mask, w_min) != c_min:
        raise InternalInvariantViolation("completed matching changed the extreme count")
    return c_min, c_max, w_min, w_max


def _rigid_perm(n: int, K, L, c: int) -> Perm:
    k, l = len(K), len(L)
    t = (c - n + k + l) // 2
    Kb = [i for i in range(n) if i not in K]
    Lb = [j for j in range(n) if j not in L]
    perm = [0] * n
    rows_K, rows_Kb = list(K), Kb
    cols_L, cols_Lb = list(L), Lb
    # t rows of K into L, the rest of K into Lb, then Kb fills what is left
    for i, j in zip(rows_K[:t], cols_L[:t]):
        perm[i] = j
    for i, j in zip(rows_K[t:], cols_Lb):
        perm[i] = j
    left = cols_L[t:] + cols_Lb[k - t:]
    for i, j in zip(rows_Kb, sorted(left)):
        perm[i] = j
    return tuple(perm)


def local_moves(perm: Perm):
    """Permutations at Hamming distance 2, 3 or 4 from ``perm``."""
    n = len(perm)
    p = list(perm)
    for a, b in combinations(range(n), 2):
        q = p[:]
        q[a], q[b] = q[b], q[a]
        yield tuple(q)
    for a, b, c in combinations(range(n), 3):
        for x, y, z in ((b, c, a), (c, a, b)):
            q = p[:]
            q[a], q[b], q[c] = p[x], p[y], p[z]
            yield tuple(q)
    for a, b, c, d in combinations(range(n), 4):
        idx = (a, b, c, d)
        for src in ((b, a, d, c), (c, d, a, b), (d, c, b, a),
                    (b, c, d, a), (b, d, a, c), (c, a, d, b),
                    (c, d, b, a), (d, a, b, c), (d, c, a, b)):
            q = p[:]
            for pos, s in zip(idx, src):
                q[pos] = p[s]
            yield tuple(q)


def _bfs(mask: Mask, seeds: Sequence[Perm], c: int, cap: int) -> Perm | None:
    allowed = {c - 1, c, c + 1}
    seen = set(seeds)
    frontier = deque((s, 0) for s in seeds)
    while frontier:
        cur, depth = frontier.popleft()
        if depth >= cap:
            continue
        for nxt in local_moves(cur):
            if nxt in seen:
                continue
            seen.add(nxt)
            cnt = count_in(mask, nxt)
            if cnt == c:
                return nxt
            if cnt in allowed:
                frontier.append((nxt, depth + 1))
    return None


def _exhaustive(mask: Mask, c: int) -> Perm | None:
    n = len(mask)
    colors = np.where(np.array(mask), 0, 1)
    counts = perm_counts(colors, 2)[:, 0]
    hits = np.flatnonzero(counts == c)
    return tuple(int(x) for x in all_perms(n)[hits[0]]) if len(hits) else None


@dataclass
class WalkStats:
    steps: int = 0
    bfs_runs: int = 0
    exhaustive_runs: int = 0


def exact_count_matching(F, c: int, stats: WalkStats | None = None) -> Perm:
    """A perfect matching with exactly ``c`` edges in F.

    Walks from the c_min witness to the c_max witness by transpositions (fix
    the smallest disagreeing position each step; the count moves by at most
    2). If the walk steps over c, a breadth-first search through moves of
    Hamming distance at most 4, kept within counts c-1..c+1, starts from the
    two matchings on either side of the jump. Counts ruled out by rigidity or
    by the block-sum gap raise before any search.
    """
    mask = as_mask(F)
    n = len(mask)
    c_min, c_max, w_min, w_max = extreme_counts(mask)
    if not c_min <= c <= c_max:
        raise OutOfRange(f"count {c} outside [{c_min}, {c_max}]")
    cert = check_rigidity(mask)
    if cert.rigid:
        ach = rigid_achievable(n, len(cert.K), len(cert.L))
        if c not in ach:
            raise RigidInfeasible(c, ach)
        perm = _rigid_perm(n, cert.K, cert.L, c)
        if count_in(mask, perm) != c:
            raise InternalInvariantViolation("rigid construction miscounted")
        return perm
    if c == block_gap(mask):
        raise CountInfeasible(c, achievable(mask))

    stats = stats if stats is not None else WalkStats()
    cur = list(w_min)
    cnt = c_min
    if cnt == c:
        return w_min
    while tuple(cur) != w_max:
        i = next(p for p in range(n) if cur[p] != w_max[p])
        j = cur.index(w_max[i])
        prev, prev_cnt = tuple(cur), cnt
        cur[i], cur[j] = cur[j], cur[i]
        cnt = count_in(mask, cur)
        stats.steps += 1
        if abs(cnt - prev_cnt) > 2:
            raise InternalInvariantViolation("transposition changed the count by more than 2")
        if cnt == c:
            return tuple(cur)
        if min(prev_cnt, cnt) < c < max(prev_cnt, cnt):
            stats.bfs_runs += 1
            found = _bfs(mask, [prev, tuple(cur)], c, 2 * n)
            if found is not None:
                return found
            log.warning("local search missed count %d at a jump", c)
    if n <= ENUMERATION_CAP:
        stats.exhaustive_runs += 1
        found = _exhaustive(mask, c)
        if found is not None:
            return found
        counts = np.unique(perm_counts(np.where(np.array(mask), 0, 1), 2)[:, 0])
        raise CountInfeasible(c, counts.tolist())
    raise SearchExhausted(f"no matching with {c} edges of F found (non-rigid F)")


def almost_fair_two(F) -> Perm:
    """A perfect matching N with |N & F| and |N - F| both near their averages.

    Uses c = |F|/n when n divides |F| and the set is not rigid; otherwise the
    achievable one of floor and ceil, falling back to c - 1 or c + 1 for rigid
    sets where c itself is impossible.
    """
    mask = as_mask(F)
    n = len(mask)
    size = sum(sum(r) for r in mask)
    q, r = divmod(size, n)
    lo, hi, _, _ = extreme_counts(mask)
    options = [q] if r == 0 else [q, q + 1]
    if r == 0:
        options += [q - 1, q + 1]
    for c in options:
        if not lo <= c <= hi:
            continue
        try:
            return exact_count_matching(mask, c)
        except RigidInfeasible:
            continue
    raise InternalInvariantViolation(f"no admissible count near {size}/{n}")


def parity_signature(F, exhaustive: bool = False) -> str:
    """'even' or 'odd' when every perfect matching meets F with that parity, else 'mixed'."""
    mask = as_mask(F)
    n = len(mask)
    if exhaustive:
        if n > ENUMERATION_CAP:
            raise PreconditionViolation(f"exhaustive parity check limited to n <= {ENUMERATION_CAP}")
        colors = np.where(np.array(mask), 0, 1)
        parities = set((perm_counts(colors, 2)[:, 0] % 2).tolist())
        if len(parities) > 1:
            return "mixed"
        return "even" if parities == {0} else "odd"
    cert = check_rigidity(mask)
    if not cert.rigid:
        return "mixed"
    return "even" if cert.parity == 0 else "odd"


def from_mask(mask) -> ColorMatrix:
    return subset_matrix(mask)
