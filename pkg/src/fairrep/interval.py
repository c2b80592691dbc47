"""Almost-fair independent sets in paths, cycles and powers of cycles."""

from __future__ import annotations

import logging
import sys
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable, Sequence

import numpy as np

from .core import (
    CapExceeded,
    FairnessReport,
    InternalInvariantViolation,
    InvalidInstance,
    Kind,
    PreconditionViolation,
    SearchExhausted,
    VertexPartition,
    interval_report,
)

log = logging.getLogger(__name__)

PATTERN_BUDGET = 10 ** 8
ORACLE_CAP = {Kind.PATH: 24, Kind.CYCLE: 24, Kind.POWER_CYCLE: 20}

# cut-pattern matrices up to this many cells are kept in memory between calls
_PATTERN_CACHE_CELLS = 4_000_000


def _require(instance: VertexPartition, kind: Kind) -> None:
    if instance.kind is not kind:
        raise PreconditionViolation(f"expected a {kind.value} instance, got {instance.kind.value}")
    if kind is not Kind.PATH and instance.n < 3:
        raise PreconditionViolation("cycles need at least 3 vertices")


# ---------------------------------------------------------------------------
# paths: cut patterns
# ---------------------------------------------------------------------------

def _sign_table(k: int) -> np.ndarray:
    # row r, column t: bit t of r
    r = np.arange(2 ** k)[:, None]
    return ((r >> np.arange(k)[None, :]) & 1).astype(bool)


def _cutset_patterns(n: int, cuts: tuple[int, ...]) -> np.ndarray:
    """Sets produced by one cut set under every sign assignment of its runs.

    A cut vertex is dropped (it is the bead holding a cut point). Inside a run
    a ``+`` sign keeps the odd vertices of the path (1-based) and ``-`` the
    even ones. Dropping the cut vertices keeps the result independent.
    """
    seg = np.full(n, -1)
    k = -1
    prev_cut = True
    cut_set = set(cuts)
    for p in range(n):
        if p in cut_set:
            prev_cut = True
            continue
        if prev_cut:
            k += 1
            prev_cut = False
        seg[p] = k
    k += 1
    if k == 0:
        return np.zeros((1, n), dtype=bool)
    signs = _sign_table(k)
    live = seg >= 0
    odd = (np.arange(n) % 2).astype(bool)
    picked = np.zeros((signs.shape[0], n), dtype=bool)
    picked[:, live] = signs[:, seg[live]] ^ odd[live]
    return picked


def _pattern_blocks(n: int, max_cuts: int):
    for c in range(max_cuts + 1):
        block = []
        for cuts in combinations(range(n), c):
            block.append(_cutset_patterns(n, cuts))
            if len(block) >= 256:
                yield np.concatenate(block)
                block = []
        if block:
            yield np.concatenate(block)


@lru_cache(maxsize=32)
def _pattern_matrix(n: int, max_cuts: int) -> np.ndarray:
    arr = np.unique(np.concatenate(list(_pattern_blocks(n, max_cuts))), axis=0)
    arr.setflags(write=False)
    return arr


def pattern_count_bound(n: int, cuts: int) -> int:
    return sum(comb(n, c) for c in range(cuts + 1)) * 2 ** (cuts + 1)


def _best_rows(sets: np.ndarray, onehot: np.ndarray, sizes: np.ndarray, beta: int):
    """Smallest total deficit (in units of 1/beta) over the rows, and those rows."""
    counts = sets.astype(np.int32) @ onehot
    short = np.maximum(0, sizes[None, :] - beta * counts).sum(axis=1)
    best = int(short.min())
    return best, sets[short == best]


def _lex_min(rows: np.ndarray) -> tuple[int, ...]:
    return min(tuple(int(p) for p in np.flatnonzero(r)) for r in rows)


def _onehot(instance: VertexPartition) -> np.ndarray:
    oh = np.zeros((instance.n, instance.m), dtype=np.int32)
    oh[np.arange(instance.n), instance.classes] = 1
    return oh


def _search_patterns(instance: VertexPartition, max_cuts: int) -> tuple[int, tuple[int, ...]]:
    n = instance.n
    if pattern_count_bound(n, max_cuts) > PATTERN_BUDGET:
        raise CapExceeded(f"cut-pattern search over n={n} with {max_cuts} cuts exceeds budget")
    onehot = _onehot(instance)
    sizes = np.array(instance.sizes)
    if pattern_count_bound(n, max_cuts) * n <= _PATTERN_CACHE_CELLS:
        best, rows = _best_rows(_pattern_matrix(n, max_cuts), onehot, sizes, 2)
        return best, _lex_min(rows)
    best, cands = None, []
    for block in _pattern_blocks(n, max_cuts):
        b, rows = _best_rows(block, onehot, sizes, 2)
        if best is None or b < best:
            best, cands = b, [_lex_min(rows)]
        elif b == best:
            cands.append(_lex_min(rows))
    return best, min(cands)


def solve_path_total(instance: VertexPartition) -> tuple[tuple[int, ...], FairnessReport]:
    """Independent set of a path with total deficit sum(b_i) <= m/2.

    Searches the discrete shadow of the necklace-splitting argument: at most
    m cut vertices, a sign per run between cuts, odd or even vertices of each
    run by sign. Returns the best pattern found (ties: lexicographically
    smallest member list). Classes of size 2 get an extra pass that pushes
    the total to m/3.
    """
    _require(instance, Kind.PATH)
    m = instance.m
    if m == 1:
        members = tuple(range(0, instance.n, 2))
        return members, interval_report(instance, members)

    best, members = _search_patterns(instance, m)
    if best > m:
        log.warning("no compliant pattern with %d cuts for %s; escalating", m, instance.classes)
        best, members = _search_patterns(instance, m + 1)
        if best > m:
            raise InternalInvariantViolation(f"pattern search failed for {instance.classes}")

    if all(size == 2 for size in instance.sizes):
        alt = _pairs_by_coloring(instance)
        alt_short = sum(max(0, 2 - 2 * c) for c in interval_report(instance, alt).counts)
        if (alt_short, alt) < (best, members):
            members = alt

    return members, interval_report(instance, members)


def _pairs_by_coloring(instance: VertexPartition) -> tuple[int, ...]:
    """Largest colour class of a 3-colouring of the path plus the class pairs.

    The added pairs raise the maximum degree to 3 and no K4 can form, so a
    3-colouring exists; its largest class has at least n/3 vertices, meets
    each pair at most once and is independent in the path.
    """
    n = instance.n
    nbrs = [set() for _ in range(n)]
    for p in range(n - 1):
        nbrs[p].add(p + 1)
        nbrs[p + 1].add(p)
    for i in range(instance.m):
        a, b = instance.members(i)
        nbrs[a].add(b)
        nbrs[b].add(a)
    coloring = _three_color(nbrs)
    if coloring is None:
        raise InternalInvariantViolation("degree-3 graph without K4 not 3-colourable")
    classes = [tuple(p for p in range(n) if coloring[p] == c) for c in range(3)]
    return min(classes, key=lambda cls: (-len(cls), cls))


def _three_color(nbrs: list[set[int]]) -> list[int] | None:
    n = len(nbrs)
    color = [-1] * n
    order = sorted(range(n), key=lambda v: -len(nbrs[v]))

    def place(idx: int) -> bool:
        if idx == n:
            return True
        v = order[idx]
        used = {color[u] for u in nbrs[v]}
        for c in range(3):
            if c not in used:
                color[v] = c
                if place(idx + 1):
                    return True
        color[v] = -1
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, n + 100))
    try:
        return color if place(0) else None
    finally:
        sys.setrecursionlimit(limit)


# ---------------------------------------------------------------------------
# cycles and cycle powers: exact counts
# ---------------------------------------------------------------------------

def exact_counts(labels: Sequence[int], targets: Sequence[int], s: int = 2) -> tuple[int, ...] | None:
    """Lexicographically smallest set of a cycle power with exact class counts.

    ``labels[p]`` is the class of vertex p (positions form a cycle of length
    len(labels)); chosen vertices must be at cyclic distance >= s; class i must
    receive exactly ``targets[i]`` vertices. Dynamic programme over positions
    with state (distance since the last chosen vertex capped at s, remaining
    demand); the wrap-around gap is handled by fixing the first chosen vertex.
    Returns None when no such set exists.
    """
    n = len(labels)
    targets = tuple(int(t) for t in targets)
    k = sum(targets)
    if min(targets, default=0) < 0:
        return None
    if k == 0:
        return ()
    if k == 1:
        for p in range(n):
            if targets[labels[p]] == 1:
                return (p,)
        return None
    if k * s > n:
        return None

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 200))
    try:
        for first in range(n):
            c = labels[first]
            if targets[c] == 0:
                continue
            need = list(targets)
            need[c] -= 1
            found = _complete_from(labels, s, first, tuple(need))
            if found is not None:
                return (first,) + found
    finally:
        sys.setrecursionlimit(limit)
    return None


def _complete_from(labels, s, first, need0):
    n = len(labels)
    last_allowed = n + first - s  # keeps the wrap gap >= s
    memo: dict = {}

    def feasible(pos: int, since: int, need: tuple[int, ...]) -> bool:
        if not any(need):
            return True
        if pos >= n or pos > last_allowed:
            return False
        key = (pos, since, need)
        hit = memo.get(key)
        if hit is not None:
            return hit
        ok = False
        c = labels[pos]
        if since >= s and need[c] > 0:
            nxt = need[:c] + (need[c] - 1,) + need[c + 1:]
            ok = feasible(pos + 1, 1, nxt)
        if not ok:
            ok = feasible(pos + 1, min(s, since + 1), need)
        memo[key] = ok
        return ok

    start_since = 1
    if not feasible(first + 1, start_since, need0):
        return None
    out = []
    pos, since, need = first + 1, start_since, need0
    while any(need):
        c = labels[pos]
        if since >= s and need[c] > 0 and pos <= last_allowed:
            nxt = need[:c] + (need[c] - 1,) + need[c + 1:]
            if feasible(pos + 1, 1, nxt):
                out.append(pos)
                pos, since, need = pos + 1, 1, nxt
                continue
        pos, since = pos + 1, min(s, since + 1)
    return tuple(out)


def t11_targets(sizes: Sequence[int]) -> tuple[int, ...]:
    """Targets r_i when exactly one class has even size (the others odd)."""
    evens = [i for i, size in enumerate(sizes) if size % 2 == 0]
    if len(evens) != 1:
        raise PreconditionViolation(
            f"exactly one class must have even size, got sizes {list(sizes)}")
    return tuple(size // 2 if size % 2 == 0 else (size - 1) // 2 for size in sizes)


def solve_cycle_exact(instance: VertexPartition, targets: Sequence[int] | None = None) -> tuple[int, ...]:
    """Independent set of a cycle meeting class i in exactly r_i vertices.

    Sizes must be 2 r_i + 1 for every class but one, which has size 2 r_i.
    """
    _require(instance, Kind.CYCLE)
    sizes = instance.sizes
    if targets is None:
        targets = t11_targets(sizes)
    targets = tuple(int(t) for t in targets)
    if len(targets) != instance.m:
        raise PreconditionViolation(f"{len(targets)} targets for {instance.m} classes")
    even = [i for i in range(instance.m) if sizes[i] == 2 * targets[i]]
    odd = [i for i in range(instance.m) if sizes[i] == 2 * targets[i] + 1]
    if len(even) != 1 or len(even) + len(odd) != instance.m or min(targets) < 0:
        raise PreconditionViolation(
            f"sizes {list(sizes)} do not match targets {list(targets)} "
            "(need |V_i| = 2r_i + 1 for all classes but one, which has 2r_i)")
    found = exact_counts(instance.classes, targets, 2)
    if found is None:
        raise SearchExhausted(f"no exact-count set for {instance.classes} with targets {targets}")
    return found


def _solve_on_remaining(instance, deleted, targets, s):
    keep = [p for p in range(instance.n) if p not in deleted]
    labels = [instance.classes[p] for p in keep]
    found = exact_counts(labels, targets, s)
    if found is None:
        raise SearchExhausted(
            f"no exact-count set after deleting {sorted(deleted)} from {instance.classes}")
    return tuple(keep[q] for q in found)


def contraction_plan(instance: VertexPartition, avoid: int | None = None) -> tuple[set[int], tuple[int, ...]]:
    """Vertices to delete and per-class targets for the individual-deficit solver.

    Deleting a vertex u of a cycle is contracting an edge at u: the shorter
    cycle has every adjacency of the remaining vertices and more. Afterwards
    exactly one class has even size and takes half of it; every other class
    has odd size and takes (size - 1) / 2.
    """
    sizes = list(instance.sizes)
    deleted: set[int] = set()

    def drop(p: int) -> None:
        deleted.add(p)
        sizes[instance.classes[p]] -= 1

    def lowest_remaining(cls: int | None = None) -> int:
        return min(p for p in range(instance.n)
                   if p not in deleted and (cls is None or instance.classes[p] == cls))

    if avoid is not None:
        if not 0 <= avoid < instance.n:
            raise InvalidInstance(f"vertex {avoid + 1} not in the cycle")
        drop(avoid)
    while True:
        evens = [i for i in range(instance.m) if sizes[i] % 2 == 0]
        if evens:
            break
        drop(lowest_remaining())
    if avoid is not None and instance.classes[avoid] in evens:
        designated = instance.classes[avoid]
    else:
        designated = evens[0]
    for i in evens:
        if i != designated:
            drop(lowest_remaining(i))
    targets = tuple(size // 2 if i == designated else (size - 1) // 2
                    for i, size in enumerate(sizes))
    return deleted, targets


def solve_cycle_individual(instance: VertexPartition, avoid: int | None = None
                           ) -> tuple[tuple[int, ...], FairnessReport]:
    """Independent set of a cycle with every class deficit b_i <= 1.

    ``avoid`` (0-based) is a vertex the set must not contain.
    """
    _require(instance, Kind.CYCLE)
    n = instance.n
    if instance.m == 1:
        start = 0 if avoid is None else (avoid + 1) % n
        members = tuple(sorted((start + 2 * t) % n for t in range(n // 2)))
    else:
        deleted, targets = contraction_plan(instance, avoid)
        members = _solve_on_remaining(instance, deleted, targets, 2)
    report = interval_report(instance, members)
    if max(report.deficits) > 1:
        raise InternalInvariantViolation(f"deficit above 1 for {instance.classes}: {report.deficits}")
    return members, report


def is_power_of_two(s: int) -> bool:
    return s >= 1 and s & (s - 1) == 0


def power_cycle_targets(sizes: Sequence[int], s: int) -> tuple[int, ...]:
    """floor((|V_i| - s + 1)/s) for all classes but the last, floor(|V_m|/s) for it.

    Classes too small for the first formula (size < s - 1) get target 0.
    """
    last = len(sizes) - 1
    return tuple(size // s if i == last else max(0, (size - s + 1) // s)
                 for i, size in enumerate(sizes))


def solve_power_cycle(instance: VertexPartition) -> tuple[int, ...]:
    """Independent set of the (s-1)-th power of a cycle with the guaranteed per-class counts.

    Only s a power of 2 is supported. Each class but the last is shrunk to
    s*r + s - 1 vertices and the last to s*r by deleting its lowest-indexed
    vertices, then the exact-count programme runs on the shorter cycle power.
    """
    if instance.kind is not Kind.POWER_CYCLE:
        raise PreconditionViolation(f"expected a power_cycle instance, got {instance.kind.value}")
    s = instance.s
    if not is_power_of_two(s):
        raise PreconditionViolation(f"s={s} is not a power of 2")
    targets = power_cycle_targets(instance.sizes, s)
    last = instance.m - 1
    deleted: set[int] = set()
    for i in range(instance.m):
        members = instance.members(i)
        if i == last:
            keep = s * targets[i]
        else:
            keep = s * targets[i] + s - 1 if len(members) >= s - 1 else 0
        deleted.update(members[: len(members) - keep])
    return _solve_on_remaining(instance, deleted, targets, s)


# ---------------------------------------------------------------------------
# two disjoint transversals of triples on C_{3k}
# ---------------------------------------------------------------------------

def solve_dhw(instance: VertexPartition) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two disjoint independent sets of C_{3k}, each with one vertex per triple.

    Backtracking over the triples (ordered by smallest vertex) with forward
    checking of both sets' neighbourhoods.
    """
    _require(instance, Kind.CYCLE)
    n = instance.n
    if n % 3 or any(size != 3 for size in instance.sizes):
        raise PreconditionViolation("need a cycle of length 3k split into k triples")
    triples = sorted((tuple(instance.members(i)) for i in range(instance.m)), key=min)
    blocked = [[0] * n, [0] * n]  # per set: number of chosen neighbours
    chosen: list[list[int]] = [[], []]

    def nbrs(p):
        return ((p - 1) % n, (p + 1) % n)

    def put(which, p, delta):
        for q in nbrs(p):
            blocked[which][q] += delta

    def options(t):
        a = [p for p in t if not blocked[0][p]]
        b = [p for p in t if not blocked[1][p]]
        return [(x, y) for x in a for y in b if x != y]

    def search(idx: int) -> bool:
        if idx == len(triples):
            return True
        for x, y in options(triples[idx]):
            put(0, x, 1)
            put(1, y, 1)
            chosen[0].append(x)
            chosen[1].append(y)
            if all(options(t) for t in triples[idx + 1:]) and search(idx + 1):
                return True
            chosen[0].pop()
            chosen[1].pop()
            put(0, x, -1)
            put(1, y, -1)
        return False

    if not search(0):
        raise SearchExhausted(f"no two disjoint transversals for {instance.classes}")
    first, second = tuple(sorted(chosen[0])), tuple(sorted(chosen[1]))
    return (first, second) if first <= second else (second, first)


# ---------------------------------------------------------------------------
# enumeration oracle
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _independent_matrix(kind: Kind, n: int, s: int) -> np.ndarray:
    step = 2 if kind is Kind.PATH else s
    rows: list[tuple[int, ...]] = []
    stack: list[tuple[int, ...]] = [()]
    while stack:
        cur = stack.pop()
        rows.append(cur)
        start = cur[-1] + step if cur else 0
        for p in range(n - 1, start - 1, -1):
            if kind is not Kind.PATH and cur and n - p + cur[0] < s:
                continue
            stack.append(cur + (p,))
    arr = np.zeros((len(rows), n), dtype=bool)
    for r, members in enumerate(rows):
        arr[r, list(members)] = True
    arr.setflags(write=False)
    return arr


def independent_sets(instance: VertexPartition, cap: int | None = None) -> np.ndarray:
    """Every independent set of the host as a boolean matrix (one row per set)."""
    cap = ORACLE_CAP[instance.kind] if cap is None else cap
    if instance.n > cap:
        raise CapExceeded(f"n={instance.n} above enumeration cap {cap}")
    return _independent_matrix(instance.kind, instance.n, instance.s)


def oracle_interval(instance: VertexPartition,
                    predicate: Callable[[tuple[int, ...], FairnessReport], bool] | None = None,
                    cap: int | None = None):
    """Exhaustive search over independent sets.

    Without a predicate: ``(members, total_deficit)`` minimising the total
    deficit (ties: lexicographically smallest members). With a predicate:
    every set (in lexicographic order) for which it holds.
    """
    sets = independent_sets(instance, cap)
    if predicate is None:
        beta = instance.beta
        best, rows = _best_rows(sets, _onehot(instance), np.array(instance.sizes), beta)
        return _lex_min(rows), Fraction(best, beta)
    hits = []
    for row in sets:
        members = tuple(int(p) for p in np.flatnonzero(row))
        if predicate(members, interval_report(instance, members)):
            hits.append(members)
    return sorted(hits)
