"""Brute-force checkers for the open fair-representation conjectures,
seeded sweeps over small instance families, and the named fixtures.

Every checker is exhaustive within a cap and returns a :class:`Verdict`.
Sweeps run a checker (or one of the constructive solvers) over a family of
instances; a failure is only reported after a second, independently coded
recount agrees with it.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import chain, combinations, combinations_with_replacement, permutations, product
from math import comb, factorial
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .bipartite2 import (as_mask, check_rigidity, exact_count_matching, extreme_counts,
                         rigid_achievable)
from .bipartite3 import solve_three_traced, theorem_bounds
from .core import (BudgetExceeded, CapExceeded, ColorMatrix, CountInfeasible, FairRepError,
                   InternalInvariantViolation, InvalidInstance, Kind, PreconditionViolation,
                   RigidInfeasible, VertexPartition, instance_from_json, instance_to_json,
                   interval_report, perm_to_json, set_to_json)
from .interval import (independent_sets, oracle_interval, power_cycle_targets,
                       solve_cycle_exact, solve_cycle_individual, solve_dhw, solve_path_total,
                       solve_power_cycle, t11_targets)
from .matching import all_perms, perm_counts

log = logging.getLogger(__name__)

PERM_CAP = 7
SEARCH_BUDGET = 2_000_000
FIXTURE_DIR = Path(__file__).with_name("fixtures")
SIMPLE_HOST_NOTE = ("rainbow checks run on simple bipartite hosts with pairwise disjoint "
                    "edge sets; multigraph hosts are not covered")


@dataclass
class Verdict:
    holds: bool
    witness: object = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"holds": self.holds, "witness": self.witness, **self.detail}


# ---------------------------------------------------------------------------
# edge-set instances
# ---------------------------------------------------------------------------

Edge = tuple[int, int]


@dataclass(frozen=True)
class EdgeSets:
    """Sets of edges of a simple bipartite host (left vertex, right vertex), 0-based.

    ``host`` defaults to the union of the sets.
    """
    sets: tuple[tuple[Edge, ...], ...]
    host: tuple[Edge, ...] = ()

    def __post_init__(self):
        if not self.host:
            object.__setattr__(self, "host", tuple(sorted(set(chain.from_iterable(self.sets)))))
        if len(set(self.host)) != len(self.host):
            raise InvalidInstance("host has repeated edges")
        hs = set(self.host)
        for S in self.sets:
            if len(set(S)) != len(S):
                raise InvalidInstance("an edge set lists the same edge twice")
            if not hs.issuperset(S):
                raise InvalidInstance("edge set not contained in the host")

    @property
    def m(self) -> int:
        return len(self.sets)

    def max_degree(self, edges: Iterable[Edge] | None = None) -> int:
        edges = self.host if edges is None else edges
        deg = Counter()
        for u, v in edges:
            deg["L", u] += 1
            deg["R", v] += 1
        return max(deg.values(), default=0)

    def union_degree(self) -> int:
        return self.max_degree(set(chain.from_iterable(self.sets)))

    def disjoint(self) -> bool:
        return sum(len(S) for S in self.sets) == len(set(chain.from_iterable(self.sets)))


@dataclass(frozen=True)
class LabeledEdges:
    """Edges of a simple bipartite graph with labels 1..k (stored 0-based)."""
    edges: tuple[Edge, ...]
    labels: tuple[int, ...]
    k: int

    def __post_init__(self):
        if len(self.edges) != len(self.labels):
            raise InvalidInstance("one label per edge required")
        if len(set(self.edges)) != len(self.edges):
            raise InvalidInstance("repeated edge")
        if any(not 0 <= f < self.k for f in self.labels):
            raise InvalidInstance(f"labels must lie in 1..{self.k}")

    def max_degree(self) -> int:
        return EdgeSets((), self.edges).max_degree() if self.edges else 0


def _edge_json(e: Edge) -> list[int]:
    return [e[0] + 1, e[1] + 1]


def _edge_from(pair) -> Edge:
    u, v = pair
    return int(u) - 1, int(v) - 1


def edges_from_json(data: dict) -> EdgeSets | LabeledEdges:
    if "instance" in data and isinstance(data["instance"], dict):
        data = data["instance"]
    kind = data.get("kind")
    if kind == "edge_sets":
        sets = tuple(tuple(_edge_from(e) for e in S) for S in data["sets"])
        host = tuple(_edge_from(e) for e in data.get("host", []))
        return EdgeSets(sets, host)
    if kind == "labeled_edges":
        edges = tuple(_edge_from(e[:2]) for e in data["edges"])
        labels = tuple(int(e[2]) - 1 for e in data["edges"])
        k = int(data.get("k", max(labels, default=-1) + 1))
        return LabeledEdges(edges, labels, k)
    raise InvalidInstance(f"unrecognised edge instance kind {kind!r}")


def edges_to_json(inst: EdgeSets | LabeledEdges) -> dict:
    if isinstance(inst, EdgeSets):
        out = {"kind": "edge_sets", "sets": [[_edge_json(e) for e in S] for S in inst.sets]}
        if set(inst.host) != set(chain.from_iterable(inst.sets)):
            out["host"] = [_edge_json(e) for e in inst.host]
        return out
    return {"kind": "labeled_edges", "k": inst.k,
            "edges": [_edge_json(e) + [f + 1] for e, f in zip(inst.edges, inst.labels)]}


def load_instance(data: dict):
    """Any instance kind the package understands."""
    inner = data.get("instance", data) if isinstance(data.get("instance"), dict) else data
    if inner.get("kind") in ("edge_sets", "labeled_edges"):
        return edges_from_json(inner)
    return instance_from_json(inner)


def dump_instance(inst) -> dict:
    if isinstance(inst, (EdgeSets, LabeledEdges)):
        return edges_to_json(inst)
    return instance_to_json(inst)


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------

def _bit_value(members: Sequence[int]) -> int:
    return sum(1 << p for p in members)


def check_treesconj0(instance: VertexPartition, cap: int | None = None) -> Verdict:
    """Is there an independent set of the path with sum(b_i) <= m/2 and every b_i <= 1?

    Witness: the qualifying set of smallest total deficit, then smallest
    size, then smallest bit value.
    """
    if instance.kind is not Kind.PATH:
        raise PreconditionViolation(f"expected a path instance, got {instance.kind.value}")
    sets = independent_sets(instance, cap)
    onehot = np.zeros((instance.n, instance.m), dtype=np.int64)
    onehot[np.arange(instance.n), instance.classes] = 1
    counts = sets.astype(np.int64) @ onehot
    short = np.maximum(0, np.array(instance.sizes) - 2 * counts)  # 2 b_i
    total_ok = short.sum(axis=1) <= instance.m
    each_ok = (short <= 2).all(axis=1)
    both = np.flatnonzero(total_ok & each_ok)
    detail = {
        "min_total": str(Fraction(int(short.sum(axis=1).min()), 2)),
        "min_max_individual": str(Fraction(int(short.max(axis=1).min()), 2)),
        "total_ok": bool(total_ok.any()),
        "individual_ok": bool(each_ok.any()),
    }
    if len(both) == 0:
        return Verdict(False, None, detail)
    cands = [tuple(int(p) for p in np.flatnonzero(sets[r])) for r in both]
    totals = short.sum(axis=1)
    best = min(zip(cands, both), key=lambda t: (totals[t[1]], len(t[0]), _bit_value(t[0])))[0]
    return Verdict(True, set_to_json(best), detail)


def _perm_cap(A: ColorMatrix) -> None:
    if A.n > PERM_CAP:
        raise CapExceeded(f"n={A.n} above the permutation enumeration cap {PERM_CAP}")


def _first_row(ok: np.ndarray) -> int | None:
    hits = np.flatnonzero(ok)
    return int(hits[0]) if len(hits) else None


def check_equirep00(A: ColorMatrix, j: int | None = None) -> Verdict:
    """Some perfect matching meets every part i != j in floor(|E_i|/n) edges
    and part j in floor(|E_j|/n) - 1.

    With ``j=None`` the verdict holds only if it holds for every j. The
    detail records whether a fully fair matching (no -1 anywhere) exists.
    """
    _perm_cap(A)
    n, m = A.n, A.m
    counts = perm_counts(np.array(A.colors), m)
    floors = np.array(A.sizes) // n
    fair = (counts >= floors).all(axis=1)
    js = range(m) if j is None else [j]
    if j is not None and not 0 <= j < m:
        raise PreconditionViolation(f"part {j + 1} outside 1..{m}")
    failing = []
    witness = None
    for jj in js:
        need = floors.copy()
        need[jj] -= 1
        row = _first_row((counts >= need).all(axis=1))
        if row is None:
            failing.append(jj + 1)
        elif witness is None:
            witness = perm_to_json(tuple(int(x) for x in all_perms(n)[row]))
    fair_row = _first_row(fair)
    detail = {
        "j": None if j is None else j + 1,
        "failing_j": failing,
        "fair": fair_row is not None,
        "fair_witness": None if fair_row is None
        else perm_to_json(tuple(int(x) for x in all_perms(n)[fair_row])),
    }
    return Verdict(not failing, witness if not failing else None, detail)


def check_stein(A: ColorMatrix) -> Verdict:
    """With n parts of size n: does some perfect matching meet n - 1 distinct parts?"""
    _perm_cap(A)
    n = A.n
    if A.m != n or any(size != n for size in A.sizes):
        raise PreconditionViolation("expected n parts of size n each")
    perms = all_perms(n).astype(np.intp)
    cells = np.sort(np.array(A.colors)[np.arange(n), perms], axis=1)
    distinct = 1 + (np.diff(cells, axis=1) != 0).sum(axis=1)
    best = int(distinct.max())
    row = _first_row(distinct >= n - 1)
    full = _first_row(distinct == n)
    witness = None if row is None else perm_to_json(tuple(int(x) for x in perms[row]))
    detail = {"max_parts": best, "full_transversal": full is not None,
              "full_witness": None if full is None else perm_to_json(tuple(int(x) for x in perms[full]))}
    return Verdict(row is not None, witness, detail)


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise CapExceeded(f"search exceeded {self.limit} nodes")


def check_rainbow(inst: EdgeSets, budget: int = SEARCH_BUDGET) -> Verdict:
    """Is there a matching taking one edge from each set (a rainbow matching)?"""
    order = sorted(range(inst.m), key=lambda i: (len(inst.sets[i]), i))
    chosen: dict[int, Edge] = {}
    used_l: set[int] = set()
    used_r: set[int] = set()
    nodes = _Budget(budget)

    def go(t: int) -> bool:
        if t == len(order):
            return True
        nodes.tick()
        i = order[t]
        for u, v in inst.sets[i]:
            if u in used_l or v in used_r:
                continue
            used_l.add(u)
            used_r.add(v)
            chosen[i] = (u, v)
            if go(t + 1):
                return True
            used_l.discard(u)
            used_r.discard(v)
        return False

    found = go(0)
    detail = {"max_degree": inst.union_degree(), "sizes": [len(S) for S in inst.sets],
              "hypothesis": all(len(S) > inst.union_degree() + 1 for S in inst.sets),
              "nodes": nodes.used}
    witness = [_edge_json(chosen[i]) for i in range(inst.m)] if found else None
    return Verdict(found, witness, detail)


def max_capped_matching(edges: Sequence[Edge], member: Sequence[Sequence[int]], caps: Sequence[int],
                        budget: int = SEARCH_BUDGET) -> tuple[int, list[Edge]]:
    """Largest matching using at most caps[i] edges from set i.

    ``member[e]`` lists the sets containing edge e. Branch and bound over the
    edges in order; the bound is the number of edges left.
    """
    nodes = _Budget(budget)
    load = [0] * len(caps)
    used_l: set[int] = set()
    used_r: set[int] = set()
    cur: list[int] = []
    best: list[int] = []
    E = len(edges)

    def go(e: int) -> None:
        nonlocal best
        nodes.tick()
        if len(cur) > len(best):
            best = list(cur)
        if e == E or len(cur) + (E - e) <= len(best):
            return
        u, v = edges[e]
        if u not in used_l and v not in used_r and all(load[i] < caps[i] for i in member[e]):
            used_l.add(u)
            used_r.add(v)
            for i in member[e]:
                load[i] += 1
            cur.append(e)
            go(e + 1)
            cur.pop()
            for i in member[e]:
                load[i] -= 1
            used_l.discard(u)
            used_r.discard(v)
        go(e + 1)

    go(0)
    return len(best), [edges[e] for e in best]


def check_underrep(inst: EdgeSets, budget: int = SEARCH_BUDGET) -> Verdict:
    """Smallest c such that a matching S of G has |S| >= |E(G)|/Delta - c and
    |S & E_i| <= ceil(|E_i|/Delta) for all i; holds when c <= m/2."""
    edges = list(inst.host)
    if not edges:
        return Verdict(True, [], {"c": "0", "bound": str(Fraction(inst.m, 2)), "max_size": 0})
    delta = inst.max_degree()
    index = {e: t for t, e in enumerate(edges)}
    member = [[] for _ in edges]
    for i, S in enumerate(inst.sets):
        for e in S:
            member[index[e]].append(i)
    caps = [-(-len(S) // delta) for S in inst.sets]
    size, witness = max_capped_matching(edges, member, caps, budget)
    c = max(Fraction(0), Fraction(len(edges), delta) - size)
    bound = Fraction(inst.m, 2)
    detail = {"c": str(c), "bound": str(bound), "max_size": size, "delta": delta, "caps": caps}
    return Verdict(c <= bound, [_edge_json(e) for e in witness], detail)


def prefix_quotas(inst: LabeledEdges) -> list[int]:
    delta = inst.max_degree()
    if delta == 0:
        return [0] * inst.k
    return [sum(1 for f in inst.labels if f <= j) // delta for j in range(inst.k)]


def check_prefix_fair(inst: LabeledEdges, budget: int = SEARCH_BUDGET) -> Verdict:
    """A matching with at least floor(|{f <= j}|/Delta) edges labelled <= j, for every j."""
    quotas = prefix_quotas(inst)
    k = inst.k
    order = sorted(range(len(inst.edges)), key=lambda e: (inst.labels[e], inst.edges[e]))
    edges = [inst.edges[e] for e in order]
    labels = [inst.labels[e] for e in order]
    E = len(edges)
    # low_left[e][j]: edges at positions >= e with label <= j
    low_left = [[0] * k for _ in range(E + 1)]
    for e in range(E - 1, -1, -1):
        low_left[e] = [low_left[e + 1][j] + (labels[e] <= j) for j in range(k)]
    have = [0] * k
    used_l: set[int] = set()
    used_r: set[int] = set()
    cur: list[int] = []
    nodes = _Budget(budget)

    def go(e: int) -> bool:
        nodes.tick()
        if all(have[j] >= quotas[j] for j in range(k)):
            return True
        if e == E:
            return False
        if any(have[j] + low_left[e][j] < quotas[j] for j in range(k)):
            return False
        u, v = edges[e]
        if u not in used_l and v not in used_r:
            used_l.add(u)
            used_r.add(v)
            for j in range(labels[e], k):
                have[j] += 1
            cur.append(e)
            if go(e + 1):
                return True
            cur.pop()
            for j in range(labels[e], k):
                have[j] -= 1
            used_l.discard(u)
            used_r.discard(v)
        return go(e + 1)

    found = go(0)
    detail = {"quotas": quotas, "delta": inst.max_degree(), "nodes": nodes.used}
    witness = sorted(_edge_json(edges[e]) for e in cur) if found else None
    return Verdict(found, witness, detail)


# ---------------------------------------------------------------------------
# independent recounts (plain itertools, no shared helpers)
# ---------------------------------------------------------------------------

def _py_independent(kind: Kind, n: int, s: int, S: Sequence[int]) -> bool:
    for a, b in combinations(S, 2):
        d = abs(a - b)
        if kind is Kind.PATH:
            if d < 2:
                return False
        elif min(d, n - d) < s:
            return False
    return True


def _py_sets(inst: VertexPartition):
    for r in range(inst.n + 1):
        for S in combinations(range(inst.n), r):
            if _py_independent(inst.kind, inst.n, inst.s, S):
                yield S


def _py_counts(classes: Sequence[int], m: int, S: Iterable[int]) -> list[int]:
    out = [0] * m
    for p in S:
        out[classes[p]] += 1
    return out


def recount_treesconj0(inst: VertexPartition) -> bool:
    """True when no independent set meets both conditions."""
    sizes = _py_counts(inst.classes, inst.m, range(inst.n))
    for S in _py_sets(inst):
        c = _py_counts(inst.classes, inst.m, S)
        b = [max(Fraction(0), Fraction(z, 2) - x) for z, x in zip(sizes, c)]
        if sum(b) <= Fraction(inst.m, 2) and max(b) <= 1:
            return False
    return True


def _py_perm_counts(colors, m):
    n = len(colors)
    for p in permutations(range(n)):
        c = [0] * m
        for i in range(n):
            c[colors[i][p[i]]] += 1
        yield c


def recount_equirep00(A: ColorMatrix) -> bool:
    """True when some j admits no matching with the relaxed quotas."""
    n, m = A.n, A.m
    sizes = [sum(row.count(x) for row in A.colors) for x in range(m)]
    bad_j = set(range(m))
    for c in _py_perm_counts(A.colors, m):
        short = [x for x in range(m) if c[x] < sizes[x] // n]
        if not short:
            return False
        if len(short) == 1 and c[short[0]] >= sizes[short[0]] // n - 1:
            bad_j.discard(short[0])
    return bool(bad_j)


def recount_stein(A: ColorMatrix) -> bool:
    n = A.n
    return all(len({A.colors[i][p[i]] for i in range(n)}) < n - 1 for p in permutations(range(n)))


def recount_rainbow(inst: EdgeSets) -> bool:
    for pick in product(*inst.sets):
        if len({u for u, _ in pick}) == len(pick) == len({v for _, v in pick}):
            return False
    return True


def _py_matchings(edges: Sequence[Edge]):
    """Every matching, as index tuples, smallest first."""
    for r in range(len(edges) + 1):
        found = False
        for M in combinations(range(len(edges)), r):
            if len({edges[e][0] for e in M}) == r == len({edges[e][1] for e in M}):
                found = True
                yield M
        if not found:
            return


def recount_underrep(inst: EdgeSets) -> bool:
    edges = list(inst.host)
    delta = inst.max_degree()
    bound = Fraction(len(edges), delta) - Fraction(inst.m, 2)
    caps = [-(-len(S) // delta) for S in inst.sets]
    sets = [set(S) for S in inst.sets]
    for M in _py_matchings(edges):
        chosen = {edges[e] for e in M}
        if len(M) >= bound and all(len(chosen & S) <= cap for S, cap in zip(sets, caps)):
            return False
    return True


def recount_prefix(inst: LabeledEdges) -> bool:
    quotas = prefix_quotas(inst)
    for M in _py_matchings(inst.edges):
        if all(sum(1 for e in M if inst.labels[e] <= j) >= quotas[j] for j in range(inst.k)):
            return False
    return True


# ---------------------------------------------------------------------------
# instance families
# ---------------------------------------------------------------------------

def stirling2(n: int, k: int) -> int:
    row = [1] + [0] * k
    for i in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, min(i, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def labelings(n: int, m: int) -> Iterable[tuple[int, ...]]:
    """Surjective labelings of n positions by m classes, up to renaming classes
    (restricted growth strings, lexicographic)."""
    if m > n or m < 1:
        return
    cur = [0] * n

    def go(p: int, used: int):
        if n - p < m - used:
            return
        if p == n:
            if used == m:
                yield tuple(cur)
            return
        for c in range(min(used + 1, m)):
            cur[p] = c
            yield from go(p + 1, max(used, c + 1))

    yield from go(0, 0)


def necklaces(n: int, m: int) -> Iterable[tuple[int, ...]]:
    """Labelings of a cycle by m classes, all classes used, one per rotation
    class (lexicographically smallest rotation; FKM generation)."""
    a = [0] * (n + 1)

    def gen(t: int, p: int):
        if t > n:
            if n % p == 0:
                yield tuple(a[1:])
            return
        a[t] = a[t - p]
        yield from gen(t + 1, p)
        for j in range(a[t - p] + 1, m):
            a[t] = j
            yield from gen(t + 1, t)

    for w in gen(1, 1):
        if len(set(w)) == m:
            yield w


def _necklace_count(n: int, m: int) -> int:
    return m ** n // max(1, n) + m ** n // 2 + 1  # generous upper bound for budgeting


def triple_partitions(n: int) -> Iterable[tuple[int, ...]]:
    """Class labels of every partition of range(n) into triples."""
    if n % 3:
        return
    labels = [-1] * n

    def go(cls: int):
        try:
            first = labels.index(-1)
        except ValueError:
            yield tuple(labels)
            return
        labels[first] = cls
        free = [p for p in range(first + 1, n) if labels[p] == -1]
        for a, b in combinations(free, 2):
            labels[a] = labels[b] = cls
            yield from go(cls + 1)
            labels[a] = labels[b] = -1
        labels[first] = -1

    yield from go(0)


def _triple_count(n: int) -> int:
    k = n // 3
    return factorial(n) // (6 ** k * factorial(k)) if n % 3 == 0 else 0


def _sort_network(cols: list[np.ndarray]) -> list[np.ndarray]:
    c = list(cols)
    for i in range(len(c)):
        for t in range(len(c) - 1 - i):
            lo = np.minimum(c[t], c[t + 1])
            c[t + 1] = np.maximum(c[t], c[t + 1])
            c[t] = lo
    return c


def _encode(cols: Sequence[np.ndarray], base: int) -> np.ndarray:
    code = cols[0].astype(np.int64)
    for x in cols[1:]:
        code = code * base + x
    return code


def row_multiset_count(n: int, m: int) -> int:
    return comb(m ** n + n - 1, n)


def _row_multisets(n: int, m: int) -> np.ndarray:
    R = m ** n
    N = row_multiset_count(n, m)
    flat = chain.from_iterable(combinations_with_replacement(range(R), n))
    return np.fromiter(flat, dtype=np.int32, count=N * n).reshape(N, n)


def _row_digits(n: int, m: int) -> np.ndarray:
    R = m ** n
    return np.array([[(r // m ** (n - 1 - c)) % m for c in range(n)] for r in range(R)], dtype=np.int32)


@lru_cache(maxsize=8)
def matrix_orbits(n: int, m: int, budget: int = 5_000_000) -> np.ndarray:
    """One n x n matrix over m symbols per orbit under row and column
    permutations, transposition and renaming symbols. Shape (K, n, n).

    Rows are encoded as base-m numbers; every row multiset is mapped through
    all column/symbol/transpose actions and the row-sorted code minimised.
    """
    N = row_multiset_count(n, m)
    if N > budget:
        raise BudgetExceeded(f"{N} row multisets for n={n}, m={m} exceed the budget {budget}")
    R = m ** n
    arr = _row_multisets(n, m)
    digits = _row_digits(n, m)
    pw = (m ** np.arange(n - 1, -1, -1)).astype(np.int32)
    cols = [arr[:, r].copy() for r in range(n)]
    tcodes = digits[arr].transpose(0, 2, 1) @ pw
    tcols = [np.ascontiguousarray(tcodes[:, r]) for r in range(n)]
    best = None
    for src in (cols, tcols):
        for pi in permutations(range(n)):
            moved = digits[:, list(pi)]
            for lam in permutations(range(m)):
                table = (np.array(lam, dtype=np.int32)[moved] @ pw).astype(np.int32)
                code = _encode(_sort_network([table[x] for x in src]), R)
                best = code if best is None else np.minimum(best, code, out=best)
    own = _encode(cols, R)
    reps = digits[arr[own == best]]
    reps.setflags(write=False)
    return reps


def mask_row_multisets(n: int, budget: int = 5_000_000) -> np.ndarray:
    """Every 0/1 matrix up to row order, shape (K, n, n) bool."""
    N = row_multiset_count(n, 2)
    if N > budget:
        raise BudgetExceeded(f"{N} row multisets exceed the budget {budget}")
    return _row_digits(n, 2)[_row_multisets(n, 2)].astype(bool)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepConfig:
    conjecture: str
    n: int
    m: int = 2
    mode: str = "random"
    samples: int = 1000
    seed: int = 0
    budget: int = 5_000_000
    workers: int = 1
    s: int = 4
    sizes: tuple[int, ...] | None = None
    chunk: int = 200

    def validate(self) -> None:
        if self.conjecture not in TARGETS:
            raise PreconditionViolation(
                f"unknown sweep target {self.conjecture!r}; choose from {sorted(TARGETS)}")
        if self.mode not in ("exhaustive", "random"):
            raise PreconditionViolation(f"mode must be exhaustive or random, got {self.mode!r}")
        if self.n < 1 or self.m < 1 or self.samples < 0 or self.chunk < 1:
            raise PreconditionViolation("n, m and chunk must be positive, samples non-negative")
        if self.mode == "exhaustive" and TARGETS[self.conjecture].exhaustive is None:
            raise PreconditionViolation(f"{self.conjecture} has no exhaustive family")


@dataclass
class SweepOutcome:
    config: SweepConfig
    tested: int = 0
    skipped: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        cfg = asdict(self.config)
        cfg["sizes"] = list(cfg["sizes"]) if cfg["sizes"] else None
        return {"config": cfg, "tested": self.tested, "skipped": self.skipped,
                "counterexamples": self.counterexamples, "stats": self.stats, "notes": self.notes}


@dataclass(frozen=True)
class Target:
    """A sweep target.

    ``check`` returns (ok, stats, detail); ok is None when the instance does
    not satisfy the statement's hypothesis. ``recheck`` must return True to
    confirm a failure.
    """
    check: Callable
    recheck: Callable
    sample: Callable
    build: Callable
    exhaustive: Callable | None = None
    size: Callable | None = None
    note: str = ""


def _surjective(rng: np.random.Generator, n: int, m: int, sizes=None) -> list[int]:
    if sizes:
        if sum(sizes) != n:
            raise PreconditionViolation(f"sizes {list(sizes)} do not sum to {n}")
        labels = [i for i, z in enumerate(sizes) for _ in range(z)]
        rng.shuffle(labels)
        return labels
    if m > n:
        raise PreconditionViolation(f"cannot use {m} classes on {n} vertices")
    labels = list(range(m)) + rng.integers(0, m, n - m).tolist()
    rng.shuffle(labels)
    return [int(x) for x in labels]


def _canon(labels: Sequence[int]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(c, len(seen)) for c in labels)


# -- interval targets --

def _check_treesconj0(inst, cfg):
    v = check_treesconj0(inst)
    tot = Fraction(v.detail["min_total"])
    return v.holds, {"max_min_total": float(tot),
                     "max_min_individual": float(Fraction(v.detail["min_max_individual"]))}, v.detail


def _check_path_total(inst, cfg):
    members, rep = solve_path_total(inst)
    ok = rep.total_deficit <= Fraction(inst.m, 2)
    return ok, {"max_total": float(rep.total_deficit),
                "max_total_over_m": float(rep.total_deficit / inst.m)}, {"set": set_to_json(members)}


def _py_total(inst, S) -> Fraction:
    sizes = _py_counts(inst.classes, inst.m, range(inst.n))
    c = _py_counts(inst.classes, inst.m, S)
    return sum((max(Fraction(0), Fraction(z, 2) - x) for z, x in zip(sizes, c)), Fraction(0))


def _recheck_path_total(inst, cfg, detail):
    S = [p - 1 for p in detail["set"]]
    return not _py_independent(inst.kind, inst.n, inst.s, S) or _py_total(inst, S) > Fraction(inst.m, 2)


def _check_cycle_exact(inst, cfg):
    try:
        targets = t11_targets(inst.sizes)
    except PreconditionViolation:
        return None, {}, {}
    members = solve_cycle_exact(inst)
    counts = interval_report(inst, members).counts
    return tuple(counts) == targets, {}, {"set": set_to_json(members), "targets": list(targets)}


def _recheck_exact(inst, cfg, detail):
    S = [p - 1 for p in detail["set"]]
    return (not _py_independent(inst.kind, inst.n, inst.s, S)
            or _py_counts(inst.classes, inst.m, S) != list(detail["targets"]))


def _check_cycle_individual(inst, cfg):
    members, rep = solve_cycle_individual(inst)
    worst = max(rep.deficits)
    return worst <= 1, {"max_individual": float(worst)}, {"set": set_to_json(members)}


def _recheck_individual(inst, cfg, detail):
    S = [p - 1 for p in detail["set"]]
    if not _py_independent(inst.kind, inst.n, inst.s, S):
        return True
    sizes = _py_counts(inst.classes, inst.m, range(inst.n))
    c = _py_counts(inst.classes, inst.m, S)
    return any(Fraction(z, 2) - x > 1 for z, x in zip(sizes, c))


def _check_power(inst, cfg):
    members = solve_power_cycle(inst)
    counts = interval_report(inst, members).counts
    targets = power_cycle_targets(inst.sizes, inst.s)
    return tuple(counts) == targets, {}, {"set": set_to_json(members), "targets": list(targets)}


def _check_dhw(inst, cfg):
    if inst.kind is not Kind.CYCLE or inst.n % 3 or any(z != 3 for z in inst.sizes):
        return None, {}, {}
    S1, S2 = solve_dhw(inst)
    ok = (not set(S1) & set(S2)
          and all(inst.is_independent(S) and sorted(inst.classes[p] for p in S) == list(range(inst.m))
                  for S in (S1, S2)))
    return ok, {}, {"sets": [set_to_json(S1), set_to_json(S2)]}


def _recheck_dhw(inst, cfg, detail):
    S1, S2 = ([p - 1 for p in S] for S in detail["sets"])
    good = (not set(S1) & set(S2)
            and all(_py_independent(inst.kind, inst.n, inst.s, S)
                    and sorted(_py_counts(inst.classes, inst.m, S)) == [1] * inst.m for S in (S1, S2)))
    return not good


def _path_build(raw, cfg):
    return VertexPartition(Kind.PATH, tuple(raw))


def _cycle_build(raw, cfg):
    return VertexPartition(Kind.CYCLE, tuple(raw))


def _power_build(raw, cfg):
    return VertexPartition(Kind.POWER_CYCLE, tuple(raw), cfg.s)


def _labels_sample(rng, cfg):
    return tuple(_canon(_surjective(rng, cfg.n, cfg.m, cfg.sizes)))


def _dhw_sample(rng, cfg):
    if cfg.n % 3:
        raise PreconditionViolation("the triple family needs n divisible by 3")
    order = rng.permutation(cfg.n)
    labels = [0] * cfg.n
    for t, p in enumerate(order):
        labels[int(p)] = t // 3
    return _canon(labels)


# -- bipartite targets --

def _random_mask(rng, n):
    kind = rng.integers(0, 4)
    if kind == 0:  # rigid
        K = rng.random(n) < 0.5
        L = rng.random(n) < 0.5
        return np.equal.outer(K, L)
    if kind == 1:  # rigid with one cell flipped
        M = np.equal.outer(rng.random(n) < 0.5, rng.random(n) < 0.5)
        i, j = rng.integers(0, n, 2)
        M[i, j] = ~M[i, j]
        return M
    if kind == 2:  # block sum, possibly complemented, shuffled
        cuts = np.sort(rng.choice(np.arange(1, n), size=min(n - 1, rng.integers(1, n)), replace=False)) \
            if n > 1 else np.array([], dtype=int)
        lab = np.zeros(n, dtype=int)
        for c in cuts:
            lab[c:] += 1
        M = np.equal.outer(lab, lab)
        M = M[rng.permutation(n)][:, rng.permutation(n)]
        return ~M if rng.random() < 0.5 else M
    return rng.random((n, n)) < rng.uniform(0.1, 0.9)


def _mask_sample(rng, cfg):
    return _random_mask(rng, cfg.n).astype(bool)


def _mask_build(raw, cfg):
    return tuple(tuple(bool(x) for x in row) for row in raw)


def _mask_dump(mask):
    n = len(mask)
    return {"n": n, "m": 2, "allow_empty": True,
            "colors": [[1 if x else 2 for x in row] for row in mask]}


def _check_rigidity(mask, cfg):
    cert = check_rigidity(mask)
    n = len(mask)
    if n > 8:
        raise CapExceeded("parity enumeration limited to n <= 8")
    colors = np.where(np.array(mask), 0, 1)
    parities = np.unique(perm_counts(colors, 2)[:, 0] % 2)
    return cert.rigid == (len(parities) == 1), {"n_rigid": int(cert.rigid)}, \
        {"rigid": cert.rigid, "parities": parities.tolist()}


def _recheck_rigidity(mask, cfg, detail):
    n = len(mask)
    par = {sum(mask[i][p[i]] for i in range(n)) % 2 for p in permutations(range(n))}
    rows = {tuple(r) for r in mask}
    rigid = all(r == tuple(mask[0]) or r == tuple(not x for x in mask[0]) for r in rows)
    return rigid != (len(par) == 1)


def _check_exact_count(mask, cfg):
    if check_rigidity(mask).rigid:
        return None, {}, {}
    lo, hi, _, _ = extreme_counts(mask)
    missing = []
    for c in range(lo, hi + 1):
        try:
            exact_count_matching(mask, c)
        except (CountInfeasible, RigidInfeasible):
            missing.append(c)
    return not missing, {"n_gaps": int(bool(missing))}, {"range": [lo, hi], "missing": missing}


def _recheck_exact_count(mask, cfg, detail):
    n = len(mask)
    seen = {sum(mask[i][p[i]] for i in range(n)) for p in permutations(range(n))}
    return any(c not in seen for c in detail["missing"])


def _cm_sample(rng, cfg):
    n, m = cfg.n, cfg.m
    if cfg.sizes:
        if sum(cfg.sizes) != n * n:
            raise PreconditionViolation(f"part sizes must sum to {n * n}")
        cells = np.array([i for i, z in enumerate(cfg.sizes) for _ in range(z)])
        rng.shuffle(cells)
        return cells.reshape(n, n)
    weights = rng.dirichlet(np.ones(m)) if rng.random() < 0.5 else np.full(m, 1 / m)
    return rng.choice(m, size=(n, n), p=weights)


def _cm_build(raw, cfg):
    return ColorMatrix(tuple(tuple(int(x) for x in row) for row in raw), cfg.m, allow_empty=True)


def _check_equirep(A, cfg):
    if 0 in A.sizes:  # an empty part makes "any j" degenerate; not a partition into m parts
        return None, {}, {}
    if A.n > PERM_CAP:
        raise CapExceeded(f"n={A.n} above {PERM_CAP}")
    v = check_equirep00(A)
    return v.holds, {"n_no_fair": int(not v.detail["fair"])}, {"failing_j": v.detail["failing_j"]}


def _recheck_equirep(A, cfg, detail):
    return recount_equirep00(A)


def _stein_sample(rng, cfg):
    n = cfg.n
    cells = np.repeat(np.arange(n), n)
    rng.shuffle(cells)
    return cells.reshape(n, n)


def _stein_build(raw, cfg):
    return ColorMatrix(tuple(tuple(int(x) for x in row) for row in raw), cfg.n)


def _stein_all(cfg):
    n = cfg.n
    cells = [i for i in range(n) for _ in range(n)]
    seen = set()
    for arr in permutations(cells):
        if arr in seen:
            continue
        seen.add(arr)
        yield np.array(arr).reshape(n, n)


def _check_stein(A, cfg):
    v = check_stein(A)
    return v.holds, {"n_no_full": int(not v.detail["full_transversal"]),
                     "min_max_parts": v.detail["max_parts"]}, {"max_parts": v.detail["max_parts"]}


def _recheck_stein(A, cfg, detail):
    return recount_stein(A)


def _three_sample(rng, cfg):
    n = cfg.n
    while True:
        raw = _cm_sample(rng, SweepConfig("three", n, 3, sizes=cfg.sizes))
        if len(np.unique(raw)) == 3:
            return raw


def _three_build(raw, cfg):
    return ColorMatrix(tuple(tuple(int(x) for x in row) for row in raw), 3)


def _check_three(A, cfg):
    run = solve_three_traced(A, keep_disk=True)
    problems = run.disk.problems() if run.disk is not None else []
    counts = A.counts(run.perm)
    ok = all(lo <= c <= hi for c, (lo, hi) in zip(counts, theorem_bounds(A.sizes, A.n))) \
        and not problems and not run.safety_net
    return ok, {"n_safety_net": int(run.safety_net), "n_repaired": int(run.repaired),
                f"n_route_{run.route}": 1}, {"perm": perm_to_json(run.perm), "route": run.route,
                                             "problems": problems[:5]}


def _recheck_three(A, cfg, detail):
    n = A.n
    p = [x - 1 for x in detail["perm"]]
    sizes = [sum(row.count(x) for row in A.colors) for x in range(3)]
    c = [sum(1 for i in range(n) if A.colors[i][p[i]] == x) for x in range(3)]
    bad_bounds = any(not (z // n - 1 <= y <= -(-z // n) + 1) for z, y in zip(sizes, c))
    return bad_bounds or bool(detail["problems"]) or "safety-net" in detail["route"]


# -- edge-set targets --

def _random_matching(rng, n):
    return [(i, int(j)) for i, j in enumerate(rng.permutation(n))]


def _rainbow_sample(rng, cfg):
    n = cfg.n
    D = int(rng.integers(1, 4))
    host = sorted(set(chain.from_iterable(_random_matching(rng, n) for _ in range(D))))
    delta = EdgeSets((), tuple(host)).max_degree()
    t = delta + 2
    m = min(cfg.m, len(host) // t)
    order = rng.permutation(len(host))
    sets = [tuple(sorted(host[int(e)] for e in order[i * t:(i + 1) * t])) for i in range(m)]
    return tuple(sets)


def _rainbow_build(raw, cfg):
    return EdgeSets(tuple(raw))


def _check_rainbow(inst, cfg):
    if inst.m == 0 or not inst.disjoint():
        return None, {}, {}
    v = check_rainbow(inst)
    if not v.detail["hypothesis"]:
        return None, {}, {}
    return v.holds, {}, {}


def _recheck_rainbow(inst, cfg, detail):
    return recount_rainbow(inst)


def _random_host(rng, n, lo=0.3, hi=0.9):
    while True:
        M = rng.random((n, n)) < rng.uniform(lo, hi)
        if M.any():
            return [(int(i), int(j)) for i, j in zip(*np.nonzero(M))]


def _underrep_sample(rng, cfg):
    host = _random_host(rng, cfg.n)
    lab = rng.integers(0, cfg.m, len(host))
    return tuple(tuple(e for e, x in zip(host, lab) if x == i) for i in range(cfg.m)), tuple(host)


def _underrep_build(raw, cfg):
    sets, host = raw
    return EdgeSets(tuple(sets), tuple(host))


def _check_underrep(inst, cfg):
    v = check_underrep(inst)
    return v.holds, {"max_c": float(Fraction(v.detail["c"]))}, {"c": v.detail["c"]}


def _recheck_underrep(inst, cfg, detail):
    return recount_underrep(inst)


def _prefix_sample(rng, cfg):
    host = _random_host(rng, cfg.n)
    return tuple(host), tuple(int(x) for x in rng.integers(0, cfg.m, len(host)))


def _prefix_build(raw, cfg):
    edges, labels = raw
    return LabeledEdges(tuple(edges), tuple(labels), cfg.m)


def _check_prefix(inst, cfg):
    v = check_prefix_fair(inst)
    return v.holds, {}, {"quotas": v.detail["quotas"]}


def _recheck_prefix(inst, cfg, detail):
    return recount_prefix(inst)


def _interval_all(cfg):
    return labelings(cfg.n, cfg.m)


def _interval_count(cfg):
    return stirling2(cfg.n, cfg.m)


def _cycle_all(cfg):
    return necklaces(cfg.n, cfg.m)


def _cycle_count(cfg):
    return _necklace_count(cfg.n, cfg.m)


def _masks_all(cfg):
    return iter(mask_row_multisets(cfg.n, cfg.budget))


def _masks_count(cfg):
    return row_multiset_count(cfg.n, 2)


def _orbits_all(cfg):
    return iter(matrix_orbits(cfg.n, cfg.m, cfg.budget))


def _orbits_count(cfg):
    return row_multiset_count(cfg.n, cfg.m)


def _three_all(cfg):
    return (M for M in matrix_orbits(cfg.n, 3, cfg.budget) if len(np.unique(M)) == 3)


def _three_count(cfg):
    return row_multiset_count(cfg.n, 3)


def _stein_count(cfg):
    n = cfg.n
    return factorial(n * n) // factorial(n) ** n


TARGETS: dict[str, Target] = {
    "treesconj0": Target(_check_treesconj0, lambda i, c, d: recount_treesconj0(i), _labels_sample,
                         _path_build, _interval_all, _interval_count),
    "path-total": Target(_check_path_total, _recheck_path_total, _labels_sample, _path_build,
                         _interval_all, _interval_count),
    "cycle-exact": Target(_check_cycle_exact, _recheck_exact, _labels_sample, _cycle_build,
                          _cycle_all, _cycle_count),
    "cycle-individual": Target(_check_cycle_individual, _recheck_individual, _labels_sample,
                               _cycle_build, _cycle_all, _cycle_count),
    "power-cycle": Target(_check_power, _recheck_exact, _labels_sample, _power_build,
                          _cycle_all, _cycle_count),
    "dhw": Target(_check_dhw, _recheck_dhw, _dhw_sample, _cycle_build,
                  lambda cfg: triple_partitions(cfg.n), lambda cfg: _triple_count(cfg.n)),
    "rigidity": Target(_check_rigidity, _recheck_rigidity, _mask_sample, _mask_build,
                       _masks_all, _masks_count),
    "exact-count": Target(_check_exact_count, _recheck_exact_count, _mask_sample, _mask_build,
                          _masks_all, _masks_count),
    "equirep00": Target(_check_equirep, _recheck_equirep, _cm_sample, _cm_build,
                        _orbits_all, _orbits_count),
    "stein": Target(_check_stein, _recheck_stein, _stein_sample, _stein_build,
                    _stein_all, _stein_count),
    "three": Target(_check_three, _recheck_three, _three_sample, _three_build,
                    _three_all, _three_count),
    "rainbow": Target(_check_rainbow, _recheck_rainbow, _rainbow_sample, _rainbow_build,
                      note=SIMPLE_HOST_NOTE),
    "underrep": Target(_check_underrep, _recheck_underrep, _underrep_sample, _underrep_build),
    "prefix": Target(_check_prefix, _recheck_prefix, _prefix_sample, _prefix_build),
}


def _merge_stats(into: dict, more: dict) -> None:
    for key, val in more.items():
        if key not in into:
            into[key] = val
        elif key.startswith("max_"):
            into[key] = max(into[key], val)
        elif key.startswith("min_"):
            into[key] = min(into[key], val)
        else:
            into[key] += val


def _dump(inst) -> dict:
    if isinstance(inst, tuple):  # bare mask
        return _mask_dump(inst)
    return dump_instance(inst)


def _run_chunk(cfg: SweepConfig, payload) -> tuple[int, int, list[dict], dict]:
    target = TARGETS[cfg.conjecture]
    if payload[0] == "random":
        rng = np.random.default_rng(np.random.SeedSequence(payload[1]))
        raws = (target.sample(rng, cfg) for _ in range(payload[2]))
    else:
        raws = payload[1]
    tested = skipped = 0
    bad: list[dict] = []
    stats: dict = {}
    for raw in raws:
        inst = target.build(raw, cfg)
        ok, st, detail = target.check(inst, cfg)
        if ok is None:
            skipped += 1
            continue
        tested += 1
        _merge_stats(stats, st)
        if not ok:
            if not target.recheck(inst, cfg, detail):
                raise InternalInvariantViolation(
                    f"{cfg.conjecture}: checker failure not confirmed by the recount "
                    f"({json.dumps(_dump(inst))})")
            bad.append({"instance": _dump(inst), "detail": detail, "rechecked": True})
    return tested, skipped, bad, stats


def _payloads(cfg: SweepConfig, target: Target):
    if cfg.mode == "random":
        left, idx = cfg.samples, 0
        while left > 0:
            take = min(cfg.chunk, left)
            yield ("random", [cfg.seed, idx], take)
            left -= take
            idx += 1
        return
    total = target.size(cfg) if target.size else None
    if total is not None and total > cfg.budget:
        raise BudgetExceeded(f"exhaustive {cfg.conjecture} family (up to {total}) exceeds budget {cfg.budget}")
    batch: list = []
    for raw in target.exhaustive(cfg):
        batch.append(raw)
        if len(batch) == cfg.chunk:
            yield ("list", batch)
            batch = []
    if batch:
        yield ("list", batch)


def run_sweep(cfg: SweepConfig) -> SweepOutcome:
    """Run a seeded sweep. The result does not depend on the worker count."""
    cfg.validate()
    target = TARGETS[cfg.conjecture]
    out = SweepOutcome(cfg)
    if target.note:
        out.notes.append(target.note)
    if cfg.mode == "random":
        out.notes.append(f"random mode, seed {cfg.seed}, {cfg.samples} samples")
    payloads = list(_payloads(cfg, target))
    if cfg.workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_chunk, [cfg] * len(payloads), payloads))
    else:
        results = [_run_chunk(cfg, p) for p in payloads]
    for tested, skipped, bad, stats in results:
        out.tested += tested
        out.skipped += skipped
        out.counterexamples.extend(bad)
        _merge_stats(out.stats, stats)
    log.info("sweep %s: %d tested, %d skipped, %d counterexamples",
             cfg.conjecture, out.tested, out.skipped, len(out.counterexamples))
    return out


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

@dataclass
class FixtureResult:
    name: str
    passed: bool
    observed: dict
    expected: dict

    def to_json(self) -> dict:
        return asdict(self)


def fixture_names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


def load_fixture(name: str) -> dict:
    path = FIXTURE_DIR / f"{name}.json"
    if not path.exists():
        raise InvalidInstance(f"no fixture named {name!r}")
    return json.loads(path.read_text())


def _observe_path(data: dict) -> dict:
    inst = instance_from_json(data["instance"])
    members, rep = solve_path_total(inst)
    best, total = oracle_interval(inst)
    v = check_treesconj0(inst)
    return {"solver_total": str(rep.total_deficit), "solver_set": set_to_json(members),
            "oracle_total": str(total), "oracle_set": set_to_json(best),
            "treesconj0": v.holds, "treesconj0_witness": v.witness,
            "min_max_individual": v.detail["min_max_individual"]}


def _observe_rigidity(data: dict) -> dict:
    inst = instance_from_json(data["instance"])
    mask = as_mask(inst.mask(0))
    cert = check_rigidity(mask)
    lo, hi, _, _ = extreme_counts(mask)
    out = {"rigid": cert.rigid, "K": [k + 1 for k in cert.K], "L": [l + 1 for l in cert.L],
           "range": [lo, hi]}
    if cert.rigid:
        out["achievable"] = list(rigid_achievable(len(mask), len(cert.K), len(cert.L)))
    for c in data.get("probe_counts", []):
        try:
            exact_count_matching(mask, c)
            out[f"count_{c}"] = "found"
        except FairRepError as e:
            out[f"count_{c}"] = type(e).__name__
    return out


def _observe_transversal(data: dict) -> dict:
    A = instance_from_json(data["instance"])
    eq = check_equirep00(A)
    out = {"full_transversal": eq.detail["fair"], "equirep00_all_j": eq.holds}
    if A.m == A.n and all(z == A.n for z in A.sizes):
        st = check_stein(A)
        out["partial_n_minus_1"] = st.holds
        out["max_parts"] = st.detail["max_parts"]
    return out


def _observe_rainbow(data: dict) -> dict:
    inst = edges_from_json(data["instance"])
    v = check_rainbow(inst)
    drops = []
    for i in range(inst.m):
        sub = EdgeSets(inst.sets[:i] + inst.sets[i + 1:])
        drops.append(check_rainbow(sub).holds)
    return {"rainbow": v.holds, "max_degree": v.detail["max_degree"],
            "sizes": v.detail["sizes"], "drop_any_one": all(drops)}


OBSERVERS = {"path": _observe_path, "rigidity": _observe_rigidity,
             "transversal": _observe_transversal, "rainbow": _observe_rainbow}


def run_fixture(name: str) -> FixtureResult:
    data = load_fixture(name)
    observed = OBSERVERS[data["check"]](data)
    expected = data["expected"]
    passed = all(observed.get(k) == v for k, v in expected.items())
    return FixtureResult(name, passed, observed, expected)
