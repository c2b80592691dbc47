"""Almost-fair perfect matchings of K_{n,n} for three-part edge partitions.

Pipeline for parts of sizes k_i * n: six lopsided matchings sit at the corners
of a hexagon, corners are joined by property-preserving walks, the hexagon is
filled by repeatedly shifting its boundary until it collapses to the
identity, every vertex is coloured by a part it over-represents, a rainbow
triangle is located and the triangle is resolved into a permutation with
|d_l| <= 1 for every part. Sizes not divisible by n are first rounded to
multiples of n by relabelling a few cells.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .bipartite2 import almost_fair_two
from .core import (
    ColorMatrix,
    FairRepError,
    InternalInvariantViolation,
    Perm,
    PreconditionViolation,
    SearchExhausted,
    FairnessReport,
    bipartite_report,
    check_perm,
    compose,
    hamming_distance,
    identity,
    inverse,
    sim,
)
from .matching import all_perms, balanced_edge_coloring, best_perm, complete_matching

log = logging.getLogger(__name__)

PLUS, PLUSPLUS, MINUS = "plus", "plusplus", "minus"


class EarlyExit(FairRepError):
    """A permutation with d = 0 in every part turned up; it is the answer."""

    def __init__(self, perm: Perm):
        self.perm = perm
        super().__init__(f"permutation {perm} already represents every part exactly")


class BoundaryViolation(FairRepError):
    """Two adjacent boundary matchings break a hexagon colouring condition."""

    def __init__(self, u: Perm, v: Perm, part: int):
        self.u, self.v, self.part = u, v, part
        super().__init__(f"boundary edge {u} - {v} on the arc preserving part {part + 1}")


class NoRainbow(FairRepError):
    pass


# ---------------------------------------------------------------------------
# counts and properties
# ---------------------------------------------------------------------------

def quotas(A: ColorMatrix) -> tuple[int, ...]:
    """k_l = |E_l| / n; every part size must be a multiple of n."""
    if A.m != 3:
        raise PreconditionViolation(f"expected 3 parts, got {A.m}")
    n = A.n
    if any(size % n for size in A.sizes):
        raise PreconditionViolation(f"part sizes {list(A.sizes)} are not multiples of n={n}")
    return tuple(size // n for size in A.sizes)


def deficits(A: ColorMatrix, k: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    counts = [0] * A.m
    for i, j in enumerate(perm):
        counts[A.colors[i][j]] += 1
    return tuple(c - q for c, q in zip(counts, k))


def is_good(d: Sequence[int]) -> bool:
    return all(-1 <= x <= 1 for x in d)


@dataclass(frozen=True)
class PropertyTag:
    """plus: count >= k; plusplus: count > k; minus: count <= k (for one part)."""

    part: int
    sense: str

    def __post_init__(self):
        if self.sense not in (PLUS, PLUSPLUS, MINUS):
            raise ValueError(f"unknown sense {self.sense!r}")

    def holds(self, d: Sequence[int]) -> bool:
        x = d[self.part]
        if self.sense == PLUS:
            return x >= 0
        if self.sense == PLUSPLUS:
            return x > 0
        return x <= 0

    def __str__(self):
        mark = {PLUS: "+", PLUSPLUS: "++", MINUS: "-"}[self.sense]
        return f"{self.part + 1}({mark})"


# ---------------------------------------------------------------------------
# shift and the ~ relation
# ---------------------------------------------------------------------------

def shift(i: int, sigma: Sequence[int]) -> Perm:
    """Reroute sigma so that i is fixed: the preimage of i takes sigma(i)."""
    sigma = tuple(sigma)
    j = sigma[i]
    if j == i:
        return sigma
    out = list(sigma)
    out[sigma.index(i)] = j
    out[i] = i
    return tuple(out)


def shift_all(sigma: Sequence[int]) -> Perm:
    """shift_{n-1} o ... o shift_0; always the identity."""
    out = tuple(sigma)
    for i in range(len(out)):
        out = shift(i, out)
    return out


# ---------------------------------------------------------------------------
# lopsided matchings
# ---------------------------------------------------------------------------

def lopsided_coloring(A: ColorMatrix, cap: int) -> tuple[list[tuple[int, int]], list[int]]:
    """Edges outside part ``cap`` and a balanced proper colouring of them with n colours."""
    edges = [(i, j) for i in range(A.n) for j in range(A.n) if A.colors[i][j] != cap]
    return edges, balanced_edge_coloring(edges, A.n, A.n)


def lopsided_matching(A: ColorMatrix, boost: int, cap: int) -> Perm:
    """At least ceil(|E_boost|/n) boost cells and at most ceil(|E_cap|/n) cap cells.

    Colour classes of the cells outside ``cap`` are matchings of size
    floor or ceil of their number over n; the one richest in ``boost`` cells
    (lowest colour on ties) is completed arbitrarily.
    """
    if boost == cap:
        raise PreconditionViolation("boost and cap must be different parts")
    edges, color = lopsided_coloring(A, cap)
    n = A.n
    score = [0] * n
    for (i, j), c in zip(edges, color):
        if A.colors[i][j] == boost:
            score[c] += 1
    best = max(range(n), key=lambda c: (score[c], -c))
    match = [-1] * n
    for (i, j), c in zip(edges, color):
        if c == best:
            match[i] = j
    return complete_matching(match)


# ---------------------------------------------------------------------------
# property-preserving walks
# ---------------------------------------------------------------------------

def _indicator(A: ColorMatrix, k: Sequence[int], tag: PropertyTag):
    n = A.n
    p = tag.part
    if tag.sense == MINUS:
        return [[A.colors[i][j] != p for j in range(n)] for i in range(n)], n - k[p]
    W = [[A.colors[i][j] == p for j in range(n)] for i in range(n)]
    return W, k[p] + (1 if tag.sense == PLUSPLUS else 0)


def _wcount(W, perm) -> int:
    return sum(1 for i, j in enumerate(perm) if W[i][j])


def _descend(W, thr: int, start: Perm, target: Perm) -> list[Perm]:
    """Greedy shift descent from ``start`` to ``target`` keeping the W-count >= thr.

    Works in the frame where the target is the identity: a'(i, j) =
    W[i][target(j)] and sigma~ = target^-1 o sigma.
    """
    n = len(start)
    tinv = inverse(target)
    a = [[W[i][target[j]] for j in range(n)] for i in range(n)]
    cur = compose(tinv, start)
    out = [start]
    while cur != identity(n):
        ell = sum(1 for i in range(n) if a[i][cur[i]])
        moved = [j for j in range(n) if cur[j] != j]
        if ell >= thr + 2:
            pick = moved[0]
        elif ell == thr + 1:
            pick = next((j for j in moved if a[j][j] >= a[j][cur[j]]), None)
        else:
            pick = next((j for j in moved if a[j][j] > a[j][cur[j]]), None)
        if pick is None:
            raise InternalInvariantViolation("no admissible shift in the descent")
        cur = shift(pick, cur)
        real = compose(target, cur)
        if _wcount(W, real) < thr:
            raise InternalInvariantViolation("descent step lost the property")
        out.append(real)
    return out


def boundary_walk(A: ColorMatrix, start: Sequence[int], end: Sequence[int], preserve: PropertyTag,
                  k: Sequence[int] | None = None) -> list[Perm]:
    """Permutations from ``start`` to ``end``, consecutive ones ~, all with ``preserve``.

    When ``end`` (or ``start``) exceeds the threshold the walk is a single
    greedy descent toward it; otherwise both ends descend to a permutation
    that exceeds it. If no permutation exceeds the threshold every
    permutation has the property and plain transpositions suffice.
    """
    k = quotas(A) if k is None else tuple(k)
    start, end = check_perm(start, A.n), check_perm(end, A.n)
    W, thr = _indicator(A, k, preserve)
    total = sum(sum(row) for row in W)
    if total < thr * A.n:
        raise PreconditionViolation(f"property {preserve} is not connected (too few cells)")
    for p in (start, end):
        if _wcount(W, p) < thr:
            raise PreconditionViolation(f"endpoint {p} lacks property {preserve}")
    if start == end:
        return [start]
    if _wcount(W, end) > thr:
        return _descend(W, thr, start, end)
    if _wcount(W, start) > thr:
        return _descend(W, thr, end, start)[::-1]
    top, rho = best_perm(W)
    if top > thr:
        there = _descend(W, thr, start, rho)
        back = _descend(W, thr, end, rho)[::-1]
        return there + back[1:]
    # every permutation has exactly thr cells: all of S_n qualifies
    out = [start]
    cur = list(start)
    while tuple(cur) != end:
        i = next(p for p in range(A.n) if cur[p] != end[p])
        j = cur.index(end[i])
        cur[i], cur[j] = cur[j], cur[i]
        out.append(tuple(cur))
    return out


# ---------------------------------------------------------------------------
# filling squares
# ---------------------------------------------------------------------------

# local vertex indices: 0 sigma, 1 tau, 2 shift(tau), 3 shift(sigma), 4.. auxiliary
_DIAG_A = [(0, 1, 3), (1, 2, 3)]
_DIAG_B = [(0, 1, 2), (0, 2, 3)]
_LADDER = [(0, 1, 4), (0, 4, 3), (4, 1, 5), (4, 5, 3), (1, 2, 5), (5, 2, 3)]


def _ladder(s: Perm, t: Perm, tp: Perm, sp: Perm) -> tuple[Perm, Perm]:
    """x ~ s, t, sp and y ~ t, tp, sp with x ~ y, supported where the corners differ."""
    n = len(s)
    U = [p for p in range(n) if len({s[p], t[p], tp[p], sp[p]}) > 1]
    values = sorted(s[p] for p in U)
    cands = []
    for vals in permutations(values):
        q = list(s)
        for p, v in zip(U, vals):
            q[p] = v
        cands.append(tuple(q))
    xs = [x for x in cands if sim(x, s) and sim(x, t) and sim(x, sp)]
    ys = [y for y in cands if sim(y, t) and sim(y, tp) and sim(y, sp)]
    for x in xs:
        for y in ys:
            if sim(x, y):
                return x, y
    raise InternalInvariantViolation(f"no ladder filling for {s}, {t} and their shifts")


def fill_square(sigma: Sequence[int], tau: Sequence[int], i: int
                ) -> tuple[list[Perm], list[tuple[int, int, int]]]:
    """Triangulate sigma - tau - shift_i(tau) - shift_i(sigma).

    Returns auxiliary permutations and triangles over local indices
    [sigma, tau, shift(tau), shift(sigma), *aux]. A diagonal suffices when
    shift(sigma) ~ tau or sigma ~ shift(tau); at distance 2 two auxiliary
    vertices form a ladder; at distance 3 the midpoint rho (sigma with its
    first disagreement with tau repaired) splits the square into a triangle,
    its shifted copy and two distance-2 squares.
    """
    s, t = tuple(sigma), tuple(tau)
    if not sim(s, t):
        raise PreconditionViolation(f"{s} and {t} are not ~-related")
    sp, tp = shift(i, s), shift(i, t)
    if sim(sp, t):
        return [], list(_DIAG_A)
    if sim(s, tp):
        return [], list(_DIAG_B)
    dist = hamming_distance(s, t)
    if dist == 2:
        x, y = _ladder(s, t, tp, sp)
        return [x, y], list(_LADDER)
    a = next(p for p in range(len(s)) if s[p] != t[p])
    b = s.index(t[a])
    r = list(s)
    r[a], r[b] = r[b], r[a]
    rho = tuple(r)
    rp = shift(i, rho)
    aux: list[Perm] = [rho, rp]
    tris = [(0, 4, 1), (3, 2, 5)]
    for corners in ((0, 4, 5, 3), (4, 1, 2, 5)):
        sub_aux, sub_tris = fill_square(_pick(corners, s, t, tp, sp, aux, 0),
                                        _pick(corners, s, t, tp, sp, aux, 1), i)
        local = list(corners)
        for perm in sub_aux:
            aux.append(perm)
            local.append(3 + len(aux))
        tris.extend(tuple(local[v] for v in tri) for tri in sub_tris)
    return aux, tris


def _pick(corners, s, t, tp, sp, aux, which):
    pool = [s, t, tp, sp] + aux
    return pool[corners[which]]


# ---------------------------------------------------------------------------
# the disk
# ---------------------------------------------------------------------------

# corners (boost, cap) in cyclic order, and the property kept along the arc
# leaving each corner
CORNERS = ((2, 0), (1, 0), (1, 2), (0, 2), (0, 1), (2, 1))
ARC_TAGS = (PropertyTag(0, MINUS), PropertyTag(1, PLUS), PropertyTag(2, MINUS),
            PropertyTag(0, PLUS), PropertyTag(1, MINUS), PropertyTag(2, PLUS))


def arc_forbids(tag: PropertyTag) -> tuple[str, frozenset[int]]:
    """The colouring condition on an arc.

    A minus arc of part p may not contain colour p; a plus arc of part p may
    not contain an edge coloured by the two other parts.
    """
    if tag.sense == MINUS:
        return "vertex", frozenset({tag.part})
    return "edge", frozenset({0, 1, 2} - {tag.part})


def color_of(d: Sequence[int]) -> int | None:
    """Smallest part with d > 0, or None when d is identically 0."""
    return next((l for l, x in enumerate(d) if x > 0), None)


@dataclass
class SimplicialDisk:
    perms: list[Perm]
    colors: list[int | None]
    triangles: list[tuple[int, int, int]]
    arcs: list[list[int]]
    tags: tuple[PropertyTag, ...] = ARC_TAGS

    def boundary_cycle(self) -> list[int]:
        out = []
        for arc in self.arcs:
            out.extend(arc[:-1])
        return out

    def problems(self) -> list[str]:
        """Violated invariants (empty when the disk is valid)."""
        out = []
        for tri in self.triangles:
            for u, v in combinations(tri, 2):
                if not sim(self.perms[u], self.perms[v]):
                    out.append(f"triangle {tri}: vertices {u}, {v} not ~")
        for t, arc in enumerate(self.arcs):
            if len(arc) < 2:
                out.append(f"arc {t} has fewer than 2 vertices")
            if arc[-1] != self.arcs[(t + 1) % len(self.arcs)][0]:
                out.append(f"arc {t} does not end where arc {t + 1} starts")
            for u, v in zip(arc, arc[1:]):
                if not sim(self.perms[u], self.perms[v]):
                    out.append(f"boundary edge {u}-{v} not ~")
            kind, bad = arc_forbids(self.tags[t])
            if kind == "vertex":
                out.extend(f"arc {t}: vertex {u} has forbidden colour"
                           for u in arc if self.colors[u] in bad)
            else:
                out.extend(f"arc {t}: edge {u}-{v} has forbidden colours"
                           for u, v in zip(arc, arc[1:]) if {self.colors[u], self.colors[v]} == bad)
        out.extend(self._topology_problems())
        return out

    def _topology_problems(self) -> list[str]:
        uses: dict[frozenset, int] = {}
        for tri in self.triangles:
            if len(set(tri)) != 3:
                return [f"triangle {tri} repeats a vertex"]
            for u, v in combinations(tri, 2):
                key = frozenset((u, v))
                uses[key] = uses.get(key, 0) + 1
        ring = self.boundary_cycle()
        outer = {frozenset((u, v)) for u, v in zip(ring, ring[1:] + ring[:1])}
        out = []
        for e, c in uses.items():
            want = 1 if e in outer else 2
            if c != want:
                out.append(f"edge {sorted(e)} lies in {c} triangles, expected {want}")
        missing = outer - set(uses)
        if missing:
            out.append(f"{len(missing)} boundary edges in no triangle")
        used = {v for tri in self.triangles for v in tri}
        euler = len(used) - len(uses) + len(self.triangles)
        if euler != 1:
            out.append(f"Euler characteristic {euler}, expected 1")
        return out

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "perm": [x + 1 for x in p],
                          "color": None if c is None else c + 1}
                         for v, (p, c) in enumerate(zip(self.perms, self.colors))],
            "triangles": [list(t) for t in self.triangles],
            "arcs": [{"property": str(tag), "path": arc} for tag, arc in zip(self.tags, self.arcs)],
        }


def hexagon_boundary(A: ColorMatrix, k: Sequence[int]) -> tuple[list[Perm], list[list[int]]]:
    """Boundary permutations and the six arcs as index paths into them."""
    corners = [lopsided_matching(A, b, c) for b, c in CORNERS]
    perms: list[Perm] = []
    arcs: list[list[int]] = []
    first = None
    for t, tag in enumerate(ARC_TAGS):
        walk = boundary_walk(A, corners[t], corners[(t + 1) % 6], tag, k)
        if len(walk) == 1:
            walk = walk * 2
        ids = []
        for pos, perm in enumerate(walk):
            if pos == 0 and arcs:
                ids.append(arcs[-1][-1])
                continue
            if t == 5 and pos == len(walk) - 1:
                ids.append(first)
                continue
            perms.append(perm)
            ids.append(len(perms) - 1)
        if first is None:
            first = ids[0]
        arcs.append(ids)
    return perms, arcs


def build_disk(A: ColorMatrix, k: Sequence[int] | None = None) -> SimplicialDisk:
    """Hexagon boundary filled by n shifted copies of itself and a hub.

    Raises EarlyExit when a permutation with d = 0 appears and
    BoundaryViolation when two adjacent boundary vertices break an arc
    condition.
    """
    k = quotas(A) if k is None else tuple(k)
    if min(k) < 1 or max(k) > A.n - 2:
        raise PreconditionViolation(f"quotas {k} outside 1..n-2")
    perms, arcs = hexagon_boundary(A, k)
    colors: list[int | None] = []
    for p in perms:
        c = color_of(deficits(A, k, p))
        if c is None:
            raise EarlyExit(p)
        colors.append(c)
    for t, arc in enumerate(arcs):
        kind, bad = arc_forbids(ARC_TAGS[t])
        if kind == "vertex":
            if any(colors[u] in bad for u in arc):
                raise InternalInvariantViolation(f"arc {t} carries a forbidden colour")
            continue
        for u, v in zip(arc, arc[1:]):
            if {colors[u], colors[v]} == bad:
                raise BoundaryViolation(perms[u], perms[v], ARC_TAGS[t].part)

    disk = SimplicialDisk(perms, colors, [], arcs)
    ring = disk.boundary_cycle()
    N = len(ring)
    n = A.n
    for r in range(n):
        nxt = []
        for v in ring:
            disk.perms.append(shift(r, disk.perms[v]))
            nxt.append(len(disk.perms) - 1)
        for q in range(N):
            a, b = ring[q], ring[(q + 1) % N]
            aux, tris = fill_square(disk.perms[a], disk.perms[b], r)
            local = [a, b, nxt[(q + 1) % N], nxt[q]]
            for perm in aux:
                disk.perms.append(perm)
                local.append(len(disk.perms) - 1)
            disk.triangles.extend(tuple(local[x] for x in tri) for tri in tris)
        ring = nxt
    disk.perms.append(identity(n))
    hub = len(disk.perms) - 1
    for q in range(N):
        disk.triangles.append((ring[q], ring[(q + 1) % N], hub))
    for p in disk.perms[len(colors):]:
        c = color_of(deficits(A, k, p))
        if c is None:
            raise EarlyExit(p)
        disk.colors.append(c)
    return disk


def find_rainbow(disk: SimplicialDisk) -> tuple[Perm, Perm, Perm]:
    """Permutations of a triangle coloured 1, 2, 3, ordered by colour."""
    for tri in disk.triangles:
        cols = [disk.colors[v] for v in tri]
        if sorted(c for c in cols if c is not None) == [0, 1, 2]:
            by = {c: disk.perms[v] for c, v in zip(cols, tri)}
            return by[0], by[1], by[2]
    raise NoRainbow("no triangle carries all three colours")


# ---------------------------------------------------------------------------
# resolving a rainbow triangle
# ---------------------------------------------------------------------------

@dataclass
class ResolveStats:
    routes: dict[str, int] = field(default_factory=dict)

    def add(self, route: str) -> None:
        self.routes[route] = self.routes.get(route, 0) + 1

    @property
    def safety_net(self) -> int:
        return self.routes.get("safety-net", 0)


def _first_good(A, k, perms: Iterable[Perm]) -> Perm | None:
    for p in perms:
        if is_good(deficits(A, k, p)):
            return p
    return None


def _transpositions_on(base: Perm, support: Sequence[int]) -> list[Perm]:
    out = []
    for a, b in combinations(sorted(support), 2):
        q = list(base)
        q[a], q[b] = q[b], q[a]
        out.append(tuple(q))
    return out


def resolve_triangle_traced(A: ColorMatrix, k: Sequence[int], s1, s2, s3) -> tuple[Perm, str]:
    """Permutation with |d_l| <= 1 from a pairwise ~ triple with d_l(s_l) > 0.

    Follows the 3 x 3 matrix B = (d_i(s_j)) case analysis and returns the
    route taken alongside the answer.
    """
    k = tuple(k)
    sig = [check_perm(s, A.n) for s in (s1, s2, s3)]
    for a, b in combinations(sig, 2):
        if not sim(a, b):
            raise PreconditionViolation("triangle vertices are not pairwise ~")
    D = [deficits(A, k, s) for s in sig]
    if any(D[l][l] <= 0 for l in range(3)):
        raise PreconditionViolation(f"need d_l(sigma_l) > 0, got {[D[l][l] for l in range(3)]}")

    hit = _first_good(A, k, sig)
    if hit is not None:
        return hit, "direct"

    if all(D[l][l] >= 2 for l in range(3)):
        # B = 2 on the diagonal, -1 elsewhere; pairwise distance 3
        support = [p for p in range(A.n) if sig[0][p] != sig[1][p]]
        hit = _first_good(A, k, _transpositions_on(sig[0], support))
        if hit is not None:
            return hit, "all-two"
        return _safety_net(A, k, sig[0]), "safety-net"

    X = next(l for l in range(3) if D[l][l] == 1)
    alpha = sig[X]
    dA = D[X]
    Y = next(l for l in range(3) if l != X and dA[l] == -2)
    Z = 3 - X - Y
    beta = sig[Y]
    dB = D[Y]
    if dB[Y] != 1:
        raise InternalInvariantViolation(f"expected d_Y(beta) = 1, got {dB}")
    if dB[X] != -2:
        X, Z = Z, X
    if dB[X] != -2 or dB[Z] != 1 or dA[X] != 1 or dA[Z] != 1:
        raise InternalInvariantViolation(f"unexpected deficit pattern {dA}, {dB}")

    # frame: alpha becomes the identity; a'(i, j) = A[i][alpha[j]], actual = alpha o pi
    n = A.n
    a = [[A.colors[i][alpha[j]] for j in range(n)] for i in range(n)]
    bt = compose(inverse(alpha), beta)
    S = [p for p in range(n) if bt[p] != p]
    if len(S) != 3:
        raise InternalInvariantViolation(f"alpha and beta differ in {len(S)} positions")

    def real(pi: Sequence[int]) -> Perm:
        return compose(alpha, tuple(pi))

    hit = _first_good(A, k, (real(p) for p in _transpositions_on(identity(n), S)))
    if hit is not None:
        return hit, "transposition"

    bt_inv = inverse(bt)
    R = [i for i in range(n) if i not in S and a[i][i] == Z]
    O = [i for i in range(n) if i not in S and a[i][i] != Z]

    def three_cycle(p, q, i):
        pi = list(range(n))
        pi[p], pi[q], pi[i] = q, i, p
        return tuple(pi)

    def swaps(*pairs):
        pi = list(range(n))
        for x, y in pairs:
            pi[x], pi[y] = pi[y], pi[x]
        return tuple(pi)

    p0, q0 = S[0], S[1]
    for i in R:
        for j in S:
            cands = []
            if a[j][i] != Z:
                cands.append(three_cycle(bt_inv[j], j, i))
            if a[i][j] != Z:
                cands.append(three_cycle(j, bt[j], i))
            hit = _first_good(A, k, (real(c) for c in cands))
            if hit is not None:
                return hit, "bullet-1"
    for i, j in combinations(R, 2):
        if a[i][j] != Z or a[j][i] != Z:
            hit = _first_good(A, k, [real(swaps((p0, q0), (i, j)))])
            if hit is not None:
                return hit, "bullet-2"
    for i in R:
        for j in O:
            if a[i][j] != Z and a[j][i] != Z:
                ij = swaps((i, j))
                cands = [ij, swaps((p0, q0), (i, j)), compose(bt, ij)]
                hit = _first_good(A, k, (real(c) for c in cands))
                if hit is not None:
                    return hit, "bullet-3"
    return _safety_net(A, k, alpha), "safety-net"


def resolve_triangle(A: ColorMatrix, k: Sequence[int], s1, s2, s3) -> Perm:
    return resolve_triangle_traced(A, k, s1, s2, s3)[0]


def near_perms(base: Perm, radius: int):
    """Permutations differing from ``base`` in 2..radius positions."""
    n = len(base)
    for size in range(2, min(radius, n) + 1):
        for pos in combinations(range(n), size):
            vals = [base[p] for p in pos]
            for img in permutations(vals):
                if all(x != y for x, y in zip(img, vals)):
                    q = list(base)
                    for p, v in zip(pos, img):
                        q[p] = v
                    yield tuple(q)


def _safety_net(A, k, base: Perm) -> Perm:
    log.warning("triangle case analysis fell through; searching near %s", base)
    hit = _first_good(A, k, near_perms(base, 5))
    if hit is None:
        raise SearchExhausted(f"no balanced permutation within distance 5 of {base}")
    return hit


def resolve_boundary(A: ColorMatrix, k: Sequence[int], bv: BoundaryViolation) -> tuple[Perm, str]:
    """Answer from a boundary edge whose colours are the two parts other than p.

    Either endpoint may already be balanced. Otherwise an endpoint with
    d_p > 0 completes a rainbow triple; if neither has one, both have
    d_p = 0 and one endpoint is balanced (the step between them moves each
    count by at most 3).
    """
    ends = [bv.u, bv.v]
    hit = _first_good(A, k, ends)
    if hit is not None:
        return hit, "boundary-direct"
    trio: list[Perm | None] = [None, None, None]
    for e in ends:
        trio[color_of(deficits(A, k, e))] = e
    p = bv.part
    trio[p] = next((e for e in ends if deficits(A, k, e)[p] > 0), None)
    if any(t is None for t in trio):
        raise InternalInvariantViolation("boundary violation without a usable triple")
    perm, route = resolve_triangle_traced(A, k, *trio)
    return perm, "boundary-" + route


# ---------------------------------------------------------------------------
# reduction to multiples of n and the solver
# ---------------------------------------------------------------------------

def theorem_bounds(sizes: Sequence[int], n: int) -> list[tuple[int, int]]:
    """(floor(|E_i|/n) - 1, ceil(|E_i|/n) + 1) for each part."""
    return [(s // n - 1, -(-s // n) + 1) for s in sizes]


def within_bounds(A: ColorMatrix, perm: Sequence[int]) -> bool:
    counts = A.counts(tuple(perm))
    return all(lo <= c <= hi for c, (lo, hi) in zip(counts, theorem_bounds(A.sizes, A.n)))


@dataclass
class Reduction:
    matrix: ColorMatrix
    k: tuple[int, ...]
    moved: tuple[tuple[int, int, int, int], ...]  # (row, col, from part, to part)
    strategy: str


def _relabel(A: ColorMatrix, cells: Sequence[tuple[int, int]], ups: Sequence[int], need: dict) -> tuple:
    rows = [list(r) for r in A.colors]
    moved = []
    queue = [u for u in ups for _ in range(need[u])]
    for (i, j), to in zip(cells, queue):
        moved.append((i, j, rows[i][j], to))
        rows[i][j] = to
    return rows, tuple(moved)


def reductions(A: ColorMatrix) -> list[Reduction]:
    """Ways to relabel cells so every part size becomes a multiple of n.

    Parts with the largest remainders round up, the rest round down; down
    part j gives away r_j cells and up part i receives n - r_i. Preferred
    choices put all moved cells in one row or one column, so any matching
    uses at most one of them and the bounds transfer to the original sizes.
    Further choices concentrate the moved cells row- or column-wise.
    """
    n = A.n
    sizes = A.sizes
    r = [s % n for s in sizes]
    if not any(r):
        return [Reduction(A, tuple(s // n for s in sizes), (), "exact")]
    u = sum(r) // n
    order = sorted(range(3), key=lambda i: (-r[i], i))
    up_sets = [tuple(sorted(order[:u]))]
    for cand in combinations(range(3), u):
        cand = tuple(sorted(cand))
        if cand not in up_sets and all(r[i] > 0 for i in cand):
            up_sets.append(cand)
    out = []
    seen = set()

    def add(cells, ups, strategy):
        downs = [j for j in range(3) if j not in ups]
        need = {i: n - r[i] for i in ups}
        rows, moved = _relabel(A, cells, ups, need)
        key = moved
        if key in seen:
            return
        seen.add(key)
        k = tuple((sizes[i] + (need[i] if i in ups else -r[i])) // n for i in range(3))
        M = ColorMatrix(tuple(map(tuple, rows)), 3, allow_empty=True)
        if tuple(s // n for s in M.sizes) != k or any(s % n for s in M.sizes):
            raise InternalInvariantViolation("reduction produced sizes off the multiples of n")
        out.append(Reduction(M, k, moved, strategy))

    lines = [("row", i, [(i, j) for j in range(n)]) for i in range(n)]
    lines += [("col", j, [(i, j) for i in range(n)]) for j in range(n)]
    for ups in up_sets:
        downs = [j for j in range(3) if j not in ups]
        for kind, idx, cells in lines:
            picked = []
            for j in downs:
                mine = [c for c in cells if A.colors[c[0]][c[1]] == j]
                if len(mine) < r[j]:
                    break
                picked += mine[: r[j]]
            else:
                add(picked, ups, f"{kind}-{idx}")
        for kind in ("rows", "cols"):
            picked = []
            for j in downs:
                cells = [(i, c) for i in range(n) for c in range(n) if A.colors[i][c] == j]
                key = (lambda c: c[0]) if kind == "rows" else (lambda c: c[1])
                weight = {}
                for c in cells:
                    weight[key(c)] = weight.get(key(c), 0) + 1
                cells.sort(key=lambda c: (-weight[key(c)], key(c), c))
                picked += cells[: r[j]]
            add(picked, ups, f"dense-{kind}")
    return out


@dataclass
class ThreeRun:
    perm: Perm
    report: FairnessReport
    route: str
    strategy: str = "exact"
    attempts: int = 1
    disk: SimplicialDisk | None = None
    repaired: bool = False

    @property
    def safety_net(self) -> bool:
        return "safety-net" in self.route


def _solve_multiple(M: ColorMatrix, k: tuple[int, ...], keep_disk: bool):
    n = M.n
    nonzero = [l for l in range(3) if k[l] > 0]
    if len(nonzero) == 1:
        return identity(n), "single-part", None
    if len(nonzero) == 2:
        a = nonzero[0]
        perm = almost_fair_two(M.mask(a))
        return perm, "two-part", None
    disk = None
    try:
        disk = build_disk(M, k)
        trio = find_rainbow(disk)
        perm, route = resolve_triangle_traced(M, k, *trio)
    except EarlyExit as e:
        perm, route = e.perm, "early-exit"
    except BoundaryViolation as bv:
        perm, route = resolve_boundary(M, k, bv)
    return perm, route, (disk if keep_disk else None)


def solve_three_traced(A: ColorMatrix, keep_disk: bool = False) -> ThreeRun:
    if A.m != 3:
        raise PreconditionViolation(f"expected 3 parts, got {A.m}")
    n = A.n
    if n <= 2:
        perm = next(tuple(int(x) for x in p) for p in all_perms(n) if within_bounds(A, p))
        return ThreeRun(perm, bipartite_report(A, perm), "tiny", "none")
    attempts = 0
    last = None
    for red in reductions(A):
        attempts += 1
        perm, route, disk = _solve_multiple(red.matrix, red.k, keep_disk)
        if not is_good(deficits(red.matrix, red.k, perm)):
            raise InternalInvariantViolation(f"pipeline returned unbalanced {perm} ({route})")
        if within_bounds(A, perm):
            return ThreeRun(perm, bipartite_report(A, perm), route, red.strategy, attempts, disk)
        last = perm
    log.warning("no reduction transferred the bounds; repairing near %s", last)
    hit = next((p for p in near_perms(last, 4) if within_bounds(A, p)), None)
    if hit is None:
        hit = next((tuple(int(x) for x in p) for p in all_perms(n) if within_bounds(A, p)), None) \
            if n <= 8 else None
    if hit is None:
        raise SearchExhausted("no permutation within the three-part bounds found")
    return ThreeRun(hit, bipartite_report(A, hit), "repair", "repair", attempts, None, True)


def solve_three(A: ColorMatrix) -> tuple[Perm, FairnessReport]:
    """Perfect matching with floor(|E_i|/n) - 1 <= |F & E_i| <= ceil(|E_i|/n) + 1."""
    run = solve_three_traced(A)
    return run.perm, run.report
