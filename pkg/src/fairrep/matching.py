"""Bipartite matching primitives on K_{n,n}: augmenting paths, permutation
enumeration and balanced proper edge colouring."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Sequence

import numpy as np

from .core import InternalInvariantViolation, Perm

ENUMERATION_CAP = 8


def max_matching(allowed: Sequence[Sequence[bool]]) -> list[int]:
    """Maximum matching in the bipartite graph whose edges are the true cells.

    Returns ``match[row] = column`` or -1. Kuhn's augmenting paths, rows and
    columns scanned in increasing order, so the result is deterministic.
    """
    n = len(allowed)
    col_owner = [-1] * n
    adj = [[j for j, ok in enumerate(row) if ok] for row in allowed]

    def augment(i: int, seen: list[bool]) -> bool:
        for j in adj[i]:
            if seen[j]:
                continue
            seen[j] = True
            if col_owner[j] == -1 or augment(col_owner[j], seen):
                col_owner[j] = i
                return True
        return False

    for i in range(n):
        augment(i, [False] * n)
    match = [-1] * n
    for j, i in enumerate(col_owner):
        if i != -1:
            match[i] = j
    return match


def complete_matching(match: Sequence[int]) -> Perm:
    """Extend a partial row->column matching to a permutation.

    Free rows take free columns in increasing order.
    """
    n = len(match)
    used = {j for j in match if j != -1}
    free = iter(j for j in range(n) if j not in used)
    return tuple(j if j != -1 else next(free) for j in match)


def best_perm(allowed: Sequence[Sequence[bool]]) -> tuple[int, Perm]:
    """A permutation using the most ``allowed`` cells, and that number."""
    match = max_matching(allowed)
    size = sum(1 for j in match if j != -1)
    return size, complete_matching(match)


@lru_cache(maxsize=None)
def all_perms(n: int) -> np.ndarray:
    """All permutations of range(n) in lexicographic order, shape (n!, n)."""
    if n > ENUMERATION_CAP + 2:
        raise ValueError(f"refusing to enumerate {n}! permutations")
    arr = np.array(list(permutations(range(n))), dtype=np.int8).reshape(-1, n)
    arr.setflags(write=False)
    return arr


def perm_counts(colors: np.ndarray, m: int) -> np.ndarray:
    """Per-part counts of every permutation.

    ``colors`` is an (n, n) label array or a (B, n, n) batch; the result has
    shape (n!, m) or (B, n!, m).
    """
    colors = np.asarray(colors)
    n = colors.shape[-1]
    perms = all_perms(n).astype(np.intp)
    rows = np.arange(n)
    cells = colors[..., rows, perms]  # (..., n!, n)
    return np.stack([(cells == part).sum(axis=-1) for part in range(m)], axis=-1)


# ---------------------------------------------------------------------------
# edge colouring
# ---------------------------------------------------------------------------

def proper_edge_coloring(edges: Sequence[tuple[int, int]], n: int, ncolors: int) -> list[int]:
    """Properly colour the edges of a bipartite graph on n + n vertices.

    Needs ``ncolors`` at least the maximum degree. Each edge gets a colour free
    at both ends; when the two ends have no common free colour, an
    alternating path is flipped first (Konig's argument).
    """
    at_row = [[-1] * ncolors for _ in range(n)]  # colour -> edge index
    at_col = [[-1] * ncolors for _ in range(n)]
    color = [-1] * len(edges)

    for e, (u, v) in enumerate(edges):
        a = next((c for c in range(ncolors) if at_row[u][c] == -1), None)
        b = next((c for c in range(ncolors) if at_col[v][c] == -1), None)
        if a is None or b is None:
            raise ValueError("maximum degree exceeds the number of colours")
        if at_col[v][a] != -1:
            # walk the a/b path from v and swap its colours; it cannot reach u
            path = []
            side, x, want = "col", v, a
            while True:
                table = at_col if side == "col" else at_row
                f = table[x][want]
                if f == -1:
                    break
                path.append(f)
                fu, fv = edges[f]
                side, x = ("row", fu) if side == "col" else ("col", fv)
                want = b if want == a else a
            for f in path:
                fu, fv = edges[f]
                at_row[fu][color[f]] = -1
                at_col[fv][color[f]] = -1
            for f in path:
                fu, fv = edges[f]
                color[f] = b if color[f] == a else a
                at_row[fu][color[f]] = f
                at_col[fv][color[f]] = f
            if at_row[u][a] != -1 or at_col[v][a] != -1:
                raise InternalInvariantViolation("alternating path swap left colour busy")
        color[e] = a
        at_row[u][a] = e
        at_col[v][a] = e
    return color


def balance_coloring(edges: Sequence[tuple[int, int]], color: list[int], ncolors: int) -> list[int]:
    """Equalise colour class sizes to within one, keeping the colouring proper.

    While some class is at least two larger than another, the union of the two
    classes contains a path component with one more edge of the larger
    colour; swapping colours along it moves one edge across.
    """
    color = list(color)
    while True:
        sizes = [0] * ncolors
        for c in color:
            sizes[c] += 1
        big = max(range(ncolors), key=lambda c: (sizes[c], -c))
        small = min(range(ncolors), key=lambda c: (sizes[c], c))
        if sizes[big] - sizes[small] <= 1:
            return color
        comp = _excess_path(edges, color, big, small)
        if comp is None:
            raise InternalInvariantViolation("no alternating path with surplus edge")
        for f in comp:
            color[f] = small if color[f] == big else big


def _excess_path(edges, color, big, small):
    ends: dict[tuple[str, int], list[int]] = {}
    for f, c in enumerate(color):
        if c in (big, small):
            u, v = edges[f]
            ends.setdefault(("r", u), []).append(f)
            ends.setdefault(("c", v), []).append(f)
    seen: set[int] = set()
    for f0, c0 in enumerate(color):
        if c0 not in (big, small) or f0 in seen:
            continue
        comp, stack = [], [f0]
        seen.add(f0)
        while stack:
            f = stack.pop()
            comp.append(f)
            u, v = edges[f]
            for g in ends[("r", u)] + ends[("c", v)]:
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
        nb = sum(1 for f in comp if color[f] == big)
        if nb > len(comp) - nb:
            return comp
    return None


def balanced_edge_coloring(edges: Sequence[tuple[int, int]], n: int, ncolors: int | None = None) -> list[int]:
    """Proper colouring with ``ncolors`` (default n) colours, classes within one of each other."""
    ncolors = n if ncolors is None else ncolors
    return balance_coloring(edges, proper_edge_coloring(edges, n, ncolors), ncolors)
