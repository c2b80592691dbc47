"""Shared domain types, fairness arithmetic and JSON (de)serialization.

Indices are 0-based everywhere inside the package. The JSON boundary
(``*_from_json`` / ``*_to_json``) is the only place that converts to and
from the 1-based convention used in instance files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class FairRepError(Exception):
    """Base class for all package errors."""


class InvalidInstance(FairRepError, ValueError):
    pass


class InvalidSolution(FairRepError, ValueError):
    pass


class DimensionMismatch(FairRepError, ValueError):
    pass


class PreconditionViolation(FairRepError, ValueError):
    pass


class CapExceeded(FairRepError):
    pass


class BudgetExceeded(FairRepError):
    """An exhaustive family is larger than the configured budget."""


class OutOfRange(FairRepError, ValueError):
    pass


class RigidInfeasible(FairRepError):
    """No perfect matching has the requested count because the set is rigid."""

    def __init__(self, count: int, achievable: Sequence[int]):
        self.count = count
        self.achievable = tuple(achievable)
        super().__init__(f"count {count} not achievable; rigid set admits {list(self.achievable)}")


class CountInfeasible(FairRepError):
    """No perfect matching has the requested count although the set is not rigid."""

    def __init__(self, count: int, achievable: Sequence[int]):
        self.count = count
        self.achievable = tuple(achievable)
        super().__init__(f"count {count} not achievable; achievable counts {list(self.achievable)}")


class InternalInvariantViolation(FairRepError):
    """A state that cannot occur on valid input. Always a bug."""


class SearchExhausted(InternalInvariantViolation):
    pass


# ---------------------------------------------------------------------------
# interval instances
# ---------------------------------------------------------------------------

class Kind(str, Enum):
    PATH = "path"
    CYCLE = "cycle"
    POWER_CYCLE = "power_cycle"


@dataclass(frozen=True)
class VertexPartition:
    """A path, cycle or cycle power whose vertices are split into classes.

    ``classes[p]`` is the 0-based class of vertex ``p``. For paths and
    cycles ``s`` is 2; for a power cycle two vertices are adjacent when their
    cyclic distance is below ``s``.
    """

    kind: Kind
    classes: tuple[int, ...]
    s: int = 2

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "classes", tuple(int(c) for c in self.classes))
        if not self.classes:
            raise InvalidInstance("instance needs at least one vertex")
        if self.kind is not Kind.POWER_CYCLE and self.s != 2:
            raise InvalidInstance("s is fixed at 2 for paths and cycles")
        if self.s < 2:
            raise InvalidInstance("s must be at least 2")
        if min(self.classes) < 0:
            raise InvalidInstance("class labels must be positive")
        present = set(self.classes)
        if present != set(range(len(present))):
            missing = sorted(set(range(max(present) + 1)) - present)
            raise InvalidInstance(f"empty classes {[c + 1 for c in missing]}")

    @property
    def n(self) -> int:
        return len(self.classes)

    @cached_property
    def m(self) -> int:
        return max(self.classes) + 1

    @cached_property
    def sizes(self) -> tuple[int, ...]:
        out = [0] * self.m
        for c in self.classes:
            out[c] += 1
        return tuple(out)

    @property
    def beta(self) -> int:
        return self.s if self.kind is Kind.POWER_CYCLE else 2

    def members(self, i: int) -> list[int]:
        return [p for p, c in enumerate(self.classes) if c == i]

    def adjacent(self, p: int, q: int) -> bool:
        if p == q:
            return False
        gap = abs(p - q)
        if self.kind is Kind.PATH:
            return gap == 1
        return min(gap, self.n - gap) < self.s

    def is_independent(self, members: Iterable[int]) -> bool:
        pts = sorted(members)
        if len(set(pts)) != len(pts) or any(p < 0 or p >= self.n for p in pts):
            return False
        if len(pts) < 2:
            return True
        if self.kind is Kind.PATH:
            return all(b - a >= 2 for a, b in zip(pts, pts[1:]))
        gaps = [b - a for a, b in zip(pts, pts[1:])] + [self.n - pts[-1] + pts[0]]
        return min(gaps) >= self.s


def path(classes: Sequence[int]) -> VertexPartition:
    return VertexPartition(Kind.PATH, tuple(classes))


def cycle(classes: Sequence[int]) -> VertexPartition:
    return VertexPartition(Kind.CYCLE, tuple(classes))


def power_cycle(classes: Sequence[int], s: int) -> VertexPartition:
    return VertexPartition(Kind.POWER_CYCLE, tuple(classes), s)


# ---------------------------------------------------------------------------
# bipartite instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColorMatrix:
    """An n x n array of part labels: cell (i, j) is the edge ij of K_{n,n}."""

    colors: tuple[tuple[int, ...], ...]
    m: int
    allow_empty: bool = field(default=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.colors)
        object.__setattr__(self, "colors", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InvalidInstance("color matrix must be square and nonempty")
        if self.m < 1:
            raise InvalidInstance("m must be positive")
        for r in rows:
            for x in r:
                if not 0 <= x < self.m:
                    raise InvalidInstance(f"entry {x + 1} outside 1..{self.m}")
        if not self.allow_empty and 0 in self.sizes:
            empty = [i + 1 for i, s in enumerate(self.sizes) if s == 0]
            raise InvalidInstance(f"empty parts {empty}")

    @property
    def n(self) -> int:
        return len(self.colors)

    @cached_property
    def sizes(self) -> tuple[int, ...]:
        out = [0] * self.m
        for row in self.colors:
            for x in row:
                out[x] += 1
        return tuple(out)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.colors[i][j]

    def mask(self, part: int) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(x == part for x in row) for row in self.colors)

    def counts(self, perm: Perm) -> list[int]:
        out = [0] * self.m
        for i, j in enumerate(perm):
            out[self.colors[i][j]] += 1
        return out


def color_matrix(rows: Sequence[Sequence[int]], m: int | None = None,
                 allow_empty: bool = False) -> ColorMatrix:
    """Build from 0-based labels; ``m`` defaults to the largest label + 1."""
    rows = tuple(tuple(r) for r in rows)
    if m is None:
        m = max(max(r) for r in rows) + 1
    return ColorMatrix(rows, m, allow_empty)


def subset_matrix(mask: Sequence[Sequence[bool | int]]) -> ColorMatrix:
    """Two-part matrix with part 0 = the cells where ``mask`` is true."""
    rows = tuple(tuple(0 if x else 1 for x in r) for r in mask)
    return ColorMatrix(rows, 2, allow_empty=True)


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------

def check_perm(perm: Sequence[int], n: int | None = None) -> Perm:
    perm = tuple(int(x) for x in perm)
    if n is not None and len(perm) != n:
        raise DimensionMismatch(f"permutation of length {len(perm)}, expected {n}")
    if sorted(perm) != list(range(len(perm))):
        raise InvalidSolution(f"not a bijection: {perm}")
    return perm


def identity(n: int) -> Perm:
    return tuple(range(n))


def inverse(perm: Perm) -> Perm:
    out = [0] * len(perm)
    for i, j in enumerate(perm):
        out[j] = i
    return tuple(out)


def compose(outer: Perm, inner: Perm) -> Perm:
    """``outer o inner``: i -> outer[inner[i]]."""
    return tuple(outer[j] for j in inner)


def from_cycles(n: int, *cycles: Sequence[int]) -> Perm:
    """Permutation of range(n) from disjoint cycles given in 0-based points."""
    out = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            out[a] = b
    return check_perm(out, n)


def hamming_distance(sigma: Sequence[int], tau: Sequence[int]) -> int:
    if len(sigma) != len(tau):
        raise DimensionMismatch(f"lengths {len(sigma)} and {len(tau)}")
    return sum(1 for a, b in zip(sigma, tau) if a != b)


def sim(sigma: Sequence[int], tau: Sequence[int]) -> bool:
    """Hamming distance at most 3."""
    return hamming_distance(sigma, tau) <= 3


# ---------------------------------------------------------------------------
# fairness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FairnessReport:
    """Per-class counts, quotas and deficits of a solution.

    Interval instances: ``deficits[i]`` is the least b_i >= 0 with
    count_i >= |V_i| / beta - b_i; ``quotas[i]`` is floor(|V_i| / beta).
    Bipartite instances: ``quotas[i]`` is k_i = |E_i| / n and ``deficits[i]``
    is the signed d_i = count_i - k_i.
    """

    kind: str
    counts: tuple[int, ...]
    sizes: tuple[int, ...]
    quotas: tuple[Fraction, ...]
    deficits: tuple[Fraction, ...]
    total_deficit: Fraction

    @property
    def m(self) -> int:
        return len(self.counts)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "counts": list(self.counts),
            "sizes": list(self.sizes),
            "quotas": [_frac_json(q) for q in self.quotas],
            "deficits": [_frac_json(d) for d in self.deficits],
            "total_deficit": _frac_json(self.total_deficit),
        }


def _frac_json(x: Fraction) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def interval_report(instance: VertexPartition, members: Iterable[int]) -> FairnessReport:
    members = sorted(members)
    if not instance.is_independent(members):
        raise InvalidSolution(f"{[p + 1 for p in members]} is not independent in the {instance.kind.value}")
    counts = [0] * instance.m
    for p in members:
        counts[instance.classes[p]] += 1
    beta = instance.beta
    deficits = tuple(max(Fraction(0), Fraction(size, beta) - c)
                     for size, c in zip(instance.sizes, counts))
    return FairnessReport(
        kind="interval",
        counts=tuple(counts),
        sizes=instance.sizes,
        quotas=tuple(Fraction(size // beta) for size in instance.sizes),
        deficits=deficits,
        total_deficit=sum(deficits, Fraction(0)),
    )


def bipartite_report(instance: ColorMatrix, perm: Sequence[int]) -> FairnessReport:
    perm = check_perm(perm, instance.n)
    counts = instance.counts(perm)
    n = instance.n
    quotas = tuple(Fraction(size, n) for size in instance.sizes)
    deficits = tuple(c - q for c, q in zip(counts, quotas))
    return FairnessReport(
        kind="bipartite",
        counts=tuple(counts),
        sizes=instance.sizes,
        quotas=quotas,
        deficits=deficits,
        total_deficit=sum((max(Fraction(0), -d) for d in deficits), Fraction(0)),
    )


def fairness_report(instance: VertexPartition | ColorMatrix, solution) -> FairnessReport:
    if isinstance(instance, VertexPartition):
        return interval_report(instance, solution)
    if isinstance(instance, ColorMatrix):
        return bipartite_report(instance, solution)
    raise TypeError(f"unsupported instance type {type(instance).__name__}")


# ---------------------------------------------------------------------------
# JSON boundary
# ---------------------------------------------------------------------------

def instance_from_json(data: dict) -> VertexPartition | ColorMatrix:
    """Parse an interval or bipartite instance (1-based labels)."""
    if "instance" in data and isinstance(data["instance"], dict):
        data = data["instance"]
    if "kind" in data and data["kind"] in {k.value for k in Kind}:
        classes = [int(c) - 1 for c in data["classes"]]
        if "n" in data and int(data["n"]) != len(classes):
            raise InvalidInstance(f"n={data['n']} but {len(classes)} class labels")
        s = int(data.get("s", 2))
        return VertexPartition(Kind(data["kind"]), tuple(classes), s)
    if "colors" in data:
        rows = [[int(x) - 1 for x in r] for r in data["colors"]]
        m = int(data.get("m", max(max(r) for r in rows) + 1))
        if "n" in data and int(data["n"]) != len(rows):
            raise InvalidInstance(f"n={data['n']} but {len(rows)} rows")
        return ColorMatrix(tuple(tuple(r) for r in rows), m, bool(data.get("allow_empty", False)))
    raise InvalidInstance("unrecognised instance: expected 'kind'+'classes' or 'colors'")


def instance_to_json(instance: VertexPartition | ColorMatrix) -> dict:
    if isinstance(instance, VertexPartition):
        out = {"kind": instance.kind.value, "n": instance.n,
               "classes": [c + 1 for c in instance.classes]}
        if instance.kind is Kind.POWER_CYCLE:
            out["s"] = instance.s
        return out
    out = {"n": instance.n, "m": instance.m,
           "colors": [[x + 1 for x in row] for row in instance.colors]}
    if instance.allow_empty:
        out["allow_empty"] = True
    return out


def set_to_json(members: Iterable[int]) -> list[int]:
    return [p + 1 for p in sorted(members)]


def perm_to_json(perm: Perm) -> list[int]:
    return [j + 1 for j in perm]


def perm_from_json(values: Sequence[int], n: int | None = None) -> Perm:
    return check_perm([int(v) - 1 for v in values], n)
