"""GIT weight presentations and their residual data.

A presentation is an ``r x k`` integer weight matrix (column ``j`` is the
weight ``mu_j`` of the ``j``-th coordinate) together with support constants
``omega_j``.  The residual normals are ``nu_j = pi(-e_j)``, where ``pi`` is the
projection of ``Z^k`` onto the free part of the cokernel of the transposed
weight matrix.  With this sign convention the moment polytope is

    {mu : <mu, nu_j> >= -omega_j}.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import exactmath as em
from .errors import (
    EmptyPolytope,
    EmptyQuotient,
    HalfSpaceViolation,
    LowerDimensionalPolytope,
    WeightsDoNotSpan,
)
from .polytope import HPolytope, solve_polytope, vertex_barycenter


@dataclass(frozen=True)
class Presentation:
    weights: tuple[tuple[int, ...], ...]
    support: tuple[Fraction, ...]
    labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        w = tuple(tuple(int(x) for x in row) for row in self.weights)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "support", tuple(em.to_rat(x) for x in self.support))
        k = len(w[0]) if w else len(self.support)
        if any(len(row) != k for row in w):
            raise ValueError("ragged weight matrix")
        if len(self.support) != k:
            raise ValueError(f"support has {len(self.support)} entries, expected {k}")
        labels = tuple(self.labels) or tuple(f"x{j + 1}" for j in range(k))
        if len(labels) != k:
            raise ValueError("labels do not match the number of coordinates")
        object.__setattr__(self, "labels", labels)

    @property
    def r(self) -> int:
        return len(self.weights)

    @property
    def k(self) -> int:
        return len(self.support)

    def weight(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.weights)


@dataclass(frozen=True)
class ResidualData:
    n: int
    nu: tuple[tuple[int, ...], ...]  # n x k, columns are the normals
    torsion: tuple[int, ...]
    k: int

    def normal(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.nu)

    def normals(self) -> list[tuple[int, ...]]:
        return [self.normal(j) for j in range(self.k)]


@dataclass(frozen=True)
class ValidationReport:
    half_space_witness: tuple[Fraction, ...]
    spans: bool
    n: int
    torsion: tuple[int, ...]
    vertex_count: int
    simple: bool
    spurious: tuple[int, ...]


def _fm_feasible_point(rows: list[list[Fraction]], rhs: list[Fraction], nvars: int):
    """A point with ``rows @ x >= rhs``, or ``None``, by Fourier-Motzkin elimination."""
    systems = [list(zip(rows, rhs))]
    cur = systems[0]
    for v in range(nvars - 1, -1, -1):
        pos, neg, zero = [], [], []
        for a, b in cur:
            (pos if a[v] > 0 else neg if a[v] < 0 else zero).append((a, b))
        nxt = list(zero)
        for ap, bp in pos:
            for an, bn in neg:
                # ap[v] > 0 > an[v]: combine to cancel x_v
                lp, ln = -an[v], ap[v]
                a = [lp * x + ln * y for x, y in zip(ap, an)]
                nxt.append((a, lp * bp + ln * bn))
        # normalize and drop duplicates to curb growth
        uniq = {}
        for a, b in nxt:
            scale = next((abs(x) for x in a if x != 0), None)
            if scale is None:
                if b > 0:
                    return None
                continue
            key = (tuple(x / scale for x in a), b / scale)
            uniq[key] = True
        cur = [(list(a), b) for a, b in uniq]
        systems.append(cur)
    x = [Fraction(0)] * nvars
    for v in range(nvars):
        system = systems[nvars - v - 1]
        lo, hi = None, None
        for a, b in system:
            if a[v] == 0:
                continue
            rest = sum(a[i] * x[i] for i in range(v))
            bound = (b - rest) / a[v]
            if a[v] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            if lo > hi:
                return None
            x[v] = (lo + hi) / 2
        elif lo is not None:
            x[v] = lo
        elif hi is not None:
            x[v] = hi
    return x


def half_space_witness(p: Presentation) -> tuple[Fraction, ...]:
    """Some ``xi`` with ``<xi, mu_j> >= 1`` for every weight; raises if none exists."""
    rows = [[Fraction(x) for x in p.weight(j)] for j in range(p.k)]
    x = _fm_feasible_point(rows, [Fraction(1)] * p.k, p.r)
    if x is None or any(em.dot(x, row) < 1 for row in rows):
        raise HalfSpaceViolation("the weights do not lie in an open half-space")
    return tuple(x)


def residual(p: Presentation) -> ResidualData:
    """Residual torus data.  Rows of ``nu`` are the HNF-canonical kernel basis, negated."""
    a = [list(p.weight(j)) for j in range(p.k)]  # k x r
    proj, torsion = em.integer_kernel_projection(a, p.r)
    nu = tuple(tuple(-x for x in row) for row in proj)
    return ResidualData(n=p.k - p.r, nu=nu, torsion=tuple(torsion), k=p.k)


def moment_polytope(p: Presentation, res: ResidualData | None = None) -> HPolytope:
    res = res or residual(p)
    return HPolytope(res.n, tuple(res.normals()), p.support)


def validate(p: Presentation) -> ValidationReport:
    if p.k < p.r:
        raise WeightsDoNotSpan(f"k = {p.k} < r = {p.r}")
    witness = half_space_witness(p)
    if em.rank(p.weights) < p.r:
        raise WeightsDoNotSpan("the weights do not span the Lie algebra dual")
    res = residual(p)
    comb = solve_polytope(moment_polytope(p, res))
    if comb.empty:
        raise EmptyQuotient("the moment polytope is empty")
    return ValidationReport(
        half_space_witness=witness,
        spans=True,
        n=res.n,
        torsion=res.torsion,
        vertex_count=len(comb.vertices),
        simple=comb.is_simple(res.n),
        spurious=tuple(sorted(comb.spurious_indices)),
    )


def center(p: Presentation, res: ResidualData | None = None) -> Presentation:
    """Translate so that the vertex barycenter of the polytope sits at the origin."""
    res = res or residual(p)
    comb = solve_polytope(moment_polytope(p, res))
    if comb.empty:
        raise EmptyPolytope("cannot center an empty polytope")
    if not comb.full_dimensional:
        raise LowerDimensionalPolytope("polytope is not full-dimensional")
    c = vertex_barycenter(comb)
    support = tuple(w + em.dot(c, res.normal(j)) for j, w in enumerate(p.support))
    return replace(p, support=support)


def deform_support(p: Presentation, alpha2: Sequence) -> Presentation:
    """Replace the support constants by the given (bulk-deformed) components."""
    alpha2 = tuple(em.to_rat(x) for x in alpha2)
    if len(alpha2) != p.k:
        raise ValueError("deformation vector has the wrong length")
    return replace(p, support=alpha2)


def flow(p: Presentation, t) -> Presentation:
    """The anticanonical flow: every support constant decreased by ``t``."""
    t = em.to_rat(t)
    return replace(p, support=tuple(w - t for w in p.support))


def unstable_subsets(p: Presentation, res: ResidualData | None = None) -> list[frozenset[int]]:
    """Index sets ``I`` whose weights do not cone-span the polarization class.

    ``I`` is unstable exactly when the face ``{<mu, nu_j> = -omega_j, j not in I}``
    of the polytope is empty, which is what is tested here.
    """
    res = res or residual(p)
    comb = solve_polytope(moment_polytope(p, res))
    tight = [v.active for v in comb.vertices]
    out = []
    full = frozenset(range(p.k))
    for size in range(p.k + 1):
        for sub in combinations(range(p.k), size):
            comp = full - frozenset(sub)
            if not any(comp <= act for act in tight):
                out.append(frozenset(sub))
    return out
