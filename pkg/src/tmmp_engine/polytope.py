"""Exact H-polytopes.

A polytope is stored as a list of inward normals ``nu_j`` (integer vectors)
and constants ``b_j``; it is the set ``{mu : <mu, nu_j> >= -b_j}``.  All the
geometry is done by brute force over index subsets in exact arithmetic, which
is perfectly adequate in dimension at most four with a few dozen inequalities.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from . import exactmath as em
from .errors import OriginNotInterior

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class HPolytope:
    n: int
    normals: tuple[tuple[int, ...], ...]
    constants: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "normals", tuple(tuple(int(x) for x in v) for v in self.normals))
        object.__setattr__(self, "constants", tuple(Fraction(b) for b in self.constants))
        if len(self.normals) != len(self.constants):
            raise ValueError("normals and constants differ in length")
        if any(len(v) != self.n for v in self.normals):
            raise ValueError("normal of wrong dimension")

    @property
    def m(self) -> int:
        return len(self.normals)

    def slack(self, mu: Sequence, j: int) -> Fraction:
        return em.dot(mu, self.normals[j]) + self.constants[j]

    def contains(self, mu: Sequence) -> bool:
        return all(self.slack(mu, j) >= 0 for j in range(self.m))

    def shifted(self, t) -> "HPolytope":
        """The anticanonical slice: every constant lowered by ``t``."""
        t = Fraction(t)
        return HPolytope(self.n, self.normals, tuple(b - t for b in self.constants))


@dataclass(frozen=True)
class Vertex:
    point: Point
    active: frozenset[int]


@dataclass(frozen=True)
class PolytopeCombinatorics:
    vertices: tuple[Vertex, ...]
    facet_indices: frozenset[int]
    spurious_indices: frozenset[int]
    bounded: bool
    full_dimensional: bool

    @property
    def empty(self) -> bool:
        return not self.vertices

    def vertex_points(self) -> list[Point]:
        return [v.point for v in self.vertices]

    def is_simple(self, n: int) -> bool:
        return all(len(v.active) == n for v in self.vertices)


@lru_cache(maxsize=4096)
def _recession_is_trivial(n: int, normals: tuple[tuple[int, ...], ...]) -> bool:
    # {d : <d, nu_j> >= 0 for all j} = {0}?  With full rank the cone is pointed,
    # so it is nonzero iff it has an extreme ray cut out by n-1 of the normals.
    if n == 0:
        return True
    if em.rank(normals) < n:
        return False
    for sub in combinations(range(len(normals)), n - 1):
        d = _cofactor_normal([list(normals[j]) for j in sub], n)
        if not any(d):
            continue
        vals = [em.dot(d, v) for v in normals]
        if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
            return False
    return True


def _integer_vertices(p: HPolytope) -> dict[Point, frozenset[int]]:
    # Clear denominators once; each candidate vertex is X / (D * L) with X, D
    # integers from Cramer's rule, so feasibility is an integer sign test.
    n, m = p.n, p.m
    scale = lcm(*(b.denominator for b in p.constants)) if m else 1
    big = [int(b * scale) for b in p.constants]
    verts: dict[Point, frozenset[int]] = {}
    seen = set()
    for sub in combinations(range(m), n):
        mat = [list(p.normals[j]) for j in sub]
        d = em.det(mat)
        if d == 0:
            continue
        rhs = [-big[j] for j in sub]
        x = []
        for i in range(n):
            mi = [row[:i] + [r] + row[i + 1:] for row, r in zip(mat, rhs)]
            x.append(em.det(mi))
        if d < 0:
            d, x = -d, [-v for v in x]
        g = gcd(d, *x)
        key = (tuple(v // g for v in x), d // g)
        if key in seen:
            continue
        seen.add(key)
        slacks = [sum(a * b for a, b in zip(x, p.normals[j])) + big[j] * d for j in range(m)]
        if any(s < 0 for s in slacks):
            continue
        den = d * scale
        verts[tuple(Fraction(v, den) for v in x)] = frozenset(j for j in range(m) if slacks[j] == 0)
    return verts


def solve_polytope(p: HPolytope) -> PolytopeCombinatorics:
    """Vertices, facets and spurious inequalities of ``p``."""
    n, m = p.n, p.m
    verts: dict[Point, frozenset[int]] = {}
    if n == 0:
        if all(b >= 0 for b in p.constants):
            verts[()] = frozenset(j for j in range(m) if p.constants[j] == 0)
    else:
        verts = _integer_vertices(p)
    vertices = tuple(Vertex(pt, act) for pt, act in sorted(verts.items()))
    bounded = _recession_is_trivial(n, p.normals)
    pts = [v.point for v in vertices]
    full = bounded and em.affine_rank(pts) == n
    facets = set()
    if full:
        for j in range(m):
            on = [v.point for v in vertices if j in v.active]
            if em.affine_rank(on) == n - 1:
                facets.add(j)
    return PolytopeCombinatorics(
        vertices=vertices,
        facet_indices=frozenset(facets),
        spurious_indices=frozenset(range(m)) - frozenset(facets),
        bounded=bounded,
        full_dimensional=full,
    )


def lifted_polytope(p: HPolytope) -> HPolytope:
    """The ``(mu, t)`` polytope ``<mu, nu_j> + b_j - t >= 0, t >= 0``.

    Index ``m`` (one past the last original index) is the ``t >= 0`` inequality.
    """
    normals = [tuple(v) + (-1,) for v in p.normals] + [(0,) * p.n + (1,)]
    return HPolytope(p.n + 1, tuple(normals), p.constants + (Fraction(0),))


def vertex_barycenter(comb: PolytopeCombinatorics) -> Point:
    pts = comb.vertex_points()
    if not pts:
        raise ValueError("no vertices")
    dim = len(pts[0])
    return tuple(sum((pt[i] for pt in pts), Fraction(0)) / len(pts) for i in range(dim))


def simplex_normalized_volume(points: Sequence[Sequence[int]]) -> int:
    """``n! * Vol`` of the simplex on ``n + 1`` points of ``Z^n``."""
    if not points:
        raise ValueError("need n+1 points")
    n = len(points[0])
    if len(points) != n + 1:
        raise ValueError(f"need exactly {n + 1} points, got {len(points)}")
    base = points[0]
    return abs(em.det([[a - b for a, b in zip(pt, base)] for pt in points[1:]]))


def _coordinate_chart(pts: Sequence[Sequence[Fraction]]) -> list[int]:
    # pivot coordinates of the affine hull; dropping the others is an affine
    # bijection of the hull onto a full-dimensional region
    diffs = [[a - b for a, b in zip(pt, pts[0])] for pt in pts[1:]]
    if not diffs:
        return []
    cols = []
    for c in range(len(pts[0])):
        trial = cols + [c]
        if em.rank([[row[i] for i in trial] for row in diffs]) == len(trial):
            cols = trial
    return cols


def _cofactor_normal(rows, d: int) -> list:
    # generalized cross product of d - 1 vectors in dimension d; zero iff they are dependent
    if d == 1:
        return [1]
    return [(-1) ** i * em.det([r[:i] + r[i + 1:] for r in rows]) for i in range(d)]


def hull_facets(pts: Sequence[Sequence[Fraction]]) -> list[tuple[tuple[Fraction, ...], Fraction, frozenset[int]]]:
    """Facets of a full-dimensional point configuration.

    Returns ``(a, c, on)`` with ``<a, x> >= c`` valid on all points and ``on``
    the indices of the points on the facet hyperplane.
    """
    d = len(pts[0])
    seen: dict[frozenset[int], tuple] = {}
    for sub in combinations(range(len(pts)), d):
        rows = [[x - y for x, y in zip(pts[i], pts[sub[0]])] for i in sub[1:]]
        a = _cofactor_normal(rows, d)
        if not any(a):
            continue
        c = em.dot(a, pts[sub[0]])
        vals = [em.dot(a, pt) - c for pt in pts]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            a = [-x for x in a]
            c = -c
        else:
            continue
        on = frozenset(i for i, v in enumerate(vals) if v == 0)
        if on not in seen:
            seen[on] = (tuple(a), c, on)
    return [seen[key] for key in sorted(seen, key=sorted)]


def _pulling_triangulation(pts, labels) -> list[tuple]:
    # pulling triangulation of conv(pts) within its affine hull, using only input points
    chart = _coordinate_chart(pts)
    if not chart:
        return [(labels[0],)]
    proj = [tuple(pt[c] for c in chart) for pt in pts]
    out = []
    for _, _, on in hull_facets(proj):
        if 0 in on:
            continue
        idx = sorted(on)
        for simplex in _pulling_triangulation([pts[i] for i in idx], [labels[i] for i in idx]):
            out.append(simplex + (labels[0],))
    return out


def hull_normalized_volume(points: Sequence[Sequence[int]], origin_interior_required: bool = False) -> int:
    """``d! * Vol(conv(points))`` for integer points spanning ``R^d``.

    Lower-dimensional configurations have volume zero.  With
    ``origin_interior_required`` the origin must lie strictly inside the hull.
    """
    pts = [tuple(int(x) for x in pt) for pt in dict.fromkeys(tuple(p) for p in points)]
    if not pts:
        raise ValueError("empty point set")
    d = len(pts[0])
    if d == 0:
        return 1
    if em.affine_rank(pts) < d:
        if origin_interior_required:
            raise OriginNotInterior("Newton polytope is not full-dimensional")
        return 0
    facets = hull_facets(pts)
    if origin_interior_required:
        for _, c, _ in facets:
            if -c <= 0:
                raise OriginNotInterior("origin is not interior to the hull")
    # cone a triangulation of every facet to the centroid S / N; scaling by N keeps dets integral
    n_pts = len(pts)
    big = [tuple(n_pts * x for x in pt) for pt in pts]
    apex = tuple(sum(pt[i] for pt in pts) for i in range(d))
    total = 0
    for _, _, on in facets:
        for simplex in _pulling_triangulation([pts[i] for i in sorted(on)], sorted(on)):
            total += abs(em.det([[x - y for x, y in zip(big[i], apex)] for i in simplex]))
    total = Fraction(total, n_pts ** d)
    assert total.denominator == 1, "normalized volume of a lattice polytope must be integral"
    return int(total)
