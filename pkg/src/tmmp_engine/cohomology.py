"""Fans, orbifold quantum-cohomology dimension and box elements.

The dimension of the quantum cohomology of a complete simplicial toric
orbifold is the number of twisted sectors summed over fixed points, i.e. the
sum over maximal cones of ``|det|`` of the ray matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from . import exactmath as em
from .errors import EmptyPolytope, LowerDimensionalPolytope, NonSimplicialVertex
from .polytope import HPolytope, PolytopeCombinatorics, solve_polytope


@dataclass(frozen=True)
class Cone:
    vertex: int
    rays: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]  # n x n, columns are the rays
    multiplicity: int


@dataclass(frozen=True)
class FanData:
    n: int
    rays: tuple[tuple[int, ...], ...]  # every normal, indexed like the presentation
    max_cones: tuple[Cone, ...]

    def ray_indices(self) -> frozenset[int]:
        return frozenset(j for c in self.max_cones for j in c.rays)


def build_fan(p: HPolytope, comb: PolytopeCombinatorics | None = None) -> FanData:
    """Normal fan of a simple polytope; raises on any non-simple vertex."""
    comb = comb or solve_polytope(p)
    if comb.empty:
        raise EmptyPolytope("polytope is empty")
    if not comb.full_dimensional:
        raise LowerDimensionalPolytope("polytope is not full-dimensional")
    cones = []
    for i, v in enumerate(comb.vertices):
        if len(v.active) != p.n:
            raise NonSimplicialVertex(
                f"vertex {tuple(map(em.fmt_rat, v.point))} has {len(v.active)} active "
                f"inequalities (expected {p.n}); perturb the support constants"
            )
        rays = tuple(sorted(v.active))
        mat = tuple(tuple(p.normals[j][row] for j in rays) for row in range(p.n))
        mult = abs(em.det([list(r) for r in mat]))
        assert mult > 0
        cones.append(Cone(i, rays, mat, mult))
    return FanData(p.n, p.normals, tuple(cones))


def quantum_dim(p: HPolytope, torsion: Sequence[int] = ()) -> int:
    """``sum |det|`` over the maximal cones; the torsion order when ``n = 0``."""
    if p.n == 0:
        if any(b < 0 for b in p.constants):
            raise EmptyPolytope("polytope is empty")
        return prod(torsion) if torsion else 1
    return sum(c.multiplicity for c in build_fan(p).max_cones)


def cone_box(cone: Cone) -> list[tuple[Fraction, ...]]:
    """Coefficient vectors ``c in [0,1)^n`` of the lattice points ``sum c_i rho_i``."""
    n = len(cone.matrix)
    rays_as_rows = [[cone.matrix[row][i] for row in range(n)] for i in range(n)]
    h, _ = em.hermite_normal_form(rays_as_rows)
    diag = [h[i][i] for i in range(n)]
    # the sublattice basis is triangular, so the boxes 0 <= a_i < h_ii are coset reps
    reps = [[]]
    for d in diag:
        reps = [r + [a] for r in reps for a in range(d)]
    out = []
    for a in reps:
        c = em.solve_rational([list(row) for row in cone.matrix], a)
        out.append(tuple(x - (x.numerator // x.denominator) for x in c))
    return sorted(out)


def box_elements(fan: FanData) -> list[list[tuple[Fraction, ...]]]:
    return [cone_box(c) for c in fan.max_cones]


def semifano_indicator(p: HPolytope, torsion: Sequence[int] = ()) -> bool:
    """Whether the Kouchnirenko count of the potential equals the quantum dimension.

    This is a derived indicator, not an independent positivity test of ``c_1``.
    """
    from .potential import kouchnirenko_count, LaurentPotential, Term

    w = LaurentPotential(p.n, tuple(Term(v, b, Fraction(1), j)
                                    for j, (v, b) in enumerate(zip(p.normals, p.constants))))
    return kouchnirenko_count(w, torsion) == quantum_dim(p, torsion)
