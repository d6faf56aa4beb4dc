"""Givental-type Laurent potentials ``W = sum_j c_j q^{omega_j} y^{nu_j}``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

from . import exactmath as em
from .polytope import hull_normalized_volume


@dataclass(frozen=True)
class Term:
    exponent: tuple[int, ...]
    qexp: Fraction
    coeff: Fraction
    label: int


@dataclass(frozen=True)
class LaurentPotential:
    n: int
    terms: tuple[Term, ...]

    def exponents(self) -> list[tuple[int, ...]]:
        return [t.exponent for t in self.terms]

    def labels(self) -> list[int]:
        return [t.label for t in self.terms]

    def render(self, q: str = "q", y: str = "y") -> str:
        parts = []
        for t in self.terms:
            factors = []
            if t.coeff != 1:
                factors.append(em.fmt_rat(t.coeff))
            if t.qexp == 1:
                factors.append(q)
            elif t.qexp != 0:
                factors.append(f"{q}^({em.fmt_rat(t.qexp)})")
            for i, e in enumerate(t.exponent):
                if e == 1:
                    factors.append(f"{y}{i + 1}")
                elif e != 0:
                    factors.append(f"{y}{i + 1}^({e})")
            parts.append("*".join(factors) or "1")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class TropicalPoint:
    zeta: tuple[Fraction, ...]
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")


def build_potential(res, support: Sequence, coeffs: Sequence | None = None) -> LaurentPotential:
    """One term ``q^{omega_j} y^{nu_j}`` per presentation index."""
    support = [em.to_rat(x) for x in support]
    if len(support) != res.k:
        raise ValueError("support length does not match the residual data")
    coeffs = [Fraction(1)] * res.k if coeffs is None else [em.to_rat(c) for c in coeffs]
    if any(c == 0 for c in coeffs):
        raise ValueError("coefficients must be nonzero")
    terms = tuple(Term(res.normal(j), support[j], coeffs[j], j) for j in range(res.k))
    return LaurentPotential(res.n, terms)


def kouchnirenko_count(w: LaurentPotential, torsion: Iterable[int] = ()) -> int:
    """Normalized volume of the Newton polytope.

    For ``n = 0`` there is no torus to count critical points on; the count is
    then the order of the finite stabilizer, matching the quantum dimension.
    """
    if w.n == 0:
        return prod(torsion) if torsion else 1
    return hull_normalized_volume(w.exponents(), origin_interior_required=True)


def face_split(w: LaurentPotential, face_normal_indices: Iterable[int]) -> tuple[LaurentPotential, LaurentPotential]:
    """Split into the terms labelled by ``S`` and the rest."""
    s = frozenset(face_normal_indices)
    if not s:
        raise ValueError("the index set must be nonempty")
    inside = tuple(t for t in w.terms if t.label in s)
    outside = tuple(t for t in w.terms if t.label not in s)
    return LaurentPotential(w.n, inside), LaurentPotential(w.n, outside)
