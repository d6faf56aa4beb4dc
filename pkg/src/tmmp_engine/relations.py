"""Stanley-Reisner data and quantum Stanley-Reisner (Batyrev) relations.

A relation for a class ``d`` in the Lie algebra of the acting torus reads

    prod_{<mu_j,d> >= 0} mu_j^{<mu_j,d>}  =  q^{<d,omega>} prod_{<mu_j,d> <= 0} mu_j^{-<mu_j,d>}

where ``mu_j`` is viewed as a linear form on the Lie algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

import sympy

from . import exactmath as em
from .cohomology import FanData
from .errors import InconsistentRelation, NonIntegralPairing, SingularMatrix
from .presentation import Presentation, ResidualData


@dataclass(frozen=True)
class QsrRelation:
    d: tuple[Fraction, ...]
    pairings: tuple[int, ...]
    qexp: Fraction
    left: tuple[int, ...]
    right: tuple[int, ...]

    def is_trivial(self) -> bool:
        return not any(self.pairings)


def primitive_collections(fan: FanData, k: int) -> list[frozenset[int]]:
    """Minimal index sets whose rays do not all lie in one cone of the fan.

    Indices that are not rays at all (spurious inequalities) appear as
    singleton collections.
    """
    cones = [frozenset(c.rays) for c in fan.max_cones]

    def is_face(s: frozenset[int]) -> bool:
        return any(s <= c for c in cones)

    out = []
    # a minimal non-face has every proper subset a face, hence size <= n + 1
    for size in range(1, min(k, fan.n + 1) + 1):
        for sub in combinations(range(k), size):
            s = frozenset(sub)
            if is_face(s):
                continue
            if all(is_face(s - {i}) for i in s):
                out.append(s)
    return out


def pairings_for(p: Presentation, d: Sequence) -> list[Fraction]:
    d = [em.to_rat(x) for x in d]
    if len(d) != p.r:
        raise ValueError(f"class has {len(d)} entries, expected {p.r}")
    return [em.dot(d, p.weight(j)) for j in range(p.k)]


def qsr_relation(p: Presentation, d: Sequence) -> QsrRelation:
    pair = pairings_for(p, d)
    if any(x.denominator != 1 for x in pair):
        raise NonIntegralPairing(f"pairings {[em.fmt_rat(x) for x in pair]} are not all integral")
    ints = tuple(int(x) for x in pair)
    qexp = sum((a * w for a, w in zip(ints, p.support)), Fraction(0))
    return QsrRelation(
        d=tuple(em.to_rat(x) for x in d),
        pairings=ints,
        qexp=qexp,
        left=tuple(max(a, 0) for a in ints),
        right=tuple(max(-a, 0) for a in ints),
    )


def _cone_expansion(fan: FanData, v: Sequence[int]) -> dict[int, Fraction]:
    # coefficients of v in the smallest cone containing it
    best = None
    for cone in fan.max_cones:
        try:
            c = em.solve_rational([list(r) for r in cone.matrix], list(v))
        except SingularMatrix:
            continue
        if all(x >= 0 for x in c):
            exp = {j: x for j, x in zip(cone.rays, c) if x != 0}
            if best is None or len(exp) < len(best):
                best = exp
    if best is None:
        raise InconsistentRelation("fan is not complete: vector lies in no cone")
    return best


def _solve_class(p: Presentation, a: Sequence[Fraction]) -> tuple[Fraction, ...]:
    # W^T d = a; pick r independent rows, solve, then check the rest
    rows = [list(p.weight(j)) for j in range(p.k)]
    chosen: list[int] = []
    for j in range(p.k):
        if em.rank([rows[i] for i in chosen + [j]]) == len(chosen) + 1:
            chosen.append(j)
        if len(chosen) == p.r:
            break
    if len(chosen) < p.r:
        raise InconsistentRelation("weights do not span")
    d = em.solve_rational([rows[i] for i in chosen], [a[i] for i in chosen])
    if any(em.dot(d, rows[j]) != a[j] for j in range(p.k)):
        raise InconsistentRelation("relation vector is not in the row space of the weights")
    return tuple(d)


def suggested_degrees(fan: FanData, p: Presentation) -> list[tuple[Fraction, ...]]:
    """One class per primitive collection, from its primitive relation.

    The list is not claimed to generate the quantum Stanley-Reisner ideal.
    """
    out = []
    for coll in primitive_collections(fan, p.k):
        sigma = [sum(fan.rays[i][row] for i in coll) for row in range(fan.n)]
        c = _cone_expansion(fan, sigma)
        a = [Fraction(0)] * p.k
        for i in coll:
            a[i] += 1
        for j, x in c.items():
            a[j] -= x
        scale = lcm(*(x.denominator for x in a))
        a = [x * scale for x in a]
        if any(sum(a[j] * fan.rays[j][row] for j in range(p.k)) != 0 for row in range(fan.n)):
            raise InconsistentRelation("primitive relation does not close up")
        out.append(_solve_class(p, a))
    return out


def generator_forms(p: Presentation, xi: Sequence[sympy.Symbol] | None = None) -> list[sympy.Expr]:
    """Each ``mu_j`` as a linear form in the Lie algebra coordinates ``xi``."""
    if xi is None:
        xi = sympy.symbols(f"xi1:{p.r + 1}") if p.r > 1 else [sympy.Symbol("xi")]
    return [sum(w * x for w, x in zip(p.weight(j), xi)) for j in range(p.k)]


def relation_expr(rel: QsrRelation, p: Presentation, q: sympy.Symbol | None = None,
                  xi: Sequence[sympy.Symbol] | None = None) -> sympy.Expr:
    """``left - q^{qexp} right`` as a sympy expression in the Lie algebra coordinates."""
    q = q if q is not None else sympy.Symbol("q")
    forms = generator_forms(p, xi)
    lhs = sympy.Mul(*(f ** e for f, e in zip(forms, rel.left)))
    rhs = sympy.Mul(*(f ** e for f, e in zip(forms, rel.right)))
    return lhs - q ** sympy.Rational(rel.qexp.numerator, rel.qexp.denominator) * rhs


def substitution_monomials(rel: QsrRelation, p: Presentation, res: ResidualData):
    """Both sides after ``mu_j -> q^{omega_j} y^{nu_j}``, as ``(q-exponent, y-exponent)``."""
    def side(exps, extra):
        qe = extra + sum((e * w for e, w in zip(exps, p.support)), Fraction(0))
        ye = tuple(sum(e * res.normal(j)[i] for j, e in enumerate(exps)) for i in range(res.n))
        return qe, ye

    return side(rel.left, Fraction(0)), side(rel.right, rel.qexp)


def substitution_identity(rel: QsrRelation, p: Presentation, res: ResidualData) -> bool:
    """Whether both sides become the same Laurent monomial, checked symbolically."""
    q = sympy.Symbol("q", positive=True)
    ys = sympy.symbols(f"y1:{res.n + 1}", positive=True) if res.n else ()

    def mono(j):
        e = p.support[j]
        m = q ** sympy.Rational(e.numerator, e.denominator)
        for y, a in zip(ys, res.normal(j)):
            m *= y ** a
        return m

    lhs = sympy.Mul(*(mono(j) ** e for j, e in enumerate(rel.left)))
    rhs = q ** sympy.Rational(rel.qexp.numerator, rel.qexp.denominator) * sympy.Mul(
        *(mono(j) ** e for j, e in enumerate(rel.right)))
    (ql, yl), (qr, yr) = substitution_monomials(rel, p, res)
    return sympy.simplify(lhs / rhs) == 1 and ql == qr and yl == yr


def render_relation(rel: QsrRelation, p: Presentation) -> str:
    def side(exps):
        return [p.labels[j] + (f"^{e}" if e > 1 else "") for j, e in enumerate(exps) if e]

    rhs = side(rel.right)
    if rel.qexp == 1:
        rhs.insert(0, "q")
    elif rel.qexp != 0:
        rhs.insert(0, f"q^({em.fmt_rat(rel.qexp)})")
    return f"{'*'.join(side(rel.left)) or '1'} - {'*'.join(rhs) or '1'}"


def relation_json(rel: QsrRelation, p: Presentation) -> dict:
    return {
        "d": [em.fmt_rat(x) for x in rel.d],
        "pairings": list(rel.pairings),
        "left": [{"generator": j, "label": p.labels[j], "exponent": e} for j, e in enumerate(rel.left) if e],
        "right": [{"generator": j, "label": p.labels[j], "exponent": e} for j, e in enumerate(rel.right) if e],
        "qexp": em.fmt_rat(rel.qexp),
        "text": render_relation(rel, p),
    }
