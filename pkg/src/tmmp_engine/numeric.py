"""Fixed-q critical points of a Laurent potential in one or two variables.

Exponents ``q^{omega_j}`` are written as powers of ``s = q^{1/L}``, ``L`` the
common denominator of the ``omega_j``, so every elimination step is exact over
``Q[s]``.  Only the final univariate root finding and the Newton polish run in
floating point (mpmath, high precision).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import mpmath
from mpmath import mp
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .errors import MatchingAmbiguity, RootFindingFailure, SpuriousRootAmbiguity, UnsupportedDimension
from .potential import LaurentPotential
from .tmmp import TmmpReport

DPS = 80
RESIDUAL_TOL = 1e-10
VALUATION_MARGIN = 0.05
ABERTH_MAX_ITER = 200
SEED = 20240917

POSITIVE = "Positive"
NOT_POSITIVE = "NotPositive"


@dataclass(frozen=True)
class NumericCritSet:
    q_value: Fraction
    roots: tuple[tuple, ...]  # mpc tuples
    residuals: tuple[float, ...]

    def as_complex(self) -> list[tuple[complex, ...]]:
        return [tuple(complex(z) for z in r) for r in self.roots]


@dataclass(frozen=True)
class ValuationEstimate:
    zeta: tuple[float, ...]
    embedded: tuple[float, ...]  # <zeta, nu_j> + omega_j
    classification: str
    root_q1: tuple[complex, ...]
    root_q2: tuple[complex, ...]

    @property
    def positive(self) -> bool:
        return self.classification == POSITIVE


@dataclass(frozen=True)
class MatchRow:
    point: tuple[Fraction, ...]
    multiplicity: int
    matched: int

    @property
    def ok(self) -> bool:
        return self.matched == self.multiplicity


@dataclass(frozen=True)
class VerificationTable:
    rows: tuple[MatchRow, ...]
    unmatched: tuple[ValuationEstimate, ...]
    positive_count: int
    not_positive_count: int

    @property
    def mismatches(self) -> int:
        return sum(1 for r in self.rows if not r.ok) + len(self.unmatched)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


# --- univariate roots -------------------------------------------------------

def _horner(coeffs, z):
    p = mpmath.mpc(0)
    dp = mpmath.mpc(0)
    for a in reversed(coeffs):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _newton_polygon_radii(coeffs) -> list:
    pts = [(i, mpmath.log(abs(a))) for i, a in enumerate(coeffs) if a != 0]
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) <= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    radii = []
    for (i0, l0), (i1, l1) in zip(hull, hull[1:]):
        r = mpmath.exp(-(l1 - l0) / (i1 - i0))
        radii.extend([r] * (i1 - i0))
    return radii


def aberth_roots(coeffs: Sequence, seed: int = SEED, max_iter: int = ABERTH_MAX_ITER) -> list:
    """All complex roots of ``sum coeffs[i] z^i`` (constant term nonzero)."""
    coeffs = [mpmath.mpc(a) for a in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    if coeffs[0] == 0:
        raise ValueError("strip zero roots before calling aberth_roots")
    rng = random.Random(seed)
    radii = _newton_polygon_radii(coeffs)
    z = []
    for i, r in enumerate(radii):
        theta = 2 * mpmath.pi * (i + rng.random()) / deg
        z.append(r * mpmath.expj(theta))
    eps = mpmath.mpf(10) ** (-(mp.dps - 12))
    for _ in range(max_iter):
        worst = mpmath.mpf(0)
        for k in range(deg):
            p, dp = _horner(coeffs, z[k])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else mpmath.mpc(mpmath.inf)
            s = sum(1 / (z[k] - z[j]) for j in range(deg) if j != k and z[k] != z[j])
            w = ratio / (1 - ratio * s)
            z[k] -= w
            worst = max(worst, abs(w) / max(abs(z[k]), eps))
        if worst < eps:
            return z
    # multiple roots converge linearly; accept if close to the working precision
    if worst < mpmath.mpf(10) ** (-(mp.dps // 3)):
        return z
    raise RootFindingFailure(f"Aberth iteration did not converge in {max_iter} steps")


# --- exact setup -------------------------------------------------------------

def _common_denominator(w: LaurentPotential) -> int:
    return lcm(*(t.qexp.denominator for t in w.terms)) if w.terms else 1


def _gradient_polys(w: LaurentPotential):
    """Cleared logarithmic-derivative polynomials in ``Q[s, y1..yn]``."""
    L = _common_denominator(w)
    names = "s," + ",".join(f"y{i + 1}" for i in range(w.n))
    R, *gens = ring(names, QQ)
    s, ys = gens[0], gens[1:]
    polys = []
    for i in range(w.n):
        terms = [(t.exponent, int(t.qexp * L), t.coeff * t.exponent[i]) for t in w.terms if t.exponent[i] != 0]
        emin = [min(e[0][v] for e in terms) for v in range(w.n)]
        smin = min(e[1] for e in terms)
        f = R(0)
        for expo, se, c in terms:
            mono = s ** (se - smin)
            for v in range(w.n):
                mono *= ys[v] ** (expo[v] - emin[v])
            f += QQ(c.numerator, c.denominator) * mono
        polys.append(f)
    return R, s, ys, polys, L


def _bareiss_det(mat):
    n = len(mat)
    a = [row[:] for row in mat]
    sign = 1
    prev = None
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return a[0][0] * 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num if prev is None else num.exquo(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def sylvester_resultant(f, g, var_index: int):
    """Resultant in the generator ``var_index`` by fraction-free elimination."""
    R = f.ring
    x = R.gens[var_index]

    def coeffs(h):
        deg = h.degree(var_index)
        out = [R(0)] * (deg + 1)
        for monom, c in h.terms():
            e = monom[var_index]
            rest = list(monom)
            rest[var_index] = 0
            out[e] += R({tuple(rest): c})
        return out[::-1]  # leading first

    cf, cg = coeffs(f), coeffs(g)
    m, n = len(cf) - 1, len(cg) - 1
    if m == 0 or n == 0:
        raise ValueError("both polynomials must involve the eliminated variable")
    size = m + n
    rows = []
    for i in range(n):
        rows.append([R(0)] * i + cf + [R(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([R(0)] * i + cg + [R(0)] * (size - n - 1 - i))
    return _bareiss_det(rows)


def _eval_univariate(poly, var_index: int, subs: dict):
    """Numeric coefficient list (low degree first) of ``poly`` in one generator."""
    deg = poly.degree(var_index)
    out = [mpmath.mpc(0)] * (deg + 1)
    for monom, c in poly.terms():
        val = mpmath.mpf(c.numerator) / c.denominator
        for idx, e in enumerate(monom):
            if idx != var_index and e:
                val *= subs[idx] ** e
        out[monom[var_index]] += val
    return out


def _strip_zero_roots(coeffs):
    i = 0
    while i < len(coeffs) and coeffs[i] == 0:
        i += 1
    return coeffs[i:]


# --- numeric evaluation ------------------------------------------------------

def _term_values(w: LaurentPotential, q, u):
    out = []
    for t in w.terms:
        val = mpmath.mpf(t.coeff.numerator) / t.coeff.denominator * mpmath.power(q, mpmath.mpf(t.qexp.numerator) / t.qexp.denominator)
        val *= mpmath.exp(sum(e * ui for e, ui in zip(t.exponent, u)))
        out.append(val)
    return out


def log_gradient(w: LaurentPotential, q, y) -> list:
    u = [mpmath.log(yi) for yi in y]
    vals = _term_values(w, q, u)
    return [sum(v * t.exponent[i] for v, t in zip(vals, w.terms)) for i in range(w.n)]


def _newton_log(w: LaurentPotential, q, u, iters: int = 60):
    n = w.n
    u = list(u)
    for _ in range(iters):
        vals = _term_values(w, q, u)
        g = [sum(v * t.exponent[i] for v, t in zip(vals, w.terms)) for i in range(n)]
        h = mpmath.matrix(n, n)
        for a in range(n):
            for b in range(n):
                h[a, b] = sum(v * t.exponent[a] * t.exponent[b] for v, t in zip(vals, w.terms))
        try:
            step = mpmath.lu_solve(h, mpmath.matrix(g))
        except ZeroDivisionError:
            return u, False
        u = [ui - step[i] for i, ui in enumerate(u)]
        if max(abs(step[i]) for i in range(n)) < mpmath.mpf(10) ** (-(mp.dps - 15)):
            return u, True
    return u, False


def _scale(w: LaurentPotential, q):
    mags = [abs(mpmath.mpf(t.coeff.numerator) / t.coeff.denominator) * mpmath.power(q, mpmath.mpf(t.qexp.numerator) / t.qexp.denominator)
            for t in w.terms]
    return min(mags) / max(mags)


def _residual(w, q, y) -> mpmath.mpf:
    return max(abs(g) for g in log_gradient(w, q, y))


def _accept(w, q, roots, band):
    kept, residuals = [], []
    for y in roots:
        res = _residual(w, q, y)
        if any(abs(yi) < band for yi in y):
            if res < RESIDUAL_TOL:
                raise SpuriousRootAmbiguity(f"root {[complex(v) for v in y]} lies in the discard band with small residual")
            continue
        if res >= RESIDUAL_TOL:
            continue
        if any(max(abs(mpmath.log(a / b)) for a, b in zip(y, other)) < mpmath.mpf(10) ** -8 for other in kept):
            continue
        kept.append(tuple(y))
        residuals.append(float(res))
    return kept, residuals


def solve_fixed_q(w: LaurentPotential, q) -> NumericCritSet:
    """All critical points in the torus of ``W`` at the given rational ``q``."""
    if w.n not in (1, 2):
        raise UnsupportedDimension(f"numerical solving supports n = 1, 2 (got {w.n})")
    qf = Fraction(q)
    with mp.workdps(DPS):
        qm = mpmath.mpf(qf.numerator) / qf.denominator
        R, s, ys, polys, L = _gradient_polys(w)
        sval = mpmath.root(qm, L)
        band = qm ** 2 * _scale(w, qm)
        candidates = []
        if w.n == 1:
            coeffs = _strip_zero_roots(_eval_univariate(polys[0], 1, {0: sval}))
            for z in aberth_roots(coeffs):
                u, _ = _newton_log(w, qm, [mpmath.log(z)])
                candidates.append((mpmath.exp(u[0]),))
        else:
            free = [f for f in polys if f.degree(2) == 0]
            res = free[0] if free else sylvester_resultant(polys[0], polys[1], 2)
            if not res:
                raise RootFindingFailure("the gradient polynomials share a common factor")
            coeffs = _strip_zero_roots(_eval_univariate(res, 1, {0: sval}))
            y1_roots = aberth_roots(coeffs)
            clusters: list = []
            for z in y1_roots:
                if not any(abs(z - c) <= mpmath.mpf(10) ** -20 * abs(c) for c in clusters):
                    clusters.append(z)
            for y1 in clusters:
                for f in polys:
                    if f.degree(2) < 1:
                        continue
                    cy = _strip_zero_roots(_eval_univariate(f, 2, {0: sval, 1: y1}))
                    if len(cy) < 2:
                        continue
                    for y2 in aberth_roots(cy):
                        u, _ = _newton_log(w, qm, [mpmath.log(y1), mpmath.log(y2)])
                        candidates.append(tuple(mpmath.exp(ui) for ui in u))
        kept, residuals = _accept(w, qm, candidates, band)
        order = sorted(range(len(kept)), key=lambda i: tuple((float(abs(v)), float(mpmath.arg(v))) for v in kept[i]))
        return NumericCritSet(qf, tuple(kept[i] for i in order), tuple(residuals[i] for i in order))


# --- valuations --------------------------------------------------------------

def _tangent(w: LaurentPotential, q, u):
    # du/dlog(q) along the critical branch, by the implicit function theorem
    vals = _term_values(w, q, u)
    n = w.n
    h = mpmath.matrix(n, n)
    for a in range(n):
        for b in range(n):
            h[a, b] = sum(v * t.exponent[a] * t.exponent[b] for v, t in zip(vals, w.terms))
    dg = mpmath.matrix([sum(v * t.exponent[i] * mpmath.mpf(t.qexp.numerator) / t.qexp.denominator
                            for v, t in zip(vals, w.terms)) for i in range(n)])
    sol = mpmath.lu_solve(h, dg)
    return [-sol[i] for i in range(n)]


def _continue_root(w: LaurentPotential, y, q1, q2, steps_per_decade: int = 10, max_halvings: int = 30):
    """Follow a critical point from ``q1`` to ``q2`` in log coordinates.

    Euler predictor along the tangent, Newton corrector; a step is halved
    whenever the corrector has to move further than a small trust radius.
    """
    lq, lq2 = mpmath.log(q1), mpmath.log(q2)
    base = (lq2 - lq) / max(1, int(mpmath.ceil(abs(lq2 - lq) / mpmath.log(10) * steps_per_decade)))
    u = [mpmath.log(v) for v in y]
    h = base
    halvings = 0
    while abs(lq2 - lq) > mpmath.mpf(10) ** -30:
        if abs(h) > abs(lq2 - lq):
            h = lq2 - lq
        du = _tangent(w, mpmath.exp(lq), u)
        guess = [a + h * d for a, d in zip(u, du)]
        new, ok = _newton_log(w, mpmath.exp(lq + h), guess, iters=20)
        if ok and max(abs(a - b) for a, b in zip(new, guess)) < mpmath.mpf(1) / 20:
            u, lq = new, lq + h
            h = base if abs(h) < abs(base) else h
            continue
        halvings += 1
        if halvings > max_halvings:
            raise MatchingAmbiguity("continuation between the two q samples failed")
        h /= 2
    return tuple(mpmath.exp(v) for v in u)


def estimate_valuations(w: LaurentPotential, q1, q2) -> list[ValuationEstimate]:
    """Slopes of ``log|y|`` against ``log q`` between two samples, with classification."""
    q1f, q2f = Fraction(q1), Fraction(q2)
    if not q1f > q2f > 0:
        raise ValueError("need q1 > q2 > 0")
    s1, s2 = solve_fixed_q(w, q1f), solve_fixed_q(w, q2f)
    if len(s1.roots) != len(s2.roots):
        raise MatchingAmbiguity(f"{len(s1.roots)} roots at q1 but {len(s2.roots)} at q2")
    out = []
    with mp.workdps(DPS):
        qa = mpmath.mpf(q1f.numerator) / q1f.denominator
        qb = mpmath.mpf(q2f.numerator) / q2f.denominator
        used: set[int] = set()
        for y in s1.roots:
            target = _continue_root(w, y, qa, qb)
            dists = sorted((max(abs(mpmath.log(a / b)) for a, b in zip(target, z)), i) for i, z in enumerate(s2.roots))
            best, idx = dists[0]
            if best > mpmath.mpf(10) ** -6 or idx in used or (len(dists) > 1 and dists[1][0] < 10 * best):
                raise MatchingAmbiguity(f"cannot match continued root {[complex(v) for v in target]}")
            used.add(idx)
            z = s2.roots[idx]
            zeta = tuple(float((mpmath.log(abs(a)) - mpmath.log(abs(b))) / (mpmath.log(qa) - mpmath.log(qb)))
                         for a, b in zip(y, z))
            emb = tuple(sum(zi * e for zi, e in zip(zeta, t.exponent)) + float(t.qexp) for t in w.terms)
            cls = POSITIVE if min(emb) > VALUATION_MARGIN else NOT_POSITIVE
            out.append(ValuationEstimate(zeta, emb, cls, tuple(complex(v) for v in y), tuple(complex(v) for v in z)))
    return out


def verify_against_tropical(estimates: Sequence[ValuationEstimate], report: TmmpReport, tol: float = VALUATION_MARGIN) -> VerificationTable:
    """Match Positive estimates to the predicted fiber points within ``tol`` (max-norm)."""
    preds: dict[tuple, int] = {}
    for fp in report.fibers:
        preds[fp.point] = preds.get(fp.point, 0) + fp.multiplicity
    points = list(preds)
    counts = {pt: 0 for pt in points}
    unmatched = []
    positives = [e for e in estimates if e.positive]
    for e in positives:
        dists = [(max(abs(z - float(c)) for z, c in zip(e.zeta, pt)), i) for i, pt in enumerate(points)]
        dists = [d for d in dists if d[0] <= tol]
        if not dists:
            unmatched.append(e)
            continue
        counts[points[min(dists)[1]]] += 1
    rows = tuple(MatchRow(pt, preds[pt], counts[pt]) for pt in points)
    return VerificationTable(rows, tuple(unmatched), len(positives), len(estimates) - len(positives))


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def crit_set_json(cs: NumericCritSet) -> dict:
    return {
        "q": f"{cs.q_value.numerator}/{cs.q_value.denominator}",
        "roots": [[{"re": _fmt(complex(z).real), "im": _fmt(complex(z).imag)} for z in r] for r in cs.roots],
        "residuals": [_fmt(x) for x in cs.residuals],
    }


def verification_json(estimates: Sequence[ValuationEstimate], table: VerificationTable) -> dict:
    from .exactmath import fmt_rat

    return {
        "estimates": [{"zeta": [_fmt(z) for z in e.zeta], "embedded": [_fmt(x) for x in e.embedded],
                       "classification": e.classification} for e in estimates],
        "matches": [{"point": [fmt_rat(x) for x in r.point], "multiplicity": r.multiplicity,
                     "matched": r.matched, "ok": r.ok} for r in table.rows],
        "unmatched": [[_fmt(z) for z in e.zeta] for e in table.unmatched],
        "positive": table.positive_count,
        "not_positive": table.not_positive_count,
        "mismatches": table.mismatches,
        "ok": table.ok,
    }
