"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

sys.path.insert(0, str(Path(__file__).resolve().parent))

from tmmp_engine import fixtures as fx  # noqa: E402
from tmmp_engine import numeric as nm  # noqa: E402
from tmmp_engine.cohomology import build_fan, quantum_dim  # noqa: E402
from tmmp_engine.potential import build_potential, kouchnirenko_count  # noqa: E402
from tmmp_engine.presentation import moment_polytope, residual  # noqa: E402
from tmmp_engine.relations import qsr_relation, relation_expr, substitution_identity, suggested_degrees  # noqa: E402
from tmmp_engine.tmmp import CONTRACTION, FIBRATION, FIBRATION_OVER_POINT, check_ledger, run_tmmp  # noqa: E402

from propcheck import sweep  # noqa: E402

VALUATION_TOL = 0.05
RESIDUAL_TOL = 1e-10
Q1, Q2 = Fraction(1, 10**4), Fraction(1, 10**5)
XI, Q = sympy.Symbol("xi"), sympy.Symbol("q")
H = Fraction(1, 2)

RESULTS: list[str] = []


def analyze(p):
    res = residual(p)
    qd = quantum_dim(moment_polytope(p, res), res.torsion)
    kc = kouchnirenko_count(build_potential(res, p.support), res.torsion)
    return res, qd, kc


def relations(p, res):
    fan = build_fan(moment_polytope(p, res))
    return [qsr_relation(p, d) for d in suggested_degrees(fan, p)]


def crit_1():
    bad = []
    for k in range(2, 6):
        for c in (Fraction(1), Fraction(5, 2)):
            p = fx.projective_space(k, c)
            res, qd, kc = analyze(p)
            rels = relations(p, res)
            want = XI ** k - Q ** sympy.Rational(c.numerator, c.denominator)
            rel_ok = len(rels) == 1 and sympy.expand(relation_expr(rels[0], p, Q, [XI]) - want) == 0
            rep = run_tmmp(p, res)
            prog = [(t.kind, t.jump) for t in rep.transitions]
            if (qd, kc) != (k, k) or not rel_ok or prog != [(FIBRATION_OVER_POINT, k)]:
                bad.append(f"k={k} c={c}: dim {qd}, K {kc}, relation {rel_ok}, program {prog}")
    return not bad, "; ".join(bad) or "dim QH = K = k, xi^k - q^c, one FibrationOverPoint with jump k (k = 2..5)"


def crit_2():
    p = fx.teardrop()
    res, qd, kc = analyze(p)
    (rel,) = relations(p, res)
    expr = relation_expr(rel, p, Q, [XI])
    ok = qd == 3 and kc == 3 and expr == XI * (2 * XI) ** 2 - Q ** 3
    return ok, f"dim QH = {qd}, K = {kc}, relation {expr}"


def crit_3():
    p = fx.stacky_point()
    res, qd, _ = analyze(p)
    return res.n == 0 and res.torsion == (2,) and qd == 2, f"n = {res.n}, torsion {list(res.torsion)}, dim QH = {qd}"


def crit_4():
    p = fx.p2_two_torus()
    res, qd, kc = analyze(p)
    est = nm.estimate_valuations(build_potential(res, p.support), Q1, Q2)
    rep = run_tmmp(p, res)
    table = nm.verify_against_tropical(est, rep, VALUATION_TOL)
    (point,) = [f.point for f in rep.fibers]
    near = [e for e in est if e.positive and max(abs(z - float(c)) for z, c in zip(e.zeta, point)) <= VALUATION_TOL]
    ok = (kc == 5 and qd == 3 and len(est) == 5 and table.positive_count == 3 and len(near) == 3
          and table.not_positive_count == 2 and table.ok)
    return ok, (f"K = {kc}, dim QH = {qd}, {len(est)} roots: {table.positive_count} Positive "
                f"({len(near)} within {VALUATION_TOL} of {[str(x) for x in point]}), {table.not_positive_count} NotPositive")


def crit_5():
    p = fx.blowup()
    res, qd, _ = analyze(p)
    rep = run_tmmp(p, res)
    t1, t2 = rep.transitions
    first_ok = (t1.time, t1.kind, t1.point, t1.jump) == (H, CONTRACTION, (H, H), 1)
    second_ok = t2.time == 1 and t2.kind == FIBRATION and t2.fiber.dim == 2 and t2.base.initial_dim == 2
    ledger = sum(e.multiplicity for e in rep.ledger)
    chk = check_ledger(rep)
    est = nm.estimate_valuations(build_potential(res, p.support), Q1, Q2)
    table = nm.verify_against_tropical(est, rep, VALUATION_TOL)
    matched = {r.point: r.matched for r in table.rows}
    num_ok = table.ok and matched.get((H, H)) == 1 and matched.get((Fraction(2), Fraction(1))) == 4
    ok = first_ok and second_ok and ledger == 5 == qd and chk.ok and num_ok
    return ok, (f"t1 = {t1.time} {t1.kind} at ({', '.join(map(str, t1.point))}) jump {t1.jump}; "
                f"t2 = {t2.time} {t2.kind}; ledger {t1.jump} + {t2.fiber.dim}x{t2.base.initial_dim} = {ledger}, "
                f"dim QH = {qd}; roots matched {matched.get((H, H))} near (1/2,1/2), "
                f"{matched.get((Fraction(2), Fraction(1)))} near (2,1)")


def crit_6():
    bad, parts = [], []
    for n in (2, 3, 4):
        p = fx.hirzebruch(n)
        res, qd, kc = analyze(p)
        ledger = sum(e.multiplicity for e in run_tmmp(p, res).ledger)
        parts.append(f"n={n}: K {kc} (want {2 + 2 * n}), dim {qd}, ledger {ledger}")
        if kc != 2 + 2 * n or qd != 4 or ledger != 4:
            bad.append(n)
    return not bad, "; ".join(parts)


def crit_7():
    n2, f2 = sweep(2, 500, seed=20240917)
    n3, f3 = sweep(3, 50, seed=20240918)
    fails = f2 + f3
    return not fails, f"{n2} surfaces + {n3} threefolds, {len(fails)} failures" + (f": {fails[:3]}" if fails else "")


def crit_8():
    checked, bad, skipped = 0, [], []
    for name in sorted(fx.ALL):
        p = fx.ALL[name]()
        res = residual(p)
        if res.n == 0:
            skipped.append(name)
            continue
        for rel in relations(p, res):
            checked += 1
            if not substitution_identity(rel, p, res):
                bad.append(f"{name} d={[str(x) for x in rel.d]}")
    detail = f"{checked} relations over {len(fx.ALL) - len(skipped)} fixtures identical after substitution"
    if skipped:
        detail += f" (no fan for n = 0: {', '.join(skipped)})"
    return not bad, detail + (f"; failures {bad}" if bad else "")


def crit_9():
    bad, count, no_torus = [], 0, []
    for name in sorted(fx.ALL):
        p = fx.ALL[name]()
        res = residual(p)
        if res.n == 0:
            no_torus.append(name)
            continue
        if res.n > 2:
            continue
        w = build_potential(res, p.support)
        kc = kouchnirenko_count(w, res.torsion)
        for q in (Fraction(1, 1000), Fraction(1, 10000)):
            cs = nm.solve_fixed_q(w, q)
            count += 1
            worst = max(cs.residuals)
            if len(cs.roots) != kc or worst >= RESIDUAL_TOL:
                bad.append(f"{name} q={q}: {len(cs.roots)} roots vs K {kc}, max residual {worst:.1e}")
    detail = f"{count} solves, root count = K with residual < {RESIDUAL_TOL}"
    if no_torus:
        detail += f" (nothing to solve for n = 0: {', '.join(no_torus)})"
    return not bad, detail + (f"; failures {bad}" if bad else "")


CRITERIA = [crit_1, crit_2, crit_3, crit_4, crit_5, crit_6, crit_7, crit_8, crit_9]


def run_criterion(i):
    start = time.perf_counter()
    try:
        ok, detail = CRITERIA[i - 1]()
    except Exception as exc:  # a crash is a failure, reported like any other
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"{'PASS' if ok else 'FAIL'} criterion {i}: {detail} [{time.perf_counter() - start:.1f}s]"
    RESULTS.append(line)
    print(line)
    return ok, line


@pytest.mark.parametrize("i", range(1, len(CRITERIA) + 1))
def test_criterion(i):
    ok, line = run_criterion(i)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(i)[0] for i in range(1, len(CRITERIA) + 1)]
    sys.exit(0 if all(results) else 1)
