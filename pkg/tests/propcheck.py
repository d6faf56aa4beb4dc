"""Invariant checks shared by the property tests and the acceptance run."""
import random
from fractions import Fraction

from tmmp_engine import exactmath as em
from tmmp_engine.cohomology import quantum_dim, semifano_indicator
from tmmp_engine.polytope import HPolytope
from tmmp_engine.potential import LaurentPotential, Term, build_potential, kouchnirenko_count
from tmmp_engine.presentation import moment_polytope
from tmmp_engine.tmmp import CONTRACTION, FLIP, check_ledger, run_tmmp_polytope

from conftest import random_unimodular, random_valid

SCALES = (Fraction(1, 2), Fraction(2), Fraction(3, 2), Fraction(5, 3))


def _signature(report, scale=Fraction(1)):
    return [(tr.time * scale, tr.kind, tr.jump) for tr in report.transitions]


def _ledger(report, scale=Fraction(1)):
    return sorted((e.time * scale, e.multiplicity, e.kind, tuple(b * scale for b in e.branch_times))
                  for e in report.ledger)


def _kouch(normals, torsion=()):
    w = LaurentPotential(len(normals[0]), tuple(Term(tuple(v), Fraction(0), 1, j) for j, v in enumerate(normals)))
    return kouchnirenko_count(w, torsion)


def check_one(p, res, report, rng: random.Random) -> list[str]:
    """Every invariant from the property suite on one presentation; returns failure notes."""
    fails = []
    poly = moment_polytope(p, res)
    qd = quantum_dim(poly, res.torsion)
    kc = kouchnirenko_count(build_potential(res, p.support), res.torsion)

    # (i) ledger conservation
    chk = check_ledger(report)
    if not chk.ok or chk.total != qd or report.initial_dim != qd:
        fails.append(f"ledger {chk.total} vs dim {qd}: {chk.notes}")
    if sum(e.multiplicity for e in report.ledger) != qd:
        fails.append("flattened ledger does not sum to dim QH")

    # (ii) Kouchnirenko bound and the semi-Fano indicator
    if kc < qd:
        fails.append(f"Kouchnirenko {kc} < dim {qd}")
    if semifano_indicator(poly, res.torsion) != (kc == qd):
        fails.append("semi-Fano indicator disagrees with K == dim")

    # (iii) strict decrease across flips and contractions
    walls = [tr for tr in report.transitions if tr.kind in (FLIP, CONTRACTION)]
    for before, after, tr in zip(report.chambers, report.chambers[1:], walls):
        if not after.dim < before.dim or before.dim - after.dim != tr.jump:
            fails.append(f"no strict drop at t = {tr.time}")
    times = [tr.time for tr in report.transitions]
    if times != sorted(set(times)):
        fails.append("wall times not strictly increasing")

    # (iv) GL(n, Z) change of lattice basis
    n = poly.n
    g = random_unimodular(rng, n)
    gpoly = HPolytope(n, tuple(tuple(em.matvec(g, v)) for v in poly.normals), poly.constants)
    grep = run_tmmp_polytope(gpoly, res.torsion)
    if _signature(grep) != _signature(report) or _ledger(grep) != _ledger(report):
        fails.append("program not GL(n,Z) invariant")
    if quantum_dim(gpoly, res.torsion) != qd:
        fails.append("quantum_dim not GL(n,Z) invariant")
    if _kouch(gpoly.normals, res.torsion) != kc:
        fails.append("Kouchnirenko count not GL(n,Z) invariant")
    gt = em.transpose(g)
    for a, b in zip(report.transitions, grep.transitions):
        if tuple(em.matvec(gt, b.point)) != a.point:
            fails.append("wall point does not transform contragrediently")
            break

    # (iv) translation of the support constants
    c = [Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))) for _ in range(n)]
    tpoly = HPolytope(n, poly.normals, tuple(w + em.dot(c, v) for w, v in zip(poly.constants, poly.normals)))
    trep = run_tmmp_polytope(tpoly, res.torsion)
    if _signature(trep) != _signature(report) or quantum_dim(tpoly, res.torsion) != qd:
        fails.append("program not translation invariant")
    for a, b in zip(report.transitions, trep.transitions):
        if tuple(x - y for x, y in zip(a.point, c)) != b.point:
            fails.append("wall point does not translate by -c")
            break
    if _kouch(poly.normals, res.torsion) != kc:
        fails.append("Kouchnirenko count depends on support constants")

    # (iv) scaling of the support
    lam = rng.choice(SCALES)
    spoly = HPolytope(n, poly.normals, tuple(lam * w for w in poly.constants))
    srep = run_tmmp_polytope(spoly, res.torsion)
    if _signature(srep) != _signature(report, lam) or _ledger(srep) != _ledger(report, lam):
        fails.append(f"program not scaling covariant (lambda = {lam})")
    for a, b in zip(report.transitions, srep.transitions):
        if tuple(lam * x for x in a.point) != b.point:
            fails.append("wall point does not scale")
            break
    return fails


def sweep(n: int, count: int, seed: int) -> tuple[int, list[str]]:
    rng = random.Random(seed)
    failures = []
    for i in range(count):
        p, res, report = random_valid(rng, n)
        for f in check_one(p, res, report, rng):
            failures.append(f"n={n} #{i} weights={p.weights} support={[str(x) for x in p.support]}: {f}")
    return count, failures
