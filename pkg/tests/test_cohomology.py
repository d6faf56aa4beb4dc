import itertools
import random
from fractions import Fraction

import pytest

from tmmp_engine import exactmath as em
from tmmp_engine import fixtures as fx
from tmmp_engine.cohomology import box_elements, build_fan, cone_box, quantum_dim, semifano_indicator
from tmmp_engine.errors import EmptyPolytope, NonSimplicialVertex
from tmmp_engine.polytope import HPolytope
from tmmp_engine.presentation import moment_polytope, residual

from conftest import random_unimodular, random_valid


def brute_box_count(rays):
    """Lattice points in the half-open parallelepiped of ``rays`` by enumeration."""
    n = len(rays)
    lo = [sum(min(0, r[i]) for r in rays) for i in range(n)]
    hi = [sum(max(0, r[i]) for r in rays) for i in range(n)]
    mat = [[r[i] for r in rays] for i in range(n)]
    count = 0
    for pt in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        c = em.solve_rational(mat, list(pt))
        if all(0 <= x < 1 for x in c):
            count += 1
    return count


EXPECTED = {  # name -> (dim QH, semi-Fano)
    "p1": (2, True), "p2": (3, True), "p3": (4, True), "p4": (5, True),
    "teardrop": (3, True), "stacky_point": (2, True), "p1xp1": (4, True),
    "p1_extra_term": (2, False), "p2_two_torus": (3, False), "blowup": (5, True),
    "hirzebruch2": (4, True), "hirzebruch3": (4, False), "hirzebruch4": (4, False), "flip3": (9, True),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_quantum_dim_fixtures(name):
    p = fx.ALL[name]()
    res = residual(p)
    poly = moment_polytope(p, res)
    dim, semi = EXPECTED[name]
    assert quantum_dim(poly, res.torsion) == dim
    assert semifano_indicator(poly, res.torsion) is semi
    if res.n:
        fan = build_fan(poly)
        assert sum(brute_box_count([fan.rays[j] for j in c.rays]) for c in fan.max_cones) == dim


def test_box_elements_against_enumeration():
    rng = random.Random(3)
    for _ in range(40):
        p, res, _ = random_valid(rng, 2, kmax=6)
        fan = build_fan(moment_polytope(p, res))
        boxes = box_elements(fan)
        for cone, box in zip(fan.max_cones, boxes):
            rays = [fan.rays[j] for j in cone.rays]
            assert len(box) == cone.multiplicity == brute_box_count(rays)
            assert len(set(box)) == len(box)
            for coeffs in box:
                assert all(0 <= x < 1 for x in coeffs)
                pt = [sum(c * r[i] for c, r in zip(coeffs, rays)) for i in range(2)]
                assert all(Fraction(x).denominator == 1 for x in pt)


def test_teardrop_sectors():
    fan = build_fan(moment_polytope(fx.teardrop()))
    sizes = sorted(len(b) for b in box_elements(fan))
    assert sizes == [1, 2]
    big = next(c for c in fan.max_cones if c.multiplicity == 2)
    assert sorted(cone_box(big)) == [(Fraction(0),), (Fraction(1, 2),)]


def test_fan_errors():
    nonsimple = HPolytope(2, ((1, 0), (0, 1), (-1, 0), (0, -1), (-1, -1)), (0, 0, 1, 1, 2))
    with pytest.raises(NonSimplicialVertex):
        build_fan(nonsimple)
    with pytest.raises(EmptyPolytope):
        build_fan(HPolytope(1, ((1,), (-1,)), (-2, 1)))


def test_gl_and_translation_invariance():
    rng = random.Random(8)
    for _ in range(30):
        p, res, _ = random_valid(rng, 2, kmax=7)
        poly = moment_polytope(p, res)
        qd = quantum_dim(poly)
        g = random_unimodular(rng, 2)
        gp = HPolytope(2, tuple(tuple(em.matvec(g, v)) for v in poly.normals), poly.constants)
        assert quantum_dim(gp) == qd
        c = [Fraction(rng.randint(-5, 5), 3), Fraction(rng.randint(-5, 5), 2)]
        tp = HPolytope(2, poly.normals, tuple(w + em.dot(c, v) for w, v in zip(poly.constants, poly.normals)))
        assert quantum_dim(tp) == qd
