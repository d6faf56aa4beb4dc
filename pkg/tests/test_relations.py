import random
from fractions import Fraction

import pytest
import sympy

from tmmp_engine import fixtures as fx
from tmmp_engine.cohomology import build_fan
from tmmp_engine.errors import NonIntegralPairing
from tmmp_engine.presentation import moment_polytope, residual
from tmmp_engine.relations import (
    pairings_for, primitive_collections, qsr_relation, relation_expr, relation_json, render_relation,
    substitution_identity, substitution_monomials, suggested_degrees,
)

from conftest import random_valid

XI, Q = sympy.Symbol("xi"), sympy.Symbol("q")
FAN_FIXTURES = sorted(k for k in fx.ALL if k != "stacky_point")


def relations_of(p):
    res = residual(p)
    fan = build_fan(moment_polytope(p, res))
    return res, fan, [qsr_relation(p, d) for d in suggested_degrees(fan, p)]


@pytest.mark.parametrize("k", [2, 3, 4, 5])
@pytest.mark.parametrize("c", [1, Fraction(3, 2)])
def test_projective_space_relation(k, c):
    p = fx.projective_space(k, c)
    _, _, rels = relations_of(p)
    assert len(rels) == 1
    assert sympy.expand(relation_expr(rels[0], p, Q, [XI]) - (XI ** k - Q ** sympy.nsimplify(c))) == 0


def test_teardrop_relation():
    p = fx.teardrop()
    _, _, rels = relations_of(p)
    assert relation_expr(rels[0], p, Q, [XI]) == XI * (2 * XI) ** 2 - Q ** 3
    assert render_relation(rels[0], p) == "x1*x2^2 - q^(3)"


@pytest.mark.parametrize("name", FAN_FIXTURES)
def test_relation_invariants(name):
    p = fx.ALL[name]()
    res, fan, rels = relations_of(p)
    assert rels
    for rel in rels:
        pair = pairings_for(p, rel.d)
        assert all(l - r == a for l, r, a in zip(rel.left, rel.right, pair))
        assert all(e >= 0 for e in rel.left + rel.right)
        assert all(min(l, r) == 0 for l, r in zip(rel.left, rel.right))
        assert rel.qexp == sum(a * w for a, w in zip(pair, p.support))
        assert substitution_identity(rel, p, res)
        (ql, yl), (qr, yr) = substitution_monomials(rel, p, res)
        assert ql == qr and yl == yr
        doc = relation_json(rel, p)
        assert doc["d"] == [str(x) for x in rel.d]


def test_primitive_collections_blowup():
    p = fx.blowup()
    res = residual(p)
    fan = build_fan(moment_polytope(p, res))
    colls = sorted(sorted(c) for c in primitive_collections(fan, p.k))
    # pentagon: the non-adjacent pairs
    assert colls == [[0, 2], [0, 4], [1, 3], [1, 4], [2, 3]]


def test_spurious_index_is_singleton_collection():
    p = fx.p2_two_torus()
    res = residual(p)
    fan = build_fan(moment_polytope(p, res))
    assert frozenset({3}) in primitive_collections(fan, p.k)


def test_non_integral_pairing():
    with pytest.raises(NonIntegralPairing):
        qsr_relation(fx.teardrop(), [Fraction(1, 3)])


def test_substitution_identity_random():
    rng = random.Random(17)
    for _ in range(25):
        p, res, _ = random_valid(rng, 2, kmax=6)
        fan = build_fan(moment_polytope(p, res))
        for d in suggested_degrees(fan, p):
            assert substitution_identity(qsr_relation(p, d), p, res)
