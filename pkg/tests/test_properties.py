import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from tmmp_engine import exactmath as em
from tmmp_engine.cli import parse_rational
from tmmp_engine.cohomology import quantum_dim
from tmmp_engine.presentation import center, moment_polytope, residual
from tmmp_engine.tmmp import run_tmmp

from conftest import random_valid
from propcheck import check_one

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_surface_invariants(seed):
    rng = random.Random(seed)
    p, res, report = random_valid(rng, 2)
    assert check_one(p, res, report, rng) == []


@settings(max_examples=12, deadline=None)
@given(seeds)
def test_threefold_invariants(seed):
    rng = random.Random(seed)
    p, res, report = random_valid(rng, 3, kmax=7)
    assert check_one(p, res, report, rng) == []


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_centering_keeps_counts(seed):
    rng = random.Random(seed)
    p, res, report = random_valid(rng, 2, kmax=6)
    c = center(p, res)
    assert quantum_dim(moment_polytope(c, res)) == report.initial_dim
    moved = run_tmmp(c, residual(c))
    assert [(t.time, t.kind, t.jump) for t in moved.transitions] == [(t.time, t.kind, t.jump) for t in report.transitions]


@settings(max_examples=200)
@given(st.fractions())
def test_rational_text_roundtrip(x):
    assert parse_rational(em.fmt_rat(x), "x") == x
