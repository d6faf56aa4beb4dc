import random
from fractions import Fraction
from pathlib import Path

from tmmp_engine import exactmath as em
from tmmp_engine.errors import TmmpError
from tmmp_engine.presentation import Presentation, residual, validate
from tmmp_engine.tmmp import run_tmmp

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"
DENOMS = (1, 2, 3, 4, 5, 7)


def presentation_from_normals(normals, support, name=""):
    """Weights whose residual normals are (a lattice basis change of) ``normals``."""
    weights = em.left_kernel_basis([list(v) for v in normals])
    return Presentation(tuple(tuple(r) for r in weights), tuple(support), name=name)


def random_valid(rng: random.Random, n: int, kmax: int = 8, span: int = 3, max_tries: int = 400):
    """A presentation that validates and whose program runs, plus its residual and report."""
    for _ in range(max_tries):
        k = rng.randint(n + 1, kmax)
        normals = [tuple(rng.randint(-span, span) for _ in range(n)) for _ in range(k)]
        if any(not any(v) for v in normals) or em.rank(normals) < n:
            continue
        support = [Fraction(rng.randint(1, 24), rng.choice(DENOMS)) for _ in range(k)]
        p = presentation_from_normals(normals, support)
        try:
            validate(p)
            res = residual(p)
            return p, res, run_tmmp(p, res)
        except TmmpError:
            continue
    raise RuntimeError("no valid random presentation found")


def random_unimodular(rng: random.Random, n: int, steps: int = 6):
    g = em.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            g = [[-x for x in row] for row in g]
            continue
        c = rng.choice((-2, -1, 1, 2))
        g[i] = [a + c * b for a, b in zip(g[i], g[j])]
    return g


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
