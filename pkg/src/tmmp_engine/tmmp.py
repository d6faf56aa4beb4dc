"""The anticanonical toric minimal model program.

Every support constant is lowered at unit speed, ``omega_j - t``.  Because the
flow is affine in ``t``, all combinatorial events are vertices of the lifted
polytope in ``(mu, t)``-space: vertices with ``0 < t < t_max`` are walls, and
the face where ``t`` is maximal is the terminal fibration.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from . import exactmath as em
from .cohomology import quantum_dim
from .errors import DegenerateSimplex, NonGenericClass, NonSimplicialVertex, SingularMatrix
from .polytope import HPolytope, lifted_polytope, simplex_normalized_volume, solve_polytope
from .presentation import Presentation, ResidualData, moment_polytope

FLIP = "Flip"
CONTRACTION = "DivisorialContraction"
FIBRATION = "Fibration"
FIBRATION_OVER_POINT = "FibrationOverPoint"
NON_DISPLACEABLE = "predicted non-displaceable"

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class Classification:
    kind: str
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None
    jump: int


@dataclass(frozen=True)
class FiberData:
    indices: tuple[int, ...]  # presentation indices tight on the whole terminal face
    rank: int
    dim: int  # quantum dimension of the monotone fiber
    base_map: tuple[tuple[int, ...], ...]
    face_center: Point
    base_indices: tuple[int, ...]
    dropped: tuple[int, ...]


@dataclass(frozen=True)
class Transition:
    time: Fraction
    point: Point
    active: tuple[int, ...]
    kind: str
    jump: int
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    fiber: FiberData | None = None
    base: "TmmpReport | None" = None


@dataclass(frozen=True)
class LedgerEntry:
    time: Fraction
    multiplicity: int
    kind: str
    branch_times: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class FiberPrediction:
    point: Point
    multiplicity: int
    label: str = NON_DISPLACEABLE


@dataclass(frozen=True)
class Chamber:
    start: Fraction
    end: Fraction
    dim: int


@dataclass(frozen=True)
class TmmpReport:
    n: int
    indices: tuple[int, ...]
    initial_dim: int
    t_max: Fraction
    transitions: tuple[Transition, ...]
    chambers: tuple[Chamber, ...]
    ledger: tuple[LedgerEntry, ...]
    eigen_valuations: tuple[tuple[Fraction, int], ...]
    fibers: tuple[FiberPrediction, ...]


@dataclass(frozen=True)
class LedgerCheck:
    ok: bool
    initial_dim: int
    total: int
    crit_plus_total: int
    chamber_drops_ok: bool
    discrepancy: int
    notes: tuple[str, ...] = ()


def perturbation_suggestion(support: Sequence[Fraction], delta: Fraction = Fraction(1, 1000)) -> tuple[Fraction, ...]:
    return tuple(w + (j + 1) * delta for j, w in enumerate(support))


def _non_generic(msg: str, support) -> NonGenericClass:
    sugg = perturbation_suggestion(support)
    return NonGenericClass(
        f"{msg}; try support ({', '.join(em.fmt_rat(x) for x in sugg)})", suggestion=sugg
    )


def classify_transition(s: Sequence[int], normals: Sequence[Sequence[int]]) -> Classification:
    """Kind, partition and jump for an active set of ``n + 1`` normals.

    ``I+`` collects the vertices whose opposite facet of the flipping simplex
    has a supporting half-space missing the origin; these are the cones that
    exist after the wall.
    """
    s = sorted(s)
    pts = [tuple(normals[j]) for j in s]
    n = len(pts[0]) if pts else 0
    if len(pts) != n + 1:
        raise ValueError(f"expected {n + 1} active normals, got {len(pts)}")
    jump = simplex_normalized_volume(pts)
    if jump == 0:
        raise DegenerateSimplex(f"flipping simplex on {s} has zero volume")
    mat = [[pt[i] for pt in pts] for i in range(n)] + [[1] * (n + 1)]
    lam = em.solve_rational(mat, [0] * n + [1])
    plus = tuple(j for j, x in zip(s, lam) if x < 0)
    minus = tuple(j for j, x in zip(s, lam) if x >= 0)
    if not plus:
        return Classification(FIBRATION_OVER_POINT, None, jump)
    kind = CONTRACTION if len(plus) == 1 or len(minus) == 1 else FLIP
    return Classification(kind, (plus, minus), jump)


def _solve_in_rows(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction]:
    # coefficients a with sum a_i basis_i = v
    cols = len(basis)
    eqs = [[basis[i][c] for i in range(cols)] for c in range(len(v))]
    chosen: list[int] = []
    for c in range(len(v)):
        if em.rank([eqs[i] for i in chosen + [c]]) == len(chosen) + 1:
            chosen.append(c)
    a = em.solve_rational([eqs[c] for c in chosen], [v[c] for c in chosen])
    assert all(em.dot(a, eqs[c]) == v[c] for c in range(len(v)))
    return a


def _terminal_fibration(poly: HPolytope, t_max: Fraction, face_pts: list[Point],
                        face_active: list[frozenset[int]], indices: Sequence[int], depth: int):
    n = poly.n
    s_f = sorted(frozenset.intersection(*face_active))
    fiber_rays = [poly.normals[j] for j in s_f]
    f = em.rank(fiber_rays)
    assert em.affine_rank(face_pts) == n - f
    mu0 = tuple(sum((pt[i] for pt in face_pts), Fraction(0)) / len(face_pts) for i in range(n))
    b = em.left_kernel_basis([[v[i] for v in fiber_rays] for i in range(n)])
    assert len(b) == n - f

    # fiber lattice: saturation of the span of the fiber rays
    k_basis = em.left_kernel_basis([[row[i] for row in b] for i in range(n)])
    fib_coords = []
    for v in fiber_rays:
        a = _solve_in_rows(k_basis, v)
        assert all(x.denominator == 1 for x in a)
        fib_coords.append(tuple(int(x) for x in a))
    fiber_poly = HPolytope(f, tuple(fib_coords), tuple(Fraction(1) for _ in fib_coords))
    fiber_dim = quantum_dim(fiber_poly)

    base_normals, base_consts, base_idx, dropped = [], [], [], []
    for j in range(poly.m):
        if j in s_f:
            continue
        img = tuple(em.dot(row, poly.normals[j]) for row in b)
        const = poly.constants[j] - t_max + em.dot(mu0, poly.normals[j])
        if not any(img):
            assert const > 0, "an inequality constant along the face must be slack"
            dropped.append(indices[j])
            continue
        base_normals.append(img)
        base_consts.append(const)
        base_idx.append(indices[j])
    base_poly = HPolytope(n - f, tuple(base_normals), tuple(base_consts))
    base = _run(base_poly, (), tuple(base_idx), depth + 1)
    fiber = FiberData(
        indices=tuple(indices[j] for j in s_f),
        rank=f,
        dim=fiber_dim,
        base_map=tuple(tuple(row) for row in b),
        face_center=mu0,
        base_indices=tuple(base_idx),
        dropped=tuple(dropped),
    )

    def lift(c: Point) -> Point:
        return tuple(mu0[i] + sum((c[r] * b[r][i] for r in range(len(b))), Fraction(0)) for i in range(n))

    return fiber, base, lift


def _run(poly: HPolytope, torsion: Sequence[int], indices: Sequence[int], depth: int) -> TmmpReport:
    n, m = poly.n, poly.m
    if n == 0:
        t_max = min(poly.constants)
        d = prod(torsion) if torsion else 1
        active = tuple(indices[j] for j in range(m) if poly.constants[j] == t_max)
        tr = Transition(t_max, (), active, FIBRATION_OVER_POINT, d)
        return TmmpReport(0, tuple(indices), d, t_max, (tr,), (Chamber(Fraction(0), t_max, d),),
                          (LedgerEntry(t_max, d, FIBRATION_OVER_POINT),), ((t_max, d),),
                          (FiberPrediction((), d),))

    initial_dim = quantum_dim(poly)
    lifted = solve_polytope(lifted_polytope(poly))
    t_max = max(v.point[-1] for v in lifted.vertices)
    walls = sorted((v for v in lifted.vertices if 0 < v.point[-1] < t_max), key=lambda v: v.point[-1])
    for v in walls:
        if len(v.active) != n + 1:
            raise _non_generic(f"wall at t = {em.fmt_rat(v.point[-1])} has {len(v.active)} active "
                               f"inequalities (expected {n + 1})", poly.constants)
    times = [v.point[-1] for v in walls]
    if len(set(times)) != len(times):
        raise _non_generic("two walls occur at the same time", poly.constants)

    bounds = [Fraction(0)] + times + [t_max]
    chambers = []
    for lo, hi in zip(bounds, bounds[1:]):
        mid = (lo + hi) / 2
        try:
            chambers.append(Chamber(lo, hi, quantum_dim(poly.shifted(mid))))
        except NonSimplicialVertex as exc:
            raise _non_generic(f"non-simple slice at t = {em.fmt_rat(mid)} ({exc})", poly.constants) from exc

    transitions, ledger, fibers = [], [], []
    for v in walls:
        t = v.point[-1]
        s = sorted(v.active)
        cls = classify_transition(s, poly.normals)
        if cls.kind == FIBRATION_OVER_POINT:
            raise _non_generic(f"origin in the flipping simplex before the terminal time", poly.constants)
        psi = v.point[:-1]
        glob = tuple(indices[j] for j in s)
        part = tuple(tuple(indices[j] for j in side) for side in cls.partition)
        transitions.append(Transition(t, psi, glob, cls.kind, cls.jump, part))
        ledger.append(LedgerEntry(t, cls.jump, cls.kind))
        fibers.append(FiberPrediction(psi, cls.jump))

    face = [v for v in lifted.vertices if v.point[-1] == t_max]
    face_pts = [v.point[:-1] for v in face]
    last_dim = chambers[-1].dim
    if len(face) == 1:
        psi = face_pts[0]
        act = tuple(indices[j] for j in sorted(face[0].active))
        partition = None
        transitions.append(Transition(t_max, psi, act, FIBRATION_OVER_POINT, last_dim, partition))
        ledger.append(LedgerEntry(t_max, last_dim, FIBRATION_OVER_POINT))
        fibers.append(FiberPrediction(psi, last_dim))
    else:
        fiber, base, lift = _terminal_fibration(poly, t_max, face_pts, [v.active for v in face], indices, depth)
        transitions.append(Transition(t_max, fiber.face_center, fiber.indices, FIBRATION,
                                      fiber.dim * base.initial_dim, None, fiber, base))
        for e in base.ledger:
            ledger.append(LedgerEntry(t_max, fiber.dim * e.multiplicity, e.kind, (e.time,) + e.branch_times))
        for fp in base.fibers:
            fibers.append(FiberPrediction(lift(fp.point), fiber.dim * fp.multiplicity))

    return TmmpReport(
        n=n,
        indices=tuple(indices),
        initial_dim=initial_dim,
        t_max=t_max,
        transitions=tuple(transitions),
        chambers=tuple(chambers),
        ledger=tuple(ledger),
        eigen_valuations=tuple((tr.time, tr.jump) for tr in transitions),
        fibers=tuple(fibers),
    )


def run_tmmp(p: Presentation, res: ResidualData) -> TmmpReport:
    return run_tmmp_polytope(moment_polytope(p, res), res.torsion)


def run_tmmp_polytope(poly: HPolytope, torsion: Sequence[int] = ()) -> TmmpReport:
    return _run(poly, tuple(torsion), tuple(range(poly.m)), 0)


def _expanded_total(report: TmmpReport) -> int:
    total = 0
    for tr in report.transitions:
        if tr.kind == FIBRATION:
            total += tr.fiber.dim * _expanded_total(tr.base)
        else:
            total += tr.jump
    return total


def _chamber_drops(report: TmmpReport) -> list[str]:
    notes = []
    walls = [tr for tr in report.transitions if tr.kind in (FLIP, CONTRACTION)]
    for before, after, tr in zip(report.chambers, report.chambers[1:], walls):
        if before.dim - after.dim != tr.jump:
            notes.append(f"dimension drop {before.dim} -> {after.dim} at t = {em.fmt_rat(tr.time)} "
                         f"differs from jump {tr.jump}")
    last = report.transitions[-1]
    if report.chambers and last.kind in (FIBRATION, FIBRATION_OVER_POINT) and last.jump != report.chambers[-1].dim:
        notes.append(f"terminal jump {last.jump} differs from last chamber dimension {report.chambers[-1].dim}")
    if report.chambers and report.chambers[0].dim != report.initial_dim:
        notes.append("first chamber dimension differs from the initial dimension")
    for tr in report.transitions:
        if tr.kind == FIBRATION:
            notes.extend(_chamber_drops(tr.base))
    return notes


def check_ledger(report: TmmpReport) -> LedgerCheck:
    """Conservation of dimension across the program, plus interior-point bookkeeping."""
    total = _expanded_total(report)
    crit_plus = sum(fp.multiplicity for fp in report.fibers)
    ledger_total = sum(e.multiplicity for e in report.ledger)
    notes = _chamber_drops(report)
    if ledger_total != total:
        notes.append(f"flattened ledger {ledger_total} differs from expanded total {total}")
    ok = total == report.initial_dim and crit_plus == report.initial_dim and not notes
    return LedgerCheck(
        ok=ok,
        initial_dim=report.initial_dim,
        total=total,
        crit_plus_total=crit_plus,
        chamber_drops_ok=not any("drop" in x or "chamber" in x for x in notes),
        discrepancy=report.initial_dim - total,
        notes=tuple(notes),
    )


def _pt(p: Point) -> list[str]:
    return [em.fmt_rat(x) for x in p]


def report_json(report: TmmpReport) -> dict:
    def transition(tr: Transition) -> dict:
        out = {
            "time": em.fmt_rat(tr.time),
            "point": _pt(tr.point),
            "kind": tr.kind,
            "active": list(tr.active),
            "jump": tr.jump,
            "partition": None if tr.partition is None else {"plus": list(tr.partition[0]), "minus": list(tr.partition[1])},
        }
        if tr.fiber is not None:
            out["fiber"] = {
                "indices": list(tr.fiber.indices),
                "rank": tr.fiber.rank,
                "dim": tr.fiber.dim,
                "base_map": [list(r) for r in tr.fiber.base_map],
                "face_center": _pt(tr.fiber.face_center),
                "base_indices": list(tr.fiber.base_indices),
                "dropped": list(tr.fiber.dropped),
            }
            out["base"] = report_json(tr.base)
        return out

    return {
        "n": report.n,
        "initial_dim": report.initial_dim,
        "t_max": em.fmt_rat(report.t_max),
        "transitions": [transition(tr) for tr in report.transitions],
        "chambers": [{"start": em.fmt_rat(c.start), "end": em.fmt_rat(c.end), "dim": c.dim} for c in report.chambers],
        "ledger": [{"time": em.fmt_rat(e.time), "multiplicity": e.multiplicity, "kind": e.kind,
                    "branch_times": [em.fmt_rat(x) for x in e.branch_times]} for e in report.ledger],
        "eigen_valuations": [{"time": em.fmt_rat(t), "multiplicity": d} for t, d in report.eigen_valuations],
        "fibers": [{"point": _pt(fp.point), "multiplicity": fp.multiplicity, "label": fp.label} for fp in report.fibers],
    }
