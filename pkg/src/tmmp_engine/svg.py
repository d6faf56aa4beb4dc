"""Static SVG frames of the shrinking polytope along the program (surfaces only)."""
from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

from . import exactmath as em
from .errors import UnsupportedDimension
from .polytope import HPolytope, solve_polytope
from .tmmp import TmmpReport

WIDTH, HEIGHT, MARGIN = 800, 600, 50


def frame_times(report: TmmpReport) -> list[Fraction]:
    walls = [tr.time for tr in report.transitions if tr.time < report.t_max]
    bounds = [Fraction(0)] + walls + [report.t_max]
    gap = min(b - a for a, b in zip(bounds, bounds[1:])) if len(bounds) > 1 else Fraction(1)
    eps = gap / 4
    times = [Fraction(0)]
    for t in walls:
        times += [t - eps, t + eps]
    times.append(report.t_max)
    return sorted(set(times))


def _ordered(points):
    if len(points) < 3:
        return points
    cx = sum(float(p[0]) for p in points) / len(points)
    cy = sum(float(p[1]) for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx))


def _render(poly: HPolytope, t: Fraction, report: TmmpReport, box, labels) -> str:
    (x0, y0), (x1, y1) = box
    sx = (WIDTH - 2 * MARGIN) / max(x1 - x0, 1e-9)
    sy = (HEIGHT - 2 * MARGIN) / max(y1 - y0, 1e-9)
    scale = min(sx, sy)

    def tx(p):
        return MARGIN + (float(p[0]) - x0) * scale, HEIGHT - MARGIN - (float(p[1]) - y0) * scale

    comb = solve_polytope(poly.shifted(t))
    pts = _ordered(comb.vertex_points())
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
           f'<text x="{MARGIN}" y="{MARGIN // 2}" font-size="16">t = {em.fmt_rat(t)}</text>']
    if len(pts) >= 3:
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(tx, pts))
        out.append(f'<polygon points="{path}" fill="#dde8f5" stroke="#1f4e79" stroke-width="2"/>')
        for j in sorted(comb.facet_indices):
            on = [v.point for v in comb.vertices if j in v.active]
            mx = sum(float(p[0]) for p in on) / len(on)
            my = sum(float(p[1]) for p in on) / len(on)
            x, y = tx((mx, my))
            out.append(f'<text x="{x:.2f}" y="{y:.2f}" font-size="12" fill="#444">{labels[j]}</text>')
    elif len(pts) == 2:
        (ax, ay), (bx, by) = map(tx, pts)
        out.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" stroke="#1f4e79" stroke-width="3"/>')
    for tr in report.transitions:
        if tr.time <= t:
            x, y = tx(tr.point)
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="#c0392b"/>')
            out.append(f'<text x="{x + 7:.2f}" y="{y - 7:.2f}" font-size="11" fill="#c0392b">{tr.kind} t={em.fmt_rat(tr.time)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(report: TmmpReport, poly: HPolytope, out_dir, labels=None) -> list[Path]:
    """Write one SVG per sampled time (start, both sides of every wall, terminal)."""
    if poly.n != 2:
        raise UnsupportedDimension(f"SVG output needs a surface (n = 2), got n = {poly.n}")
    labels = labels or [str(j + 1) for j in range(poly.m)]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pts = solve_polytope(poly).vertex_points()
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    box = ((min(xs), min(ys)), (max(xs), max(ys)))
    paths = []
    for i, t in enumerate(frame_times(report)):
        path = out_dir / f"frame_{i:02d}.svg"
        path.write_text(_render(poly, t, report, box, labels))
        paths.append(path)
    return paths
