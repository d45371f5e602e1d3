"""Minimum-width double-strips enclosing a point set, fixed or free orientation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dual import DualLines, TuplePiece, tuple_pieces
from .geom import HALF_PI, DoubleStrip, Sinusoid, Strip, as_pointset, offsets


@dataclass(frozen=True)
class DoubleStripSolution:
    theta: float
    width: float
    double_strip: DoubleStrip
    tuple: tuple | None = None  # (chi+, chi-, q+, q-) realizing the optimum


def depths(xy: np.ndarray, theta: float, subset=None) -> tuple[np.ndarray, float, float]:
    """d_p(theta) for every point (or ``subset``), with the outer strip offsets."""
    h = offsets(xy, theta)
    lo, hi = float(h.min()), float(h.max())
    if subset is not None:
        h = h[np.asarray(subset, dtype=int)]
    return np.minimum(hi - h, h - lo), lo, hi


def solve_fixed(points, theta: float, subset=None) -> tuple[DoubleStrip, float]:
    """Minimum-width theta-aligned double-strip; with ``subset`` it is P-constrained."""
    ps = as_pointset(points)
    d, lo, hi = depths(ps.xy, theta, subset)
    w = float(d.max()) if len(d) else 0.0
    outer = Strip(theta, lo, hi)
    return DoubleStrip.from_width(outer, w), w


def width_at(points, theta: float, subset=None) -> float:
    return solve_fixed(points, theta, subset)[1]


def _branch(xy, q, chi):
    if q is None or q == chi:
        return Sinusoid(0.0, 0.0)
    return Sinusoid.of_offset_difference(xy[chi], xy[q])


def minimize_on_interval(xy: np.ndarray, tup, theta_lo: float, theta_hi: float) -> tuple[float, float]:
    """Minimize max(sigma(q+, chi+), sigma(q-, chi-)) over [theta_lo, theta_hi].

    Candidates: both ends, the crossings of the two branches, their zeros
    (kinks) and their stationary points.  Ties go to the smaller angle.
    """
    chi_p, chi_m, q_p, q_m = tup
    f1 = _branch(xy, q_p, chi_p)
    f2 = _branch(xy, q_m, chi_m)
    cands = [theta_lo, theta_hi]
    for g in (f1 - f2, f1 + f2):
        cands.extend(g.zeros(theta_lo, theta_hi))
    for f in (f1, f2):
        cands.extend(f.zeros(theta_lo, theta_hi))
        cands.extend(f.stationary(theta_lo, theta_hi))
    best_t, best_w = theta_lo, math.inf
    for t in sorted(cands):
        if not theta_lo <= t <= theta_hi:
            continue
        w = max(abs(f1(t)), abs(f2(t)))
        if w < best_w:
            best_t, best_w = t, w
    return best_t, best_w


def tuple_intervals(points, lines: DualLines | None = None, subset=None) -> list[TuplePiece]:
    """Orientation intervals with a constant (chi+, chi-, q+, q-) tuple."""
    ps = as_pointset(points)
    lines = lines or DualLines(ps)
    subset = range(len(ps)) if subset is None else subset
    return tuple_pieces(lines, subset)


def vertical_candidate(xy: np.ndarray, subset) -> tuple[float, float]:
    """(width, theta) of the constrained double-strip at theta = -pi/2."""
    subset = list(subset)
    if not subset:
        return 0.0, -HALF_PI
    d, _, _ = depths(xy, -HALF_PI, subset)
    return float(d.max()), -HALF_PI


def build_solution(xy: np.ndarray, theta: float, width: float, tup=None) -> DoubleStripSolution:
    h = offsets(xy, theta)
    outer = Strip(theta, float(h.min()), float(h.max()))
    return DoubleStripSolution(theta, width, DoubleStrip.from_width(outer, width), tup)


def solve_all_orientations(points) -> DoubleStripSolution:
    """Minimum-width double-strip over all orientations."""
    ps = as_pointset(points)
    xy = ps.xy
    w0, t0 = vertical_candidate(xy, range(len(ps)))
    if w0 == 0.0:
        return build_solution(xy, t0, 0.0)
    best = (w0, t0, None)
    for piece in tuple_intervals(ps):
        t, w = minimize_on_interval(xy, piece.tuple, piece.theta_lo, piece.theta_hi)
        if (w, t) < best[:2]:
            best = (w, t, piece.tuple)
    w, t, tup = best
    return build_solution(xy, t, w, tup)
