"""Convex hull, extreme points and the antipodal decomposition of orientations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import (
    HALF_PI,
    GeometryError,
    PiecewiseSinusoid,
    Sinusoid,
    Strip,
    as_pointset,
    normalize_angle,
    offsets,
    orient,
)


@dataclass(frozen=True)
class ConvexHull:
    """Counter-clockwise hull corners as indices into the point set."""

    indices: tuple

    def __len__(self):
        return len(self.indices)


def convex_hull(points) -> ConvexHull:
    """Monotone-chain hull with exact turn tests; collinear boundary points dropped."""
    ps = as_pointset(points)
    if len(ps) == 0:
        raise GeometryError("convex hull of an empty point set")
    order = sorted(range(len(ps)), key=lambda i: (ps.xy[i, 0], ps.xy[i, 1]))
    if len(order) <= 2:
        return ConvexHull(tuple(order))

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and orient(ps[out[-2]], ps[out[-1]], ps[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return ConvexHull(tuple(hull))


def extreme_indices(xy: np.ndarray, theta: float, candidates=None) -> tuple[int, int]:
    """Indices of chi+ (max offset) and chi- (min offset) at orientation theta.

    Ties on a bounding line go to the counter-clockwise-last point: the one
    furthest back along the line direction for chi+, furthest forward for chi-.
    """
    idx = np.arange(len(xy)) if candidates is None else np.asarray(candidates)
    sub = xy[idx]
    h = offsets(sub, theta)
    t = sub[:, 0] * math.cos(theta) + sub[:, 1] * math.sin(theta)
    scale = 1e-12 * (1.0 + float(np.abs(sub).max()))
    top = np.nonzero(h >= h.max() - scale)[0]
    bot = np.nonzero(h <= h.min() + scale)[0]
    plus = top[np.argmin(t[top])]
    minus = bot[np.argmax(t[bot])]
    return int(idx[plus]), int(idx[minus])


def extreme_points(points, theta: float):
    """(chi+, chi-, S(theta)) for the minimum-width theta-aligned enclosing strip."""
    ps = as_pointset(points)
    if len(ps) == 0:
        raise GeometryError("empty point set")
    h = offsets(ps.xy, theta)
    ip, im = extreme_indices(ps.xy, theta)
    return ps[ip], ps[im], Strip(theta, float(h.min()), float(h.max()))


@dataclass(frozen=True)
class AntipodalInterval:
    theta_lo: float
    theta_hi: float
    u_lo: float
    u_hi: float
    chi_plus: int
    chi_minus: int


@dataclass(frozen=True)
class AntipodalDecomposition:
    intervals: tuple

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    @property
    def breakpoints(self) -> list[float]:
        return [iv.theta_lo for iv in self.intervals]

    def locate(self, theta: float) -> AntipodalInterval:
        for iv in self.intervals:
            if iv.theta_lo <= theta < iv.theta_hi:
                return iv
        return self.intervals[-1]


def antipodal_decomposition(points, hull: ConvexHull | None = None) -> AntipodalDecomposition:
    """Split [-pi/2, pi/2) where a bounding line of S(theta) contains a hull edge.

    Each record also carries the matching dual range u = tan(theta); the
    vertical orientation maps to -inf.
    """
    ps = as_pointset(points)
    hull = hull or convex_hull(ps)
    idx = list(hull.indices)
    breaks = {}  # theta -> u
    if len(idx) >= 2:
        for i in range(len(idx)):
            p, q = ps[idx[i]], ps[idx[(i + 1) % len(idx)]]
            dx, dy = q[0] - p[0], q[1] - p[1]
            theta = normalize_angle(math.atan2(dy, dx))
            if theta == -HALF_PI or dx == 0:
                breaks[-HALF_PI] = -math.inf
            else:
                breaks.setdefault(theta, dy / dx)
    breaks[-HALF_PI] = -math.inf
    thetas = sorted(breaks)
    records = []
    for k, lo in enumerate(thetas):
        hi = thetas[k + 1] if k + 1 < len(thetas) else HALF_PI
        u_hi = breaks[thetas[k + 1]] if k + 1 < len(thetas) else math.inf
        mid = (lo + hi) / 2
        ip, im = extreme_indices(ps.xy, mid, idx)
        records.append(AntipodalInterval(lo, hi, breaks[lo], u_hi, ip, im))
    return AntipodalDecomposition(tuple(records))


def distance_function(points, p, decomposition: AntipodalDecomposition | None = None) -> PiecewiseSinusoid:
    """d_p(theta) = min(sigma(p, chi+), sigma(p, chi-)) as a piecewise sinusoid."""
    ps = as_pointset(points)
    dec = decomposition or antipodal_decomposition(ps)
    breaks = []
    pieces = []
    for iv in dec:
        fp = Sinusoid.of_offset_difference(p, ps[iv.chi_plus])
        fm = Sinusoid.of_offset_difference(p, ps[iv.chi_minus])
        cuts = {iv.theta_lo}
        cuts.update(fp.zeros(iv.theta_lo, iv.theta_hi))
        cuts.update(fm.zeros(iv.theta_lo, iv.theta_hi))
        for g in (fp - fm, fp + fm):
            cuts.update(g.zeros(iv.theta_lo, iv.theta_hi))
        cuts = sorted(c for c in cuts if iv.theta_lo <= c < iv.theta_hi)
        bounds = cuts + [iv.theta_hi]
        for a, b in zip(bounds, bounds[1:]):
            if b <= a:
                continue
            mid = (a + b) / 2
            f = fp if abs(fp(mid)) <= abs(fm(mid)) else fm
            breaks.append(a)
            pieces.append((f, True))
    return PiecewiseSinusoid(tuple(breaks[1:]), tuple(pieces))
