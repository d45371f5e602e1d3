"""Core geometric values: point sets, orientations, sinusoids, strips and duality.

Orientations live in the half-open interval [-pi/2, pi/2).  A theta-aligned
line has direction (cos theta, sin theta) and unit normal (-sin theta, cos theta);
the signed offset of a point along that normal is what every width in the
package is measured with.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

HALF_PI = math.pi / 2
TOL = 1e-9


class GeometryError(ValueError):
    pass


class NonDualizableError(GeometryError):
    """Raised for vertical primal lines, which have no point dual."""


def normalize_angle(theta: float) -> float:
    """Map any angle into [-pi/2, pi/2) by adding multiples of pi."""
    t = math.fmod(theta + HALF_PI, math.pi)
    if t < 0:
        t += math.pi
    t -= HALF_PI
    if t >= HALF_PI:
        t -= math.pi
    return t


def sincos(theta: float) -> tuple[float, float]:
    # exact at the vertical orientation, where cos(-pi/2) would be 6e-17
    if theta == -HALF_PI:
        return -1.0, 0.0
    return math.sin(theta), math.cos(theta)


def normal(theta: float) -> tuple[float, float]:
    s, c = sincos(theta)
    return -s, c


def offsets(xy: np.ndarray, theta: float) -> np.ndarray:
    """Signed offsets of points along the unit normal of theta-aligned lines."""
    s, c = sincos(theta)
    return -xy[:, 0] * s + xy[:, 1] * c


class PointSet:
    """An ordered set of distinct planar points; ids are positions in the order."""

    def __init__(self, points: Iterable[Sequence[float]]):
        seen = set()
        kept = []
        dups = 0
        for p in points:
            x, y = float(p[0]), float(p[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise GeometryError(f"non-finite coordinate in {p!r}")
            if (x, y) in seen:
                dups += 1
                continue
            seen.add((x, y))
            kept.append((x, y))
        self.xy = np.array(kept, dtype=float).reshape(-1, 2)
        self.xy.setflags(write=False)
        self.duplicates = dups

    def __len__(self) -> int:
        return len(self.xy)

    def __getitem__(self, i: int) -> tuple[float, float]:
        return float(self.xy[i, 0]), float(self.xy[i, 1])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)})"

    def index(self, p: Sequence[float]) -> int:
        hits = np.nonzero((self.xy[:, 0] == p[0]) & (self.xy[:, 1] == p[1]))[0]
        if len(hits) == 0:
            raise KeyError(f"point {tuple(p)} not in set")
        return int(hits[0])

    def diameter(self) -> float:
        if len(self) < 2:
            return 0.0
        d = self.xy[:, None, :] - self.xy[None, :, :]
        return float(np.sqrt((d ** 2).sum(-1)).max())


def as_pointset(points) -> PointSet:
    return points if isinstance(points, PointSet) else PointSet(points)


def orient(p, q, r) -> int:
    """Exact sign of the turn p -> q -> r (+1 left, -1 right, 0 collinear)."""
    px, py, qx, qy, rx, ry = (Fraction(float(c)) for c in (*p, *q, *r))
    det = (qx - px) * (ry - py) - (qy - py) * (rx - px)
    return (det > 0) - (det < 0)


def segment_orientation(p, q) -> float:
    """Orientation in [-pi/2, pi/2) of the segment pq."""
    return normalize_angle(math.atan2(q[1] - p[1], q[0] - p[0]))


def sigma(p, q, theta: float) -> float:
    """Width of the strip bounded by the theta-aligned lines through p and q."""
    s, c = sincos(theta)
    return abs(-(q[0] - p[0]) * s + (q[1] - p[1]) * c)


@dataclass(frozen=True)
class Sinusoid:
    """f(theta) = a * sin(theta + b)."""

    a: float
    b: float = 0.0

    @classmethod
    def of_offset_difference(cls, p, q) -> "Sinusoid":
        """The signed offset difference h_q(theta) - h_p(theta); sigma is its absolute value."""
        dx, dy = q[0] - p[0], q[1] - p[1]
        return cls(math.hypot(dx, dy), math.atan2(dy, -dx))

    def __call__(self, theta):
        return self.a * np.sin(theta + self.b) if isinstance(theta, np.ndarray) else self.a * math.sin(theta + self.b)

    def normalized(self) -> "Sinusoid":
        if self.a < 0:
            return Sinusoid(-self.a, math.remainder(self.b + math.pi, 2 * math.pi))
        return Sinusoid(self.a, math.remainder(self.b, 2 * math.pi))

    def __neg__(self) -> "Sinusoid":
        return Sinusoid(self.a, self.b + math.pi).normalized()

    def __add__(self, other: "Sinusoid") -> "Sinusoid":
        # phasor addition
        re = self.a * math.cos(self.b) + other.a * math.cos(other.b)
        im = self.a * math.sin(self.b) + other.a * math.sin(other.b)
        amp = math.hypot(re, im)
        scale = max(abs(self.a), abs(other.a), 1e-300)
        if amp <= 1e-15 * scale:
            return Sinusoid(0.0, 0.0)
        return Sinusoid(amp, math.atan2(im, re))

    def __sub__(self, other: "Sinusoid") -> "Sinusoid":
        return self + (-other)

    @property
    def is_zero(self) -> bool:
        return self.a == 0.0

    def zeros(self, lo: float, hi: float) -> list[float]:
        """Zeros in the closed interval [lo, hi]."""
        if self.is_zero:
            return []
        return _shifted_roots(-self.b, lo, hi)

    def stationary(self, lo: float, hi: float) -> list[float]:
        if self.is_zero:
            return []
        return _shifted_roots(HALF_PI - self.b, lo, hi)

    def level(self, y: float, lo: float, hi: float) -> list[float]:
        """Solutions of |f(theta)| = y in [lo, hi]."""
        if self.is_zero or y > abs(self.a):
            return []
        s = math.asin(min(1.0, y / abs(self.a)))
        out = set()
        for base in (s, -s, math.pi - s, s - math.pi):
            out.update(_shifted_roots(base - self.b, lo, hi))
        return sorted(out)


def _shifted_roots(t0: float, lo: float, hi: float) -> list[float]:
    """All t0 + k*pi inside [lo, hi]."""
    k = math.ceil((lo - t0) / math.pi)
    out = []
    t = t0 + k * math.pi
    while t <= hi:
        if t >= lo:
            out.append(t)
        k += 1
        t = t0 + k * math.pi
    return out


class EqualRoots(NamedTuple):
    roots: tuple
    identical: bool


def sinusoid_sum(f: Sinusoid, g: Sinusoid) -> Sinusoid:
    return f + g


def sinusoid_equal_roots(f: Sinusoid, g: Sinusoid, lo: float = -HALF_PI, hi: float = HALF_PI) -> EqualRoots:
    """Angles in [lo, hi) where f equals g; flags identical functions separately."""
    diff = f - g
    if diff.is_zero:
        return EqualRoots((), True)
    return EqualRoots(tuple(t for t in diff.zeros(lo, hi) if t < hi), False)


@dataclass(frozen=True)
class PiecewiseSinusoid:
    """Piecewise |a sin(theta + b)| (or signed) over [-pi/2, pi/2).

    ``pieces[i]`` covers [breakpoints[i-1], breakpoints[i]) with the implicit
    outer bounds -pi/2 and pi/2.
    """

    breakpoints: tuple
    pieces: tuple  # of (Sinusoid, absolute: bool)

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise GeometryError("need one piece per sub-interval")

    def piece_at(self, theta: float) -> int:
        return bisect.bisect_right(self.breakpoints, theta)

    def __call__(self, theta: float) -> float:
        f, absolute = self.pieces[self.piece_at(theta)]
        v = f(theta)
        return abs(v) if absolute else v

    def intervals(self):
        bounds = (-HALF_PI, *self.breakpoints, HALF_PI)
        for i, piece in enumerate(self.pieces):
            yield bounds[i], bounds[i + 1], piece


@dataclass(frozen=True)
class Strip:
    """Closed region lo <= offset <= hi for theta-aligned lines."""

    theta: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise GeometryError("strip offsets out of order")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def middle(self) -> float:
        return (self.lo + self.hi) / 2

    def contains(self, xy: np.ndarray, tol: float = TOL) -> np.ndarray:
        h = offsets(np.atleast_2d(xy), self.theta)
        return (h >= self.lo - tol) & (h <= self.hi + tol)

    def line_points(self, offset: float) -> tuple[np.ndarray, np.ndarray]:
        """A point on the bounding line at ``offset`` and its unit direction."""
        n = np.array(normal(self.theta))
        s, c = sincos(self.theta)
        return n * offset, np.array([c, s])

    def to_dict(self) -> dict:
        return {"theta": self.theta, "lo": self.lo, "hi": self.hi, "width": self.width}


@dataclass(frozen=True)
class DoubleStrip:
    outer: Strip
    inner: Strip

    def __post_init__(self):
        if self.outer.theta != self.inner.theta:
            raise GeometryError("outer and inner strips must share orientation")
        if self.inner.lo < self.outer.lo - TOL or self.inner.hi > self.outer.hi + TOL:
            raise GeometryError("inner strip must lie inside the outer strip")
        scale = 1.0 + abs(self.outer.lo) + abs(self.outer.hi)
        if abs(self.inner.middle - self.outer.middle) > 1e-9 * scale:
            raise GeometryError("strips must share the middle line")

    @classmethod
    def from_width(cls, outer: Strip, width: float) -> "DoubleStrip":
        half = outer.width / 2
        gap = max(half - max(width, 0.0), 0.0)
        m = outer.middle
        return cls(outer, Strip(outer.theta, m - gap, m + gap))

    @property
    def theta(self) -> float:
        return self.outer.theta

    @property
    def width(self) -> float:
        return (self.outer.width - self.inner.width) / 2

    def contains(self, xy: np.ndarray, tol: float = TOL) -> np.ndarray:
        h = offsets(np.atleast_2d(xy), self.theta)
        in_outer = (h >= self.outer.lo - tol) & (h <= self.outer.hi + tol)
        in_hole = (h > self.inner.lo + tol) & (h < self.inner.hi - tol)
        return in_outer & ~in_hole

    def to_dict(self) -> dict:
        return {"theta": self.theta, "width": self.width, "outer": self.outer.to_dict(), "inner": self.inner.to_dict()}


def _corners(s1: Strip, lo1: float, hi1: float, s2: Strip, lo2: float, hi2: float) -> list[tuple[float, float]]:
    n1 = np.array(normal(s1.theta))
    n2 = np.array(normal(s2.theta))
    mat = np.array([n1, n2])
    out = []
    for h1, h2 in ((lo1, lo2), (hi1, lo2), (hi1, hi2), (lo1, hi2)):
        x, y = np.linalg.solve(mat, [h1, h2])
        out.append((float(x), float(y)))
    return out


@dataclass(frozen=True)
class ParallelogramAnnulus:
    d1: DoubleStrip
    d2: DoubleStrip

    def __post_init__(self):
        if self.d1.theta == self.d2.theta:
            raise GeometryError("double-strips of an annulus need distinct orientations")

    @property
    def width(self) -> float:
        return max(self.d1.width, self.d2.width)

    def contains(self, xy: np.ndarray, tol: float = TOL) -> np.ndarray:
        xy = np.atleast_2d(xy)
        h1 = offsets(xy, self.d1.theta)
        h2 = offsets(xy, self.d2.theta)
        o1, o2, i1, i2 = self.d1.outer, self.d2.outer, self.d1.inner, self.d2.inner
        in_outer = (h1 >= o1.lo - tol) & (h1 <= o1.hi + tol) & (h2 >= o2.lo - tol) & (h2 <= o2.hi + tol)
        in_hole = (h1 > i1.lo + tol) & (h1 < i1.hi - tol) & (h2 > i2.lo + tol) & (h2 < i2.hi - tol)
        return in_outer & ~in_hole

    def outer_corners(self):
        o1, o2 = self.d1.outer, self.d2.outer
        return _corners(o1, o1.lo, o1.hi, o2, o2.lo, o2.hi)

    def inner_corners(self):
        i1, i2 = self.d1.inner, self.d2.inner
        return _corners(i1, i1.lo, i1.hi, i2, i2.lo, i2.hi)

    def to_dict(self) -> dict:
        return {
            "theta": self.d1.theta,
            "phi": self.d2.theta,
            "width": self.width,
            "d1": self.d1.to_dict(),
            "d2": self.d2.to_dict(),
            "outer_corners": self.outer_corners(),
            "inner_corners": self.inner_corners(),
        }


@dataclass(frozen=True)
class DualLine:
    """The dual-plane line v = a*u - b."""

    a: float
    b: float

    def __call__(self, u):
        return self.a * u - self.b


def dualize_point(p) -> DualLine:
    return DualLine(float(p[0]), float(p[1]))


def dualize_line(slope: float, b: float) -> tuple[float, float]:
    """Point dual to the primal line y = slope*x - b."""
    if not (math.isfinite(slope) and math.isfinite(b)):
        raise NonDualizableError("vertical lines have no dual point")
    return (slope, b)


def primal_line_of(line: DualLine) -> tuple[float, float]:
    """Inverse of dualize_point: the dual line v = a u - b comes from point (a, b)."""
    return (line.a, line.b)
