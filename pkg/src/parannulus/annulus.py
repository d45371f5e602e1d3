"""Minimum-width parallelogram annuli: both orientations fixed, one fixed, both free.

A (theta, phi)-aligned annulus of width z encloses P exactly when every point
has min(d_p(theta), d_p(phi)) <= z.  With phi fixed this reduces to offline
constrained double-strips over prefixes of P sorted by d_p(phi).  With both
free, the optimum is the height of a vertex of the arrangement of the curves
y = d_p(theta); we collect those heights and binary search them with a
decision procedure that sweeps theta and keeps a dynamic constrained
double-strip state at a fixed threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constrained import DynamicState, offline_insertions, solve_constrained
from .double_strip import build_solution, depths, solve_all_orientations
from .dual import DualLines
from .geom import HALF_PI, DoubleStrip, GeometryError, ParallelogramAnnulus, Strip, as_pointset, normalize_angle, offsets
from .hull import antipodal_decomposition, convex_hull


@dataclass(frozen=True)
class AnnulusSolution:
    theta: float
    phi: float
    width: float
    annulus: ParallelogramAnnulus | None
    validated: bool | None = None  # solve_general: decide(width - eps) came out false


def _zero_double_strip(xy, theta) -> DoubleStrip:
    h = offsets(xy, theta)
    return DoubleStrip.from_width(Strip(theta, float(h.min()), float(h.max())), 0.0)


def _trivial(ps) -> AnnulusSolution:
    """Width-0 annulus for n <= 2 (or any set covered by one orientation pair)."""
    if len(ps) == 0:
        return AnnulusSolution(0.0, -HALF_PI, 0.0, None)
    ann = ParallelogramAnnulus(_zero_double_strip(ps.xy, 0.0), _zero_double_strip(ps.xy, -HALF_PI))
    return AnnulusSolution(0.0, -HALF_PI, 0.0, ann)


def _other_orientation(phi: float) -> float:
    return normalize_angle(phi + HALF_PI)


def solve_fixed_fixed(points, theta: float, phi: float) -> AnnulusSolution:
    """Minimum-width (theta, phi)-aligned annulus; its outer parallelogram is S(theta) & S(phi)."""
    ps = as_pointset(points)
    theta, phi = normalize_angle(theta), normalize_angle(phi)
    if theta == phi:
        raise GeometryError("theta and phi must differ")
    if len(ps) == 0:
        return AnnulusSolution(theta, phi, 0.0, None)
    d1, _, _ = depths(ps.xy, theta)
    d2, _, _ = depths(ps.xy, phi)
    z = float(np.minimum(d1, d2).max())
    ann = ParallelogramAnnulus(build_solution(ps.xy, theta, z).double_strip, build_solution(ps.xy, phi, z).double_strip)
    return AnnulusSolution(theta, phi, z, ann)


def solve_fixed_phi(points, phi: float, lines: DualLines | None = None) -> AnnulusSolution:
    """Minimum-width annulus with one side orientation fixed to phi.

    Points are sorted by d_p(phi) descending; the i-th candidate covers the
    tail with a phi-aligned double-strip of width d_{p_i}(phi) and the head
    with an optimal constrained double-strip.  Candidates whose optimal
    orientation equals phi are skipped since they give no parallelogram.
    """
    ps = as_pointset(points)
    phi = normalize_angle(phi)
    if len(ps) <= 1:
        sol = _trivial(ps)
        if sol.annulus is None:
            return sol
        ann = ParallelogramAnnulus(_zero_double_strip(ps.xy, _other_orientation(phi)), _zero_double_strip(ps.xy, phi))
        return AnnulusSolution(ann.d1.theta, phi, 0.0, ann)
    xy = ps.xy
    d, _, _ = depths(xy, phi)
    order = sorted(range(len(ps)), key=lambda p: (-d[p], p))
    prefix = offline_insertions(ps, order[:-1], lines)
    best = None
    for i, sol in enumerate(prefix):
        wi = float(d[order[i]])
        if i == 0:
            theta, inner = _other_orientation(phi), _zero_double_strip(xy, _other_orientation(phi))
        elif sol.theta == phi:
            continue
        else:
            theta, inner = sol.theta, sol.double_strip
        val = max(wi, sol.width)
        if best is None or val < best[0]:
            best = (val, theta, inner, wi)
    val, theta, inner, wi = best
    ann = ParallelogramAnnulus(inner, build_solution(xy, phi, wi).double_strip)
    return AnnulusSolution(theta, phi, val, ann)


# ---- the arrangement of the depth curves --------------------------------


@dataclass(frozen=True)
class GammaVertex:
    theta: float
    y: float
    kind: str  # "breakpoint" of d_p or "crossing" of d_p and d_q
    p: int
    q: int = -1


@dataclass(frozen=True)
class GammaArrangement:
    vertices: tuple
    candidates: np.ndarray  # sorted distinct vertex heights, always containing 0
    degenerate: bool  # some pair of curves overlaps on a whole piece
    intervals: tuple  # (theta_lo, theta_hi, a+, b+, a-, b-) per antipodal interval

    def __len__(self):
        return len(self.vertices)


def _branches(xy, chi_p, chi_m):
    """Coefficients (a, b) of g = a sin + b cos for both branches of every d_p."""
    ap = xy[:, 0] - xy[chi_p, 0]
    bp = xy[chi_p, 1] - xy[:, 1]
    am = xy[chi_m, 0] - xy[:, 0]
    bm = xy[:, 1] - xy[chi_m, 1]
    return ap, bp, am, bm


def _eval(a, b, t):
    return a * np.sin(t) + b * np.cos(t)


def _zero_angle(a, b):
    """The zero of a sin + b cos inside [-pi/2, pi/2)."""
    t = np.arctan2(-b, a)
    t = np.where(t >= HALF_PI, t - np.pi, t)
    return np.where(t < -HALF_PI, t + np.pi, t)


def _real_breaks(ps, dec) -> list[float]:
    hull = convex_hull(ps).indices
    out = [iv.theta_lo for iv in list(dec)[1:]]
    for k in range(len(hull)):
        p, q = ps.xy[hull[k]], ps.xy[hull[(k + 1) % len(hull)]]
        if len(hull) > 1 and p[0] == q[0]:
            out.insert(0, -HALF_PI)
            break
    return out


def build_gamma(points) -> GammaArrangement:
    """Breakpoints and pairwise crossings of the curves y = d_p(theta)."""
    ps = as_pointset(points)
    xy = ps.xy
    n = len(ps)
    scale = 1.0 + float(np.abs(xy).max()) if n else 1.0
    tol = 1e-9 * scale
    dec = antipodal_decomposition(ps)
    verts = []
    degenerate = False
    intervals = []
    for t in _real_breaks(ps, dec):
        d, _, _ = depths(xy, t)
        verts.extend(GammaVertex(t, float(d[p]), "breakpoint", p) for p in range(n))
    i_idx, j_idx = np.triu_indices(n, 1)
    for iv in dec:
        lo, hi = iv.theta_lo, iv.theta_hi
        ap, bp, am, bm = _branches(xy, iv.chi_plus, iv.chi_minus)
        intervals.append((lo, hi, ap, bp, am, bm))
        t = _zero_angle(ap - am, bp - bm)
        ok = (t > lo) & (t < hi) & ~((ap == am) & (bp == bm))
        for p in np.nonzero(ok)[0]:
            y = float(_eval(ap[p], bp[p], t[p]))
            verts.append(GammaVertex(float(t[p]), y, "breakpoint", int(p)))
        mid = 0.5 * (lo + hi)
        dmid = np.minimum(_eval(ap, bp, mid), _eval(am, bm, mid))
        for a1, b1 in ((ap, bp), (am, bm)):
            for a2, b2 in ((ap, bp), (am, bm)):
                da = a1[i_idx] - a2[j_idx]
                db = b1[i_idx] - b2[j_idx]
                same = (da == 0) & (db == 0)
                if same.any():
                    act = (np.abs(_eval(a1[i_idx], b1[i_idx], mid) - dmid[i_idx]) <= tol) & same
                    degenerate |= bool(act.any())
                t = _zero_angle(da, db)
                cand = ~same & (t >= lo) & (t <= hi)
                if not cand.any():
                    continue
                ii, jj, tt = i_idx[cand], j_idx[cand], t[cand]
                g1 = _eval(a1[ii], b1[ii], tt)
                g2 = _eval(a2[jj], b2[jj], tt)
                d1 = np.minimum(_eval(ap[ii], bp[ii], tt), _eval(am[ii], bm[ii], tt))
                d2 = np.minimum(_eval(ap[jj], bp[jj], tt), _eval(am[jj], bm[jj], tt))
                act = (g1 <= d1 + tol) & (g2 <= d2 + tol)
                for p, q, th, y in zip(ii[act], jj[act], tt[act], d1[act]):
                    verts.append(GammaVertex(float(th), float(max(y, 0.0)), "crossing", int(p), int(q)))
    ys = np.unique(np.array([0.0] + [v.y for v in verts]))
    verts.sort(key=lambda v: (v.theta, v.y, v.kind, v.p, v.q))
    return GammaArrangement(tuple(verts), ys, degenerate or n == 2, tuple(intervals))


# ---- decision and optimization -------------------------------------------


def _level_angles(gamma: GammaArrangement, w: float) -> np.ndarray:
    """Orientations where some depth curve may reach height w (a superset)."""
    out = [np.array([-HALF_PI])]
    for lo, hi, ap, bp, am, bm in gamma.intervals:
        out.append(np.array([lo]))
        for a, b in ((ap, bp), (am, bm)):
            r = np.hypot(a, b)
            ok = (r >= w) & (r > 0)  # a zero branch has no isolated level angles
            if not ok.any():
                continue
            s = np.arcsin(np.minimum(1.0, w / r[ok]))
            ph = np.arctan2(b[ok], a[ok])
            for t in (s - ph, np.pi - s - ph):
                t = np.mod(t + HALF_PI, np.pi) - HALF_PI
                out.append(t[(t >= lo) & (t <= hi)])
    return np.unique(np.concatenate(out))


def _test_angles(events: np.ndarray) -> np.ndarray:
    ends = np.concatenate([events, [HALF_PI]])
    mids = 0.5 * (ends[:-1] + ends[1:])
    tests = np.empty(2 * len(events))
    tests[0::2] = events
    tests[1::2] = mids
    return tests


def decide(points, gamma: GammaArrangement, w: float, lines: DualLines | None = None):
    """(w >= w*, witness AnnulusSolution or None)."""
    ps = as_pointset(points)
    if len(ps) <= 2:
        return True, _trivial(ps)
    xy = ps.xy
    lines = lines or DualLines(ps)
    tol = 1e-11 * lines.scale
    state = None
    for theta in _test_angles(_level_angles(gamma, w)):
        theta = float(theta)
        d, _, _ = depths(xy, theta)
        inq = d > w + tol
        if state is None:
            state = DynamicState(ps, threshold=w + tol, subset=np.nonzero(inq)[0], lines=lines)
            current = inq
        else:
            for p in np.nonzero(inq & ~current)[0]:
                state.insert(int(p))
            for p in np.nonzero(current & ~inq)[0]:
                state.delete(int(p))
            current = inq
        if not state.decide():
            continue
        q = np.nonzero(inq)[0]
        outer = build_solution(xy, theta, float(d[~inq].max())).double_strip
        if len(q) == 0:
            other = _other_orientation(theta)
            inner = _zero_double_strip(xy, other)
        else:
            sol = solve_constrained(ps, q, lines)
            if sol.theta == theta:
                continue
            other, inner = sol.theta, sol.double_strip
        ann = ParallelogramAnnulus(inner, outer)
        return True, AnnulusSolution(other, theta, ann.width, ann)
    return False, None


def solve_general(points, gamma: GammaArrangement | None = None, validate: bool = True) -> AnnulusSolution:
    """Minimum-width parallelogram annulus over all orientation pairs.

    The answer is the smallest vertex height of the depth-curve arrangement
    that decides true.  Heights above the best single double-strip are never
    needed since that double-strip already is an annulus.
    """
    ps = as_pointset(points)
    if len(ps) <= 2:
        return _trivial(ps)
    lines = DualLines(ps)
    gamma = gamma or build_gamma(ps)
    ds = solve_all_orientations(ps)
    cand = gamma.candidates[gamma.candidates <= ds.width]
    found = None
    lo, hi = 0, len(cand) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        ok, wit = decide(ps, gamma, float(cand[mid]), lines)
        if ok:
            found = (float(cand[mid]), wit)
            hi = mid - 1
        else:
            lo = mid + 1
    if found is None:
        other = _other_orientation(ds.theta)
        ann = ParallelogramAnnulus(ds.double_strip, _zero_double_strip(ps.xy, other))
        found = (ds.width, AnnulusSolution(ds.theta, other, ds.width, ann))
    w, wit = found
    validated = None
    if validate:
        eps = 1e-7 * ps.diameter()
        validated = w - eps < 0 or not decide(ps, gamma, w - eps, lines)[0]
    return AnnulusSolution(wit.theta, wit.phi, w, wit.annulus, validated)
