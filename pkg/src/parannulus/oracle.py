"""Brute-force reference solvers for tests and for reproducing documented values.

Nothing here reuses the dual machinery, the trapezoidal map or the depth-curve
arrangement; only the primal offset formula h_p = -x sin(theta) + y cos(theta)
is shared.  The candidate methods are exact up to floating evaluation; the
annulus grid is approximate and reports its tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .geom import HALF_PI, GeometryError, as_pointset

MAX_CANDIDATE_N = 15
MAX_GAMMA_N = 12


@dataclass(frozen=True)
class OracleReport:
    value: float
    argmin: tuple
    method: str  # "candidate-enumeration" | "grid+refine" | "exhaustive"
    certified: bool
    tolerance: float = 0.0


def _norm(t):
    t = np.mod(np.asarray(t, dtype=float) + HALF_PI, np.pi) - HALF_PI
    return np.where(t >= HALF_PI, t - np.pi, t)


def _offsets(xy, thetas):
    """h[k, p] for every angle k and point p."""
    thetas = np.asarray(thetas, dtype=float)[:, None]
    return -xy[None, :, 0] * np.sin(thetas) + xy[None, :, 1] * np.cos(thetas)


def _depth_table(xy, thetas):
    h = _offsets(xy, thetas)
    hi = h.max(axis=1, keepdims=True)
    lo = h.min(axis=1, keepdims=True)
    return np.minimum(hi - h, h - lo), h, lo, hi


def _hull_ids(xy):
    try:
        return np.unique(ConvexHull(xy).vertices)
    except (QhullError, ValueError):
        return np.arange(len(xy))


def _pair_angles(xy, i, j):
    """Orientation of the line through xy[i], xy[j] (vectorized)."""
    d = xy[j] - xy[i]
    return _norm(np.arctan2(d[..., 1], d[..., 0]))


def _candidates(xy, q_ids):
    """Angles where max over q of d_q can have a local minimum."""
    n = len(xy)
    ext = _hull_ids(xy)
    out = [np.array([-HALF_PI])]
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    off = ii != jj
    pair = _pair_angles(xy, ii[off], jj[off])
    out.extend([pair, _norm(pair + HALF_PI)])  # kinks, hull-edge ends, stationary points
    q_ids = np.asarray(q_ids, dtype=int)
    p, c, q, c2 = np.meshgrid(q_ids, ext, q_ids, ext, indexing="ij")
    p, c, q, c2 = p.ravel(), c.ravel(), q.ravel(), c2.ravel()
    # (h_c - h_p) = s * (h_c2 - h_q) with h = a sin + b cos, a = -x, b = y
    for s in (1.0, -1.0):
        a = -(xy[c, 0] - xy[p, 0]) + s * (xy[c2, 0] - xy[q, 0])
        b = (xy[c, 1] - xy[p, 1]) - s * (xy[c2, 1] - xy[q, 1])
        keep = (a != 0) | (b != 0)
        out.append(_norm(np.arctan2(-b[keep], a[keep])))
    return np.unique(np.concatenate(out))


def _best(xy, thetas, q_ids):
    best_w, best_t = math.inf, -HALF_PI
    for chunk in np.array_split(thetas, max(1, len(thetas) // 4096)):
        d, _, _, _ = _depth_table(xy, chunk)
        w = d[:, q_ids].max(axis=1) if len(q_ids) else np.zeros(len(chunk))
        k = int(np.argmin(w))
        if w[k] < best_w or (w[k] == best_w and chunk[k] < best_t):
            best_w, best_t = float(w[k]), float(chunk[k])
    return best_w, best_t


def oracle_double_strip(points) -> OracleReport:
    """Certified minimum-width double-strip by candidate-orientation enumeration."""
    ps = as_pointset(points)
    if len(ps) > MAX_CANDIDATE_N:
        raise GeometryError(f"candidate oracle is limited to n <= {MAX_CANDIDATE_N}; use the grid oracle")
    if len(ps) <= 2:
        return OracleReport(0.0, (-HALF_PI,), "candidate-enumeration", True)
    ids = np.arange(len(ps))
    w, t = _best(ps.xy, _candidates(ps.xy, ids), ids)
    return OracleReport(w, (t,), "candidate-enumeration", True)


def oracle_constrained(points, subset) -> OracleReport:
    """Certified P-constrained double-strip enclosing ``subset``."""
    ps = as_pointset(points)
    if len(ps) > MAX_CANDIDATE_N:
        raise GeometryError(f"candidate oracle is limited to n <= {MAX_CANDIDATE_N}")
    q = np.unique(np.asarray(list(subset), dtype=int))
    if len(q) and (q.min() < 0 or q.max() >= len(ps)):
        raise GeometryError("subset id out of range")
    if len(q) == 0 or len(ps) <= 2:
        return OracleReport(0.0, (-HALF_PI,), "candidate-enumeration", True)
    w, t = _best(ps.xy, _candidates(ps.xy, q), q)
    return OracleReport(w, (t,), "candidate-enumeration", True)


def _annulus_values(d_theta, d_phi):
    """z[k, l] = max_p min(d_p(theta_k), d_p(phi_l))."""
    return np.minimum(d_theta[:, None, :], d_phi[None, :, :]).max(axis=2)


def oracle_annulus_grid(points, resolution: int = 2000, refine_iters: int = 12, starts: int = 24) -> OracleReport:
    """Grid search over (theta, phi) plus zoomed local refinement.

    The reported tolerance is diameter * grid step, a Lipschitz bound for
    the grid value before refinement.
    """
    if resolution < 64:
        raise GeometryError("grid resolution must be at least 64")
    ps = as_pointset(points)
    xy = ps.xy
    step = math.pi / resolution
    diam = ps.diameter()
    if len(ps) <= 2:
        return OracleReport(0.0, (0.0, -HALF_PI), "grid+refine", False, diam * step)
    grid = -HALF_PI + step * np.arange(resolution)
    D, _, _, _ = _depth_table(xy, grid)
    z = np.empty((resolution, resolution))
    rows = max(1, 4_000_000 // (resolution * len(ps)))
    for r in range(0, resolution, rows):
        z[r : r + rows] = _annulus_values(D[r : r + rows], D)
    flat = np.argsort(z, axis=None)[: starts * 4]
    seeds = []
    for f in flat:
        k, l = divmod(int(f), resolution)
        if all(abs(k - a) + abs(l - b) > 2 for a, b in seeds):
            seeds.append((k, l))
        if len(seeds) == starts:
            break
    best = (float(z.min()), *np.unravel_index(int(np.argmin(z)), z.shape))
    best = (best[0], float(grid[best[1]]), float(grid[best[2]]))
    for k, l in seeds:
        t0, p0, half = float(grid[k]), float(grid[l]), 2 * step
        val = float(z[k, l])
        for _ in range(refine_iters):
            ts = t0 + np.linspace(-half, half, 41)
            fs = p0 + np.linspace(-half, half, 41)
            zz = _annulus_values(_depth_table(xy, ts)[0], _depth_table(xy, fs)[0])
            a, b = np.unravel_index(int(np.argmin(zz)), zz.shape)
            if zz[a, b] <= val:
                val, t0, p0 = float(zz[a, b]), float(ts[a]), float(fs[b])
            half /= 8
        if val < best[0]:
            best = (val, t0, p0)
    val, t, p = best
    return OracleReport(val, (float(_norm(t)), float(_norm(p))), "grid+refine", False, diam * step)


def oracle_gamma_vertices(points, tol: float = 1e-9) -> tuple[list[tuple[float, float]], bool]:
    """Vertices (theta, y) of the depth-curve arrangement and an overlap flag.

    Breakpoints come from hull-edge orientations and from the switch where a
    point is equidistant from both bounding lines; crossings from every pair
    of points and every choice of extreme point and side for each.
    """
    ps = as_pointset(points)
    xy = ps.xy
    n = len(ps)
    if n > MAX_GAMMA_N:
        raise GeometryError(f"gamma oracle is limited to n <= {MAX_GAMMA_N}")
    if n <= 2:
        return [], True
    scale = 1.0 + float(np.abs(xy).max())
    t_tol = tol * scale
    ids = np.arange(n)
    out = []

    # hull-edge orientations
    a, b = np.triu_indices(n, 1)
    th = _pair_angles(xy, a, b)
    d, h, lo, hi = _depth_table(xy, th)
    r = np.arange(len(th))
    on_top = (np.abs(h[r, a] - hi[:, 0]) <= t_tol) & (np.abs(h[r, b] - hi[:, 0]) <= t_tol)
    on_bot = (np.abs(h[r, a] - lo[:, 0]) <= t_tol) & (np.abs(h[r, b] - lo[:, 0]) <= t_tol)
    keep = on_top | on_bot
    for k in np.nonzero(keep)[0]:
        out.extend((float(th[k]), float(d[k, p])) for p in range(n))

    # switch points: 2 h_p = h_a + h_b with a on the top line and b on the bottom one
    p, a, b = (g.ravel() for g in np.meshgrid(ids, ids, ids, indexing="ij"))
    ca = -(2 * xy[p, 0] - xy[a, 0] - xy[b, 0])
    cb = 2 * xy[p, 1] - xy[a, 1] - xy[b, 1]
    ok = (ca != 0) | (cb != 0)
    p, a, b, th = p[ok], a[ok], b[ok], _norm(np.arctan2(-cb[ok], ca[ok]))
    d, h, lo, hi = _depth_table(xy, th)
    r = np.arange(len(th))
    keep = (np.abs(h[r, a] - hi[:, 0]) <= t_tol) & (np.abs(h[r, b] - lo[:, 0]) <= t_tol)
    out.extend((float(t), float(d[k, q])) for k, t, q in zip(r[keep], th[keep], p[keep]))

    # crossings of d_p and d_q (p < q)
    overlap = False
    pp, qq = np.triu_indices(n, 1)
    pair, A, B = (g.ravel() for g in np.meshgrid(np.arange(len(pp)), ids, ids, indexing="ij"))
    p, q = pp[pair], qq[pair]
    for sp in (1.0, -1.0):
        for sq in (1.0, -1.0):
            # sp*(h_a - h_p) = sq*(h_b - h_q)
            ca = sp * (xy[p, 0] - xy[A, 0]) - sq * (xy[q, 0] - xy[B, 0])
            cb = sp * (xy[A, 1] - xy[p, 1]) - sq * (xy[B, 1] - xy[q, 1])
            zero = (ca == 0) & (cb == 0)
            if zero.any():
                overlap = True
            ok = ~zero
            th = _norm(np.arctan2(-cb[ok], ca[ok]))
            pk, qk, ak, bk = p[ok], q[ok], A[ok], B[ok]
            d, h, lo, hi = _depth_table(xy, th)
            r = np.arange(len(th))
            ga = sp * (h[r, ak] - h[r, pk])
            gb = sq * (h[r, bk] - h[r, qk])
            ext_a = np.abs(h[r, ak] - np.where(sp > 0, hi[:, 0], lo[:, 0])) <= t_tol
            ext_b = np.abs(h[r, bk] - np.where(sq > 0, hi[:, 0], lo[:, 0])) <= t_tol
            keep = ext_a & ext_b & (np.abs(ga - d[r, pk]) <= t_tol) & (np.abs(gb - d[r, qk]) <= t_tol)
            out.extend((float(t), float(max(y, 0.0))) for t, y in zip(th[keep], d[r[keep], pk[keep]]))
    return out, overlap
