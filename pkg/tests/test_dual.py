import math

import numpy as np
import pytest

from _shared import SQ4, SQ5, TRI3, primal_offsets, random_points
from parannulus import antipodal_decomposition
from parannulus.dual import DualLines, envelopes, mid_chains


def _primal_at(xy, theta, subset, tol):
    h = primal_offsets(xy, theta)
    hi, lo = h.max(), h.min()
    mid = 0.5 * (hi + lo)
    sub = h[list(subset)] if len(subset) else np.array([])
    floor_side = sub[sub >= mid - tol]
    ceil_side = sub[sub < mid - tol]
    q_plus = floor_side.min() if len(floor_side) else hi
    q_minus = ceil_side.max() if len(ceil_side) else lo
    return hi, lo, mid, q_plus, q_minus


def test_envelopes_triangle():
    pts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
    U, L, M = envelopes(pts)
    for u in (-3.0, -1.5, -0.5, 0.0, 0.7, 4.0):
        vals = [x * u - y for x, y in pts]
        assert U(u) == pytest.approx(max(vals))
        assert L(u) == pytest.approx(min(vals))
        assert M(u) == pytest.approx(0.5 * (max(vals) + min(vals)))
    assert len(M.vertices) == 2


def test_envelopes_single_point():
    U, L, M = envelopes([(2.0, 3.0)])
    for u in (-1.0, 0.0, 5.0):
        assert U(u) == L(u) == M(u) == 2 * u - 3


def test_envelope_breaks_are_hull_edge_slopes():
    U, L, _ = envelopes(SQ4)
    dec = antipodal_decomposition(SQ4)
    finite = sorted(iv.u_lo for iv in dec if math.isfinite(iv.u_lo))
    assert sorted(set(U.breaks) | set(L.breaks)) == pytest.approx(finite)


def test_empty_subset_gives_envelopes():
    for pts in (SQ5, TRI3):
        U, L, _ = envelopes(pts)
        qp, qm = mid_chains(pts, [])
        assert qp == U and qm == L


def test_single_subset_line_clips_to_m():
    rng = np.random.default_rng(3)
    xy = random_points(rng, 15)
    U, L, M = envelopes(xy)
    for p in range(len(xy)):
        qp, qm = mid_chains(xy, [p])
        for u in rng.normal(0, 3, 200):
            v = xy[p, 0] * u - xy[p, 1]
            m = M(u)
            tol = 1e-9 * (1 + abs(m))
            if abs(v - m) <= tol:
                continue
            assert qp(u) == pytest.approx(v if v > m else U(u), abs=1e-9)
            assert qm(u) == pytest.approx(v if v < m else L(u), abs=1e-9)


def test_middle_line_is_equidistant():
    rng = np.random.default_rng(5)
    xy = random_points(rng, 20)
    _, _, M = envelopes(xy)
    for u in rng.normal(0, 2, 300):
        theta = math.atan(u)
        h = primal_offsets(xy, theta)
        # the dual point (u, M(u)) is the primal line y = u x - M(u)
        h_line = -M(u) * math.cos(theta)
        assert h.max() - h_line == pytest.approx(h_line - h.min(), abs=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_chains_match_primal_quantities(seed):
    rng = np.random.default_rng(seed)
    xy = random_points(rng, 30, "grid" if seed % 2 else "uniform")
    n = len(xy)
    subset = sorted(rng.choice(n, size=n // 2, replace=False).tolist())
    lines = DualLines(xy)
    U, L, M = envelopes(xy, lines)
    qp, qm = mid_chains(xy, subset, lines)
    for u in rng.normal(0, 2, 300):
        theta = math.atan(u)
        c = math.cos(theta)
        hi, lo, mid, q_plus, q_minus = _primal_at(xy, theta, subset, 1e-9)
        assert -L(u) * c == pytest.approx(hi, abs=1e-9)
        assert -U(u) * c == pytest.approx(lo, abs=1e-9)
        assert -M(u) * c == pytest.approx(mid, abs=1e-9)
        assert -qm(u) * c == pytest.approx(q_plus, abs=1e-9)
        assert -qp(u) * c == pytest.approx(q_minus, abs=1e-9)
