import math

import numpy as np
import pytest

from _shared import HALF_PI, SQ4, SQ5, TRI3, primal_offsets, primal_width, random_points, sampled_min
from parannulus import minimize_on_interval, solve_all_orientations, solve_fixed, tuple_intervals
from parannulus.geom import sigma


def test_solve_fixed_examples():
    ds, w = solve_fixed(SQ5, 0.0)
    assert w == pytest.approx(0.5)
    assert (ds.outer.lo, ds.outer.hi) == pytest.approx((0.0, 1.0))
    assert ds.inner.width == pytest.approx(0.0)
    _, w = solve_fixed(SQ4, 0.0)
    assert w == 0.0
    _, w = solve_fixed(SQ5, -math.pi / 4)
    assert w == pytest.approx(math.sqrt(2) / 2)


@pytest.mark.parametrize("seed", range(5))
def test_solve_fixed_encloses_and_is_tight(seed):
    rng = np.random.default_rng(seed)
    xy = random_points(rng, 50)
    for theta in rng.uniform(-HALF_PI, HALF_PI, 20):
        ds, w = solve_fixed(xy, float(theta))
        assert w == pytest.approx(primal_width(xy, theta), abs=1e-12)
        assert ds.contains(xy).all()
        assert ds.width == pytest.approx(w, abs=1e-12)


def _width_from_tuple(xy, tup, theta):
    cp, cm, qp, qm = tup
    return max(sigma(xy[qp], xy[cp], theta), sigma(xy[qm], xy[cm], theta))


@pytest.mark.parametrize("pts", [SQ5, TRI3], ids=["sq5", "tri3"])
def test_tuple_intervals_examples(pts):
    xy = np.array(pts, dtype=float)
    pieces = tuple_intervals(xy)
    assert pieces[0].theta_lo == -HALF_PI and pieces[-1].theta_hi == HALF_PI
    for a, b in zip(pieces, pieces[1:]):
        assert a.u_hi == b.u_lo
    for t in np.linspace(-HALF_PI, HALF_PI, 10000, endpoint=False)[1:]:
        piece = next(p for p in pieces if p.theta_lo <= t < p.theta_hi)
        assert _width_from_tuple(xy, piece.tuple, t) == pytest.approx(primal_width(xy, t), abs=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_tuple_intervals_random(seed):
    rng = np.random.default_rng(seed)
    xy = random_points(rng, 20, "grid" if seed % 2 else "uniform")
    pieces = tuple_intervals(xy)
    for piece in pieces:
        lo, hi = piece.theta_lo, piece.theta_hi
        for t in np.linspace(lo, hi, 7)[1:-1]:
            assert _width_from_tuple(xy, piece.tuple, t) == pytest.approx(primal_width(xy, t), abs=1e-9)


def test_minimize_on_interval_examples():
    xy = np.array(SQ5, dtype=float)
    piece = next(p for p in tuple_intervals(xy) if p.theta_lo <= 0.0 < p.theta_hi)
    t, w = minimize_on_interval(xy, piece.tuple, piece.theta_lo, piece.theta_hi)
    assert (t, w) == pytest.approx((0.0, 0.5), abs=1e-12)
    # both branches vanish: constant zero, left end wins
    t, w = minimize_on_interval(xy, (0, 2, 0, 2), -0.3, 0.4)
    assert (t, w) == (-0.3, 0.0)


@pytest.mark.parametrize("seed", range(6))
def test_minimize_on_interval_beats_sampling(seed):
    rng = np.random.default_rng(seed)
    xy = random_points(rng, 12)
    for piece in tuple_intervals(xy):
        lo, hi = piece.theta_lo, piece.theta_hi
        t, w = minimize_on_interval(xy, piece.tuple, lo, hi)
        assert lo <= t <= hi
        assert w == pytest.approx(_width_from_tuple(xy, piece.tuple, t), abs=1e-12)
        ts = np.linspace(lo, hi, 400)
        assert w <= min(_width_from_tuple(xy, piece.tuple, s) for s in ts) + 1e-12


@pytest.mark.parametrize(
    "pts,want",
    [(SQ4, 0.0), (SQ5, 0.5), (TRI3, 0.0), ([(0, 0), (2, 1), (5, 7)], 0.0), ([(1, 1)], 0.0)],
    ids=["sq4", "sq5", "tri3", "three", "one"],
)
def test_solve_all_orientations_examples(pts, want):
    sol = solve_all_orientations(pts)
    assert sol.width == pytest.approx(want, abs=1e-12)
    assert sol.double_strip.contains(np.array(pts, dtype=float)).all()


@pytest.mark.parametrize("seed", range(6))
def test_solve_all_orientations_lower_than_sampling(seed):
    rng = np.random.default_rng(seed)
    xy = random_points(rng, 15, "ring" if seed % 2 else "uniform")
    sol = solve_all_orientations(xy)
    assert sol.width == pytest.approx(primal_width(xy, sol.theta), abs=1e-9)
    assert sol.width <= sampled_min(xy, samples=10000) + 1e-12
    assert sol.double_strip.contains(xy).all()
    h = primal_offsets(xy, sol.theta)
    assert (sol.double_strip.outer.lo, sol.double_strip.outer.hi) == pytest.approx((h.min(), h.max()))
