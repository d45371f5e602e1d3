"""Envelopes U, L, the midpoint chain M and the cut chains Q+ / Q- in the dual plane.

A point (x, y) dualizes to the line v = x*u - y.  We keep every dual line as
slope A = x and intercept C = -y so v(u) = A*u + C.  With u = tan(theta),
v_p(u) = -h_p(theta) / cos(theta), so larger v means a lower theta-aligned line.

Crossing coordinates are always produced by :func:`cross` and :func:`cross_m`,
with the line pair in canonical order, so two code paths that meet at the same
vertex produce bit-identical floats.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .geom import as_pointset
from .hull import AntipodalDecomposition, antipodal_decomposition

REL = 1e-12


@dataclass(frozen=True)
class MSegment:
    """One piece of M: u-range, antipodal pair and M(u) = alpha*u + gamma."""

    index: int
    u_lo: float
    u_hi: float
    theta_lo: float
    theta_hi: float
    chi_plus: int
    chi_minus: int
    alpha: float
    gamma: float


class DualLines:
    """Slopes/intercepts of all dual lines of a point set plus the M segments."""

    def __init__(self, points, decomposition: AntipodalDecomposition | None = None):
        self.points = as_pointset(points)
        self.A = np.array(self.points.xy[:, 0], dtype=float)
        self.C = np.array(-self.points.xy[:, 1], dtype=float)
        self.decomposition = decomposition or antipodal_decomposition(self.points)
        segs = []
        for k, iv in enumerate(self.decomposition):
            alpha = 0.5 * (self.A[iv.chi_plus] + self.A[iv.chi_minus])
            gamma = 0.5 * (self.C[iv.chi_plus] + self.C[iv.chi_minus])
            segs.append(MSegment(k, iv.u_lo, iv.u_hi, iv.theta_lo, iv.theta_hi, iv.chi_plus, iv.chi_minus, alpha, gamma))
        self.segments = tuple(segs)
        self.seg_starts = [s.u_lo for s in segs]
        self.scale = 1.0 + float(np.abs(self.points.xy).max()) if len(self.points) else 1.0

    def __len__(self):
        return len(self.A)

    def value(self, i: int, u: float) -> float:
        return self.A[i] * u + self.C[i]

    def segment_at(self, u: float) -> MSegment:
        k = max(bisect.bisect_right(self.seg_starts, u) - 1, 0)
        return self.segments[k]

    def cross(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        den = self.A[i] - self.A[j]
        if den == 0:
            return math.nan
        return float((self.C[j] - self.C[i]) / den)

    def cross_many(self, i: int, js: np.ndarray) -> np.ndarray:
        lo = np.minimum(i, js)
        hi = np.maximum(i, js)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.C[hi] - self.C[lo]) / (self.A[lo] - self.A[hi])

    def cross_m_many(self, js: np.ndarray, seg: MSegment) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return (seg.gamma - self.C[js]) / (self.A[js] - seg.alpha)

    def cross_m(self, i: int, seg: MSegment) -> float:
        den = self.A[i] - seg.alpha
        if den == 0:
            return math.nan
        return float((seg.gamma - self.C[i]) / den)


def _rel_to(A, C, u, a0, c0, tol):
    """Sign of line - reference just to the right of u (vectorized)."""
    ds = A - a0
    if u == -math.inf:
        dv = C - c0
        sgn = np.where(ds != 0, -np.sign(ds), np.sign(dv))
        return sgn.astype(int)
    d = A * u + C - (a0 * u + c0)
    t = tol * (1.0 + abs(u))
    sgn = np.where(np.abs(d) > t, np.sign(d), np.sign(ds))
    return sgn.astype(int)


def walk_chain(lines: DualLines, seg: MSegment, u0: float, u1: float, ids, envelope: int, upper: bool):
    """Walk one side of M over [u0, u1) inside a single M segment.

    With ``upper`` the result is Q+: the lower envelope of the lines strictly
    above M, falling back on U.  Otherwise Q-: the upper envelope of lines on
    or below M, falling back on L.  Returns [(u_start, line id), ...].
    """
    ids = np.unique(np.append(np.asarray(ids, dtype=int), envelope))
    s = 1.0 if upper else -1.0
    A = s * lines.A[ids]
    C = s * lines.C[ids]
    alpha, gamma = s * seg.alpha, s * seg.gamma
    tol = REL * lines.scale
    env_pos = int(np.searchsorted(ids, envelope))
    pieces = []
    cur = u0
    while True:
        rel = _rel_to(A, C, cur, alpha, gamma, tol)
        member = rel > 0 if upper else rel >= 0
        if not member.any():
            member = np.zeros(len(ids), bool)
            member[env_pos] = True
        cand = np.nonzero(member)[0]
        if cur == -math.inf:
            best = cand[A[cand] == A[cand].max()]
            c = best[np.argmin(C[best])]
        else:
            v = A[cand] * cur + C[cand]
            near = cand[v <= v.min() + tol * (1.0 + abs(cur))]
            c = near[np.argmin(A[near])]
        cid = int(ids[c])
        if not pieces or pieces[-1][1] != cid:
            pieces.append((cur, cid))
        nxt = u1
        if A[c] < alpha:
            e = lines.cross_m(cid, seg)
            if cur < e < nxt:
                nxt = e
        others = ids[cand[A[cand] < A[c]]]
        rising = ids[np.nonzero(~member & (A > alpha))[0]]
        ev = np.concatenate([lines.cross_many(cid, others), lines.cross_m_many(rising, seg)])
        ev = ev[ev > cur]
        if len(ev):
            nxt = min(nxt, float(ev.min()))
        if nxt >= u1:
            return pieces
        cur = nxt


@dataclass(frozen=True)
class EnvelopeChain:
    """Piecewise-linear function of u: piece k spans [breaks[k-1], breaks[k])."""

    breaks: tuple
    ids: tuple
    coeffs: tuple  # (slope, intercept) per piece

    def piece(self, u: float) -> int:
        return bisect.bisect_right(self.breaks, u)

    def __call__(self, u: float) -> float:
        a, c = self.coeffs[self.piece(u)]
        return a * u + c

    def line_at(self, u: float):
        return self.ids[self.piece(u)]

    @property
    def vertices(self) -> list[tuple[float, float]]:
        return [(u, self(u)) for u in self.breaks]


def _chain_from_pieces(pieces, lines: DualLines) -> EnvelopeChain:
    merged = []
    for u, i in pieces:
        if merged and merged[-1][1] == i:
            continue
        if merged and merged[-1][0] == u:
            merged[-1] = (u, i)
            continue
        merged.append((u, i))
    breaks = tuple(u for u, _ in merged[1:])
    ids = tuple(i for _, i in merged)
    coeffs = tuple((float(lines.A[i]), float(lines.C[i])) for i in ids)
    return EnvelopeChain(breaks, ids, coeffs)


def envelopes(points, lines: DualLines | None = None):
    """(U, L, M) chains; U and L ids are point ids, M ids are segment indices."""
    lines = lines or DualLines(points)
    U = _chain_from_pieces([(s.u_lo, s.chi_minus) for s in lines.segments], lines)
    L = _chain_from_pieces([(s.u_lo, s.chi_plus) for s in lines.segments], lines)
    segs = lines.segments
    M = EnvelopeChain(tuple(s.u_lo for s in segs[1:]), tuple(s.index for s in segs), tuple((s.alpha, s.gamma) for s in segs))
    return U, L, M


def chain_pieces(lines: DualLines, subset, upper: bool, u0: float = -math.inf, u1: float = math.inf):
    """Raw (u_start, id, segment) pieces of Q+ (upper) or Q- over [u0, u1)."""
    subset = np.asarray(sorted(set(int(i) for i in subset)), dtype=int)
    out = []
    for seg in lines.segments:
        lo, hi = max(seg.u_lo, u0), min(seg.u_hi, u1)
        if lo >= hi:
            continue
        env = seg.chi_minus if upper else seg.chi_plus
        for u, i in walk_chain(lines, seg, lo, hi, subset, env, upper):
            out.append((u, i, seg.index))
    return out


def mid_chains(points, subset, lines: DualLines | None = None):
    """(Q+, Q-) for the dual lines of ``subset``; the empty subset gives (U, L)."""
    lines = lines or DualLines(points)
    qp = _chain_from_pieces([(u, i) for u, i, _ in chain_pieces(lines, subset, True)], lines)
    qm = _chain_from_pieces([(u, i) for u, i, _ in chain_pieces(lines, subset, False)], lines)
    return qp, qm


@dataclass(frozen=True)
class TuplePiece:
    """A maximal u-interval on which (chi+, chi-, q+, q-) stays fixed.

    q+ comes from the Q- chain and q- from the Q+ chain; where no subset line
    is on the relevant side they fall back on chi+ / chi-.
    """

    u_lo: float
    u_hi: float
    seg: int
    chi_plus: int
    chi_minus: int
    q_plus: int
    q_minus: int

    @property
    def theta_lo(self) -> float:
        return math.atan(self.u_lo)

    @property
    def theta_hi(self) -> float:
        return math.atan(self.u_hi)

    @property
    def tuple(self):
        return (self.chi_plus, self.chi_minus, self.q_plus, self.q_minus)


def tuple_pieces(lines: DualLines, subset, u0: float = -math.inf, u1: float = math.inf) -> list[TuplePiece]:
    """Trapezoids of the vertical decomposition between Q+ and Q- over [u0, u1)."""
    subset = np.asarray(sorted(set(int(i) for i in subset)), dtype=int)
    out = []
    for seg in lines.segments:
        lo, hi = max(seg.u_lo, u0), min(seg.u_hi, u1)
        if lo >= hi:
            continue
        ceil = walk_chain(lines, seg, lo, hi, subset, seg.chi_minus, True)
        floor = walk_chain(lines, seg, lo, hi, subset, seg.chi_plus, False)
        cuts = sorted({u for u, _ in ceil} | {u for u, _ in floor})
        ci = fi = 0
        for k, u in enumerate(cuts):
            while ci + 1 < len(ceil) and ceil[ci + 1][0] <= u:
                ci += 1
            while fi + 1 < len(floor) and floor[fi + 1][0] <= u:
                fi += 1
            end = cuts[k + 1] if k + 1 < len(cuts) else hi
            out.append(TuplePiece(u, end, seg.index, seg.chi_plus, seg.chi_minus, floor[fi][1], ceil[ci][1]))
    return out
