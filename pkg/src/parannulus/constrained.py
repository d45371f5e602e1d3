"""P-constrained double-strips enclosing a subset Q: static, dynamic and offline.

The dynamic structures keep the vertical trapezoidal map between the dual
chains Q+ and Q- of the current subset.  Each trapezoid knows the fixed
(chi+, chi-, q+, q-) tuple over its u-interval and the minimum width reachable
there; the optimum for Q is the smallest such width, folded with the vertical
orientation which the dual parametrization cannot reach.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from .double_strip import DoubleStripSolution, build_solution, minimize_on_interval, vertical_candidate
from .dual import DualLines, tuple_pieces
from .geom import GeometryError, as_pointset
from .heap import IndexedHeap


class StateError(GeometryError):
    pass


class Trapezoid:
    __slots__ = ("u_lo", "u_hi", "seg", "chi_plus", "chi_minus", "q_plus", "q_minus", "theta", "width", "handle")

    def __init__(self, u_lo, u_hi, seg, chi_plus, chi_minus, q_plus, q_minus, xy):
        self.u_lo = u_lo
        self.u_hi = u_hi
        self.seg = seg
        self.chi_plus = chi_plus
        self.chi_minus = chi_minus
        self.q_plus = q_plus
        self.q_minus = q_minus
        self.theta, self.width = minimize_on_interval(xy, self.tuple, math.atan(u_lo), math.atan(u_hi))
        self.handle = None

    @property
    def tuple(self):
        return (self.chi_plus, self.chi_minus, self.q_plus, self.q_minus)

    @property
    def key(self):
        return (self.width, self.theta)

    @property
    def ident(self):
        return (self.u_lo, self.u_hi, self.seg, self.q_plus, self.q_minus)

    def __repr__(self):
        return f"Trapezoid([{self.u_lo:.6g}, {self.u_hi:.6g}), tuple={self.tuple}, w={self.width:.6g})"


def _midpoint(a: float, b: float) -> float:
    if a == -math.inf and b == math.inf:
        return 0.0
    if a == -math.inf:
        return b - max(1.0, abs(b))
    if b == math.inf:
        return a + max(1.0, abs(a))
    return 0.5 * (a + b)


def _runs(indices):
    runs = []
    for i in indices:
        if runs and runs[-1][1] == i - 1:
            runs[-1][1] = i
        else:
            runs.append([i, i])
    return runs


def _interval(s, r, c_ok, upward):
    """Where a line difference with slope s and root r has the wanted sign.

    ``upward`` selects the side u > r for positive slopes; ``c_ok`` decides
    the parallel case.  Vectorized; returns (lo, hi).
    """
    lo = np.where(s > 0, np.where(upward, r, -np.inf), np.where(upward, -np.inf, r))
    hi = np.where(s > 0, np.where(upward, np.inf, r), np.where(upward, r, np.inf))
    par = s == 0
    lo = np.where(par, np.where(c_ok, -np.inf, np.inf), lo)
    hi = np.where(par, np.where(c_ok, np.inf, -np.inf), hi)
    return lo, hi


class TrapezoidalMap:
    """Vertical decomposition of the region between Q+ and Q- for a subset Q."""

    def __init__(self, lines: DualLines, subset=()):
        self.lines = lines
        self.xy = lines.points.xy
        self.subset = set(int(i) for i in subset)
        self.alpha = np.array([s.alpha for s in lines.segments])
        self.gamma = np.array([s.gamma for s in lines.segments])
        self.tol = 1e-12 * lines.scale
        self.traps = [self._make(p) for p in tuple_pieces(lines, self.subset)]
        self._sync()

    def _make(self, piece) -> Trapezoid:
        return Trapezoid(piece.u_lo, piece.u_hi, piece.seg, piece.chi_plus, piece.chi_minus, piece.q_plus, piece.q_minus, self.xy)

    def _new(self, u_lo, u_hi, seg, q_plus, q_minus) -> Trapezoid:
        s = self.lines.segments[seg]
        return Trapezoid(u_lo, u_hi, seg, s.chi_plus, s.chi_minus, q_plus, q_minus, self.xy)

    def _sync(self):
        t = self.traps
        self.ulo = np.array([x.u_lo for x in t])
        self.uhi = np.array([x.u_hi for x in t])
        self.seg = np.array([x.seg for x in t], dtype=int)
        self.ceil = np.array([x.q_minus for x in t], dtype=int)
        self.floor = np.array([x.q_plus for x in t], dtype=int)

    def _splice(self, i0, i1, new):
        self.traps[i0 : i1 + 1] = new
        cat = np.concatenate
        self.ulo = cat([self.ulo[:i0], [x.u_lo for x in new], self.ulo[i1 + 1 :]])
        self.uhi = cat([self.uhi[:i0], [x.u_hi for x in new], self.uhi[i1 + 1 :]])
        self.seg = cat([self.seg[:i0], np.array([x.seg for x in new], dtype=int), self.seg[i1 + 1 :]])
        self.ceil = cat([self.ceil[:i0], np.array([x.q_minus for x in new], dtype=int), self.ceil[i1 + 1 :]])
        self.floor = cat([self.floor[:i0], np.array([x.q_plus for x in new], dtype=int), self.floor[i1 + 1 :]])

    def __len__(self):
        return len(self.traps)

    def __iter__(self):
        return iter(self.traps)

    def _absorb_neighbours(self, i0, i1, pieces):
        """Extend a rebuilt run over neighbours that continue its first/last piece."""
        if i0 > 0:
            left = self.traps[i0 - 1]
            u, seg, qp, qm = pieces[0]
            if (left.seg, left.q_plus, left.q_minus) == (seg, qp, qm):
                pieces[0] = (left.u_lo, seg, qp, qm)
                i0 -= 1
        u_end = self.traps[i1].u_hi
        if i1 + 1 < len(self.traps):
            right = self.traps[i1 + 1]
            if (right.seg, right.q_plus, right.q_minus) == pieces[-1][1:]:
                u_end = right.u_hi
                i1 += 1
        return i0, i1, pieces, u_end

    def _commit(self, i0, i1, pieces, u_end):
        merged = []
        for p in pieces:
            if merged and merged[-1][1:] == p[1:]:
                continue
            merged.append(p)
        bounds = [p[0] for p in merged] + [u_end]
        old = self.traps[i0 : i1 + 1]
        new = [self._new(bounds[k], bounds[k + 1], *merged[k][1:]) for k in range(len(merged))]
        self._splice(i0, i1, new)
        return old, new

    def insert(self, p: int):
        """Add p to Q; returns (destroyed, created) trapezoids."""
        if p in self.subset:
            raise StateError(f"point {p} already in the subset")
        L = self.lines
        ap, cp = L.A[p], L.C[p]
        al = self.alpha[self.seg]
        ga = self.gamma[self.seg]
        s_m = ap - al
        with np.errstate(divide="ignore", invalid="ignore"):
            r_m = (ga - cp) / s_m
        above_par = cp - ga > self.tol
        s_c = ap - L.A[self.ceil]
        r_c = L.cross_many(p, self.ceil)
        s_f = ap - L.A[self.floor]
        r_f = L.cross_many(p, self.floor)
        # new ceiling where M < l < ceiling
        lo1, hi1 = _interval(s_c, r_c, cp < L.C[self.ceil], False)
        lo2, hi2 = _interval(s_m, r_m, above_par, True)
        a = np.maximum.reduce([self.ulo, lo1, lo2])
        b = np.minimum.reduce([self.uhi, hi1, hi2])
        hit = b > a
        # new floor where floor < l <= M
        lo3, hi3 = _interval(s_f, r_f, cp > L.C[self.floor], True)
        lo4, hi4 = _interval(s_m, r_m, ~above_par, False)
        a = np.maximum.reduce([self.ulo, lo3, lo4])
        b = np.minimum.reduce([self.uhi, hi3, hi4])
        hit |= b > a
        self.subset.add(p)
        destroyed, created = [], []
        for i0, i1 in reversed(_runs(np.nonzero(hit)[0].tolist())):
            pieces = []
            for t in self.traps[i0 : i1 + 1]:
                seg = L.segments[t.seg]
                cuts = {t.u_lo}
                for r in (L.cross(p, t.q_minus), L.cross(p, t.q_plus), L.cross_m(p, seg)):
                    if t.u_lo < r < t.u_hi:
                        cuts.add(r)
                cuts = sorted(cuts) + [t.u_hi]
                for k in range(len(cuts) - 1):
                    m = _midpoint(cuts[k], cuts[k + 1])
                    lv = ap * m + cp
                    d = lv - (seg.alpha * m + seg.gamma)
                    tol = self.tol * (1.0 + abs(m))
                    ceil, floor = t.q_minus, t.q_plus
                    if d > tol and lv < L.A[ceil] * m + L.C[ceil]:
                        ceil = p
                    elif d <= tol and lv > L.A[floor] * m + L.C[floor]:
                        floor = p
                    pieces.append((cuts[k], t.seg, floor, ceil))
            i0, i1, pieces, u_end = self._absorb_neighbours(i0, i1, pieces)
            old, new = self._commit(i0, i1, pieces, u_end)
            destroyed.extend(old)
            created.extend(new)
        return destroyed, created

    def delete(self, p: int):
        """Remove p from Q; returns (destroyed, created) trapezoids."""
        if p not in self.subset:
            raise StateError(f"point {p} is not in the subset")
        self.subset.discard(p)
        hit = np.nonzero((self.ceil == p) | (self.floor == p))[0].tolist()
        destroyed, created = [], []
        for i0, i1 in reversed(_runs(hit)):
            u0, u1 = self.traps[i0].u_lo, self.traps[i1].u_hi
            pieces = [(pc.u_lo, pc.seg, pc.q_plus, pc.q_minus) for pc in tuple_pieces(self.lines, self.subset, u0, u1)]
            i0, i1, pieces, u_end = self._absorb_neighbours(i0, i1, pieces)
            old, new = self._commit(i0, i1, pieces, u_end)
            destroyed.extend(old)
            created.extend(new)
        return destroyed, created


def _check_subset(n, subset):
    out = []
    for i in subset:
        i = int(i)
        if not 0 <= i < n:
            raise StateError(f"subset id {i} out of range for {n} points")
        out.append(i)
    return sorted(set(out))


def _finish(xy, subset, best) -> DoubleStripSolution:
    wv, tv = vertical_candidate(xy, subset)
    if best is None or (wv, tv) <= best[:2]:
        return build_solution(xy, tv, wv)
    w, t, tup = best
    return build_solution(xy, t, w, tup)


def solve_constrained(points, subset, lines: DualLines | None = None) -> DoubleStripSolution:
    """Minimum-width P-constrained double-strip enclosing the points ``subset``."""
    ps = as_pointset(points)
    subset = _check_subset(len(ps), subset)
    lines = lines or DualLines(ps)
    tmap = TrapezoidalMap(lines, subset)
    best = None
    for t in tmap:
        if best is None or t.key < best[:2]:
            best = (t.width, t.theta, t.tuple)
    return _finish(ps.xy, subset, best)


def build_trapezoidal_map(points, subset, lines: DualLines | None = None) -> TrapezoidalMap:
    ps = as_pointset(points)
    return TrapezoidalMap(lines or DualLines(ps), _check_subset(len(ps), subset))


class DynamicState:
    """Online maintenance of w*_Q under single-point insertions and deletions.

    Without ``threshold`` a handle heap keyed by trapezoid width answers
    :meth:`query_min`.  With a threshold only a counter of trapezoids of width
    at most the threshold is kept, and :meth:`decide` answers threshold >= w*_Q.
    """

    def __init__(self, points, threshold: float | None = None, subset=(), lines: DualLines | None = None):
        self.points = as_pointset(points)
        self.lines = lines or DualLines(self.points)
        self.threshold = threshold
        self.map = TrapezoidalMap(self.lines, _check_subset(len(self.points), subset))
        self.heap = IndexedHeap() if threshold is None else None
        self.count = 0
        for t in self.map:
            self._add(t)

    @property
    def subset(self):
        return self.map.subset

    def _add(self, t: Trapezoid):
        if self.heap is not None:
            t.handle = self.heap.push(t.key, t)
        elif t.width <= self.threshold:
            self.count += 1

    def _drop(self, t: Trapezoid):
        if self.heap is not None:
            self.heap.remove(t.handle)
            t.handle = None
        elif t.width <= self.threshold:
            self.count -= 1

    def _apply(self, change):
        destroyed, created = change
        for t in destroyed:
            self._drop(t)
        for t in created:
            self._add(t)
        return destroyed, created

    def insert(self, p: int):
        _check_subset(len(self.points), [p])
        return self._apply(self.map.insert(int(p)))

    def delete(self, p: int):
        _check_subset(len(self.points), [p])
        return self._apply(self.map.delete(int(p)))

    def query_min(self) -> DoubleStripSolution:
        if self.heap is None:
            raise StateError("query_min needs an optimization state (no threshold)")
        best = None
        if len(self.heap):
            t = self.heap.peek().item
            best = (t.width, t.theta, t.tuple)
        return _finish(self.points.xy, self.subset, best)

    def decide(self) -> bool:
        """True iff threshold >= w*_Q."""
        if self.heap is not None:
            raise StateError("decide needs a threshold state")
        if self.count > 0:
            return True
        return vertical_candidate(self.points.xy, self.subset)[0] <= self.threshold


def offline_insertions(points, sequence, lines: DualLines | None = None) -> list[DoubleStripSolution]:
    """Optimal P-constrained double-strips for every prefix of ``sequence``.

    A forward pass records when each trapezoid is created and destroyed.  A
    backward pass then feeds the trapezoids destroyed by insertion i into a
    heap and lazily drops those created after prefix i, so the minimum for
    prefix i is taken over exactly the trapezoids alive at that time.  This is
    the recurrence w*_i = min(w*_{i+1}, widths destroyed by insertion i+1)
    without letting a trapezoid born later tie-break an earlier prefix.
    """
    ps = as_pointset(points)
    seq = [int(p) for p in sequence]
    _check_subset(len(ps), seq)
    if len(set(seq)) != len(seq):
        raise StateError("offline insertion sequence repeats a point")
    lines = lines or DualLines(ps)
    tmap = TrapezoidalMap(lines, ())
    born = {id(t): 0 for t in tmap}
    died = [[] for _ in seq]  # died[i]: (key, birth, tuple) of trapezoids destroyed by insertion i
    for i, p in enumerate(seq):
        destroyed, created = tmap.insert(p)
        died[i] = [(t.width, t.theta, born.pop(id(t)), t.tuple) for t in destroyed]
        born.update((id(t), i + 1) for t in created)
    heap = [(t.width, t.theta, born[id(t)], t.tuple) for t in tmap]
    heapq.heapify(heap)
    bests = [None] * (len(seq) + 1)
    for i in range(len(seq), -1, -1):
        if i < len(seq):
            for item in died[i]:
                heapq.heappush(heap, item)
        while heap and heap[0][2] > i:
            heapq.heappop(heap)
        bests[i] = (heap[0][0], heap[0][1], heap[0][3]) if heap else None
    return [_finish(ps.xy, seq[:i], bests[i]) for i in range(len(seq) + 1)]
