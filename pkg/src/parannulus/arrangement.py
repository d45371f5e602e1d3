"""Exact arrangement of dual lines as a doubly-connected edge list.

Lines are stored as v = A*u + C with rational A, C (the dual of (x, y) has
A = x, C = -y).  Vertices are merged exactly, so concurrent lines share one
vertex.  Unbounded edges end at symbolic +-inf; the ray ends are ordered
counter-clockwise around a circle at infinity so face tracing treats them as
ordinary edges meeting at a single vertex at infinity.  That gives the
Euler relation V - E + F = 1 for the finite vertices.

Per-line vertex lists are updated incrementally by insert/delete; the
half-edge and face records are rebuilt on the next query that needs them.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dual import EnvelopeChain
from .dual import mid_chains as _mid_chains
from .geom import DualLine, GeometryError


def _frac(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(float(x))


def _fmt(x) -> str:
    if x is None:
        return "inf"
    return str(x)


def _line_coeffs(line):
    """(A, C) of v = A*u + C from a DualLine, an (a, b) pair or a point."""
    if isinstance(line, DualLine):
        return _frac(line.a), -_frac(line.b)
    a, b = line
    return _frac(a), -_frac(b)


@dataclass(frozen=True)
class ZoneReport:
    faces: tuple  # face ids in left-to-right order
    crossings: tuple  # (u, v, line id) where the walked line leaves a face
    edges: tuple  # half-edge ids crossed
    complexity: int  # total boundary half-edges of the zone faces

    @property
    def size(self) -> int:
        return len(self.faces) + len(self.crossings)


class DualArrangement:
    def __init__(self):
        self.lines: dict = {}  # id -> (A, C)
        self.multiplicity: dict = {}
        self._by_coeffs: dict = {}
        self.vertices: dict = {}  # (u, v) -> set of line ids
        self.on_line: dict = {}  # id -> sorted u of its vertices
        self._dcel = None

    # ---- line set -------------------------------------------------------
    def __len__(self):
        return len(self.lines)

    def _next_id(self):
        return max(self.lines, default=-1) + 1

    def insert_line(self, line, line_id=None) -> dict:
        """Add a line; a duplicate only bumps its multiplicity.

        Returns the created vertices and the destroyed/created edges
        (line id, u_lo, u_hi) with None standing for an infinite end.
        """
        A, C = _line_coeffs(line)
        report = {"id": None, "created_vertices": [], "destroyed_edges": [], "created_edges": []}
        if (A, C) in self._by_coeffs:
            lid = self._by_coeffs[(A, C)]
            self.multiplicity[lid] += 1
            report["id"] = lid
            return report
        lid = self._next_id() if line_id is None else line_id
        if lid in self.lines:
            raise GeometryError(f"line id {lid} already used")
        self._dcel = None
        us = []
        for k, (Ak, Ck) in self.lines.items():
            if Ak == A:
                continue
            u = (Ck - C) / (A - Ak)
            key = (u, A * u + C)
            if key not in self.vertices:
                self.vertices[key] = {k}
                report["created_vertices"].append(key)
            verts = self.vertices[key]
            us.append(u)
            on_k = self.on_line[k]
            pos = bisect.bisect_left(on_k, u)
            if pos == len(on_k) or on_k[pos] != u:
                lo = on_k[pos - 1] if pos > 0 else None
                hi = on_k[pos] if pos < len(on_k) else None
                report["destroyed_edges"].append((k, lo, hi))
                report["created_edges"].extend([(k, lo, u), (k, u, hi)])
                on_k.insert(pos, u)
            verts.add(lid)
        self.lines[lid] = (A, C)
        self.multiplicity[lid] = 1
        self._by_coeffs[(A, C)] = lid
        self.on_line[lid] = sorted(set(us))
        report["created_edges"].extend(self._edges_of(lid))
        report["id"] = lid
        return report

    def delete_line(self, lid) -> dict:
        """Remove one copy of a line; raises if it is absent."""
        if lid not in self.lines:
            raise GeometryError(f"line {lid} is not in the arrangement")
        report = {"id": lid, "destroyed_vertices": [], "destroyed_edges": [], "created_edges": []}
        if self.multiplicity[lid] > 1:
            self.multiplicity[lid] -= 1
            return report
        self._dcel = None
        A, C = self.lines[lid]
        report["destroyed_edges"].extend(self._edges_of(lid))
        for u in self.on_line[lid]:
            key = (u, A * u + C)
            verts = self.vertices[key]
            verts.discard(lid)
            if len(verts) >= 2:
                continue
            del self.vertices[key]
            report["destroyed_vertices"].append(key)
            for k in verts:
                on_k = self.on_line[k]
                pos = bisect.bisect_left(on_k, u)
                lo = on_k[pos - 1] if pos > 0 else None
                hi = on_k[pos + 1] if pos + 1 < len(on_k) else None
                report["destroyed_edges"].extend([(k, lo, u), (k, u, hi)])
                report["created_edges"].append((k, lo, hi))
                del on_k[pos]
        del self.lines[lid], self.multiplicity[lid], self.on_line[lid]
        del self._by_coeffs[(A, C)]
        return report

    def _edges_of(self, lid):
        bounds = [None] + list(self.on_line[lid]) + [None]
        return [(lid, bounds[k], bounds[k + 1]) for k in range(len(bounds) - 1)]

    def edges(self):
        out = []
        for lid in self.lines:
            out.extend(self._edges_of(lid))
        return out

    # ---- half-edges and faces -------------------------------------------
    def _build(self):
        if self._dcel is not None:
            return self._dcel
        h_line, h_lo, h_hi = [], [], []
        ends = []  # (key, arriving half-edge, leaving half-edge)
        outgoing: dict = {}
        for lid, (A, C) in self.lines.items():
            first = len(h_line) // 2
            for _, lo, hi in self._edges_of(lid):
                e = len(h_line) // 2
                h_line.extend([lid, lid])
                h_lo.extend([lo, lo])
                h_hi.extend([hi, hi])
                # half-edge 2e runs rightward (face above), 2e+1 leftward (face below)
                if lo is not None:
                    outgoing.setdefault((lo, A * lo + C), []).append(((0, A), 2 * e))
                if hi is not None:
                    outgoing.setdefault((hi, A * hi + C), []).append(((1, A), 2 * e + 1))
            last = len(h_line) // 2 - 1
            ends.append(((0, A, C, 0), 2 * last, 2 * last + 1))
            ends.append(((1, A, -C, 0), 2 * first + 1, 2 * first))
        ends.sort(key=lambda t: t[0])
        nxt = [0] * len(h_line)
        for k, (_, arriving, _) in enumerate(ends):
            nxt[arriving] = ends[(k + 1) % len(ends)][2]
        rank = {}
        for key, outs in outgoing.items():
            outs.sort(key=lambda t: t[0])
            for pos, (_, h) in enumerate(outs):
                rank[h] = (key, pos)
        for h in range(len(h_line)):
            right = h % 2 == 0
            dest = h_hi[h] if right else h_lo[h]
            if dest is None:
                continue
            key, pos = rank[h ^ 1]
            outs = outgoing[key]
            nxt[h] = outs[(pos - 1) % len(outs)][1]
        face_of = [-1] * len(h_line)
        faces = []
        for h in range(len(h_line)):
            if face_of[h] >= 0:
                continue
            cycle = []
            g = h
            while face_of[g] < 0:
                face_of[g] = len(faces)
                cycle.append(g)
                g = nxt[g]
            faces.append(tuple(cycle))
        if not faces:
            faces.append(())
        self._dcel = {
            "line": h_line,
            "lo": h_lo,
            "hi": h_hi,
            "next": nxt,
            "face_of": face_of,
            "faces": faces,
            "ends": ends,
        }
        return self._dcel

    def faces(self):
        return self._build()["faces"]

    def counts(self) -> tuple[int, int, int]:
        """(V, E, F) with E counting rays and full lines as edges."""
        d = self._build()
        return len(self.vertices), len(d["line"]) // 2, len(d["faces"])

    def euler_ok(self) -> bool:
        V, E, F = self.counts()
        return V - E + F == 1

    def face_sides(self, face: int) -> dict:
        """line id -> +1 if the face lies above that boundary line, -1 if below."""
        d = self._build()
        return {d["line"][h]: (1 if h % 2 == 0 else -1) for h in d["faces"][face]}

    # ---- zone walk --------------------------------------------------------
    def zone_walk(self, line) -> ZoneReport:
        """Faces met by ``line`` from left to right.

        The walked line is lifted by an infinitesimal, so it never passes
        through a vertex and, if it is already in the arrangement, it walks
        the faces just above its copy.
        """
        A0, C0 = _line_coeffs(line)
        d = self._build()
        if not d["ends"]:
            return ZoneReport((0,), (), (), 0)
        keys = [e[0] for e in d["ends"]]
        j = bisect.bisect_left(keys, (1, A0, -C0, -1))
        face = d["face_of"][d["ends"][j - 1][1]]
        at = None  # lexicographic (u, tie) of the entry point
        faces, crossings, edges = [face], [], []
        complexity = len(d["faces"][face])
        while True:
            best = None
            for h in d["faces"][face]:
                k = d["line"][h]
                Ak, Ck = self.lines[k]
                if Ak == A0:
                    continue
                u = (Ck - C0) / (A0 - Ak)
                pos = (u, 1 / (Ak - A0))
                lo, hi = d["lo"][h], d["hi"][h]
                if lo is not None and pos < (lo, 0):
                    continue
                if hi is not None and pos > (hi, 0):
                    continue
                if at is not None and pos <= at:
                    continue
                if best is None or pos < best[0]:
                    best = (pos, h, k)
            if best is None:
                break
            pos, h, k = best
            at = pos
            crossings.append((pos[0], A0 * pos[0] + C0, k))
            edges.append(h)
            face = d["face_of"][h ^ 1]
            faces.append(face)
            complexity += len(d["faces"][face])
        return ZoneReport(tuple(faces), tuple(crossings), tuple(edges), complexity)

    # ---- text dump --------------------------------------------------------
    def dump(self) -> str:
        """Canonical line-delimited dump: L (lines), V (vertices), E (edges)."""
        out = []
        for lid in sorted(self.lines):
            A, C = self.lines[lid]
            out.append(f"L {lid} {A} {-C} {self.multiplicity[lid]}")
        for u, v in sorted(self.vertices):
            out.append(f"V {u} {v}")
        for lid, lo, hi in sorted(self.edges(), key=lambda e: (e[0], e[1] is not None, e[1] or 0)):
            out.append(f"E {lid} {'-inf' if lo is None else lo} {_fmt(hi)}")
        return "\n".join(out) + "\n"


def build_arrangement(lines) -> DualArrangement:
    """Arrangement of dual lines; a dict keeps its ids, a sequence uses positions."""
    arr = DualArrangement()
    items = lines.items() if isinstance(lines, dict) else enumerate(lines)
    for lid, line in items:
        arr.insert_line(line, lid)
    return arr


def insert_line(arr: DualArrangement, line, line_id=None) -> dict:
    return arr.insert_line(line, line_id)


def delete_line(arr: DualArrangement, line_id) -> dict:
    return arr.delete_line(line_id)


def zone_walk(arr: DualArrangement, line) -> ZoneReport:
    return arr.zone_walk(line)


def _envelope(arr: DualArrangement, upper: bool) -> EnvelopeChain:
    s = 1 if upper else -1
    best = {}
    for lid, (A, C) in arr.lines.items():
        if A not in best or s * C > s * arr.lines[best[A]][1]:
            best[A] = lid
    stack = []  # (line id, start u)
    for A in sorted(best, reverse=not upper):
        lid = best[A]
        C = arr.lines[lid][1]
        while stack:
            top, start = stack[-1]
            At, Ct = arr.lines[top]
            u = (Ct - C) / (A - At)
            if start is not None and u <= start:
                stack.pop()
                continue
            stack.append((lid, u))
            break
        else:
            stack.append((lid, None))
    ids = [lid for lid, _ in stack]
    breaks = [u for _, u in stack[1:]]
    return EnvelopeChain(tuple(breaks), tuple(ids), tuple(arr.lines[i] for i in ids))


def envelopes(arr: DualArrangement):
    """Exact (U, L, M); M's ids are (U line, L line) pairs."""
    if not arr.lines:
        raise GeometryError("envelopes of an empty arrangement")
    U = _envelope(arr, True)
    L = _envelope(arr, False)
    breaks = tuple(sorted(set(U.breaks) | set(L.breaks)))
    probes = [breaks[0] - 1, *breaks] if breaks else [Fraction(0)]
    ids, coeffs = [], []
    for u in probes:
        iu, il = U.line_at(u), L.line_at(u)
        (a1, c1), (a2, c2) = arr.lines[iu], arr.lines[il]
        ids.append((iu, il))
        coeffs.append(((a1 + a2) / 2, (c1 + c2) / 2))
    return U, L, EnvelopeChain(breaks, tuple(ids), tuple(coeffs))


def mid_chains(arr: DualArrangement, subset=()):
    """(Q+, Q-) for the lines ``subset``; ids are arrangement line ids."""
    order = sorted(arr.lines)
    pts = np.array([[float(arr.lines[i][0]), float(-arr.lines[i][1])] for i in order])
    pos = {lid: k for k, lid in enumerate(order)}
    qp, qm = _mid_chains(pts, [pos[i] for i in subset])
    relabel = lambda ch: EnvelopeChain(ch.breaks, tuple(order[i] for i in ch.ids), ch.coeffs)  # noqa: E731
    return relabel(qp), relabel(qm)
