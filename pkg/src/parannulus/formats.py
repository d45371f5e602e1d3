"""Text formats: point files, subset files, dynamic op scripts, result documents."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .geom import HALF_PI, DoubleStrip, GeometryError, ParallelogramAnnulus, PointSet, Strip, normal, normalize_angle, offsets


class ParseError(GeometryError):
    pass


def _lines(source):
    if hasattr(source, "read"):
        return source.read().splitlines()
    with open(source, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _tokens(lines):
    for no, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if text:
            yield no, text.split()


def parse_points(source) -> PointSet:
    """Read ``x y`` lines; ``#`` starts a comment.  Duplicates are dropped and counted."""
    pts = []
    for no, tok in _tokens(_lines(source)):
        if len(tok) != 2:
            raise ParseError(f"line {no}: expected 'x y', got {' '.join(tok)!r}")
        try:
            x, y = float(tok[0]), float(tok[1])
        except ValueError:
            raise ParseError(f"line {no}: not a number in {' '.join(tok)!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError(f"line {no}: non-finite coordinate")
        pts.append((x, y))
    if not pts:
        raise ParseError("no points in input")
    return PointSet(pts)


def parse_subset(source, points: PointSet) -> list[int]:
    """Subset file: one point id per line, or ``x y`` of a point of the set."""
    ids = []
    for no, tok in _tokens(_lines(source)):
        try:
            if len(tok) == 1:
                i = int(tok[0])
                if not 0 <= i < len(points):
                    raise ParseError(f"line {no}: id {i} out of range")
            elif len(tok) == 2:
                i = points.index((float(tok[0]), float(tok[1])))
            else:
                raise ParseError(f"line {no}: expected an id or 'x y'")
        except (ValueError, KeyError) as exc:
            raise ParseError(f"line {no}: {exc}") from None
        ids.append(i)
    return sorted(set(ids))


@dataclass(frozen=True)
class ScriptOp:
    op: str
    point: tuple
    line: int


def parse_script(source) -> tuple[float | None, list[ScriptOp]]:
    """JSONL op script; an optional header record carries {"threshold": w}."""
    threshold = None
    ops = []
    for no, raw in enumerate(_lines(source), 1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {no}: {exc.msg}") from None
        if not isinstance(rec, dict):
            raise ParseError(f"line {no}: expected a JSON object")
        if "threshold" in rec and "op" not in rec:
            threshold = float(rec["threshold"])
            continue
        op = rec.get("op")
        if op not in ("insert", "delete", "query", "decide"):
            raise ParseError(f"line {no}: unknown op {op!r}")
        pt = rec.get("point")
        if op in ("insert", "delete"):
            if not (isinstance(pt, list) and len(pt) == 2):
                raise ParseError(f"line {no}: {op} needs \"point\": [x, y]")
            pt = (float(pt[0]), float(pt[1]))
        ops.append(ScriptOp(op, pt, no))
    return threshold, ops


# ---- instance generation -------------------------------------------------


def generate(n: int, seed: int, dist: str, thickness: float | None = None) -> tuple[np.ndarray, dict]:
    """Random instance; returns the points and a dict of generator facts."""
    if n < 1:
        raise GeometryError("n must be positive")
    rng = np.random.default_rng(seed)
    if dist == "uniform":
        return rng.random((n, 2)), {}
    if dist == "ring":
        t = 0.1 if thickness is None else float(thickness)
        a = rng.uniform(0, 2 * math.pi, n)
        r = rng.uniform(1 - t, 1, n)
        return np.c_[r * np.cos(a), r * np.sin(a)], {"thickness": t}
    if dist == "parallelogram-ring":
        theta = float(rng.uniform(-HALF_PI, HALF_PI))
        phi = normalize_angle(theta + float(rng.uniform(math.pi / 6, 5 * math.pi / 6)))
        w1, w2 = rng.uniform(1, 2, 2)
        t = float(0.1 * min(w1, w2)) if thickness is None else float(thickness)
        mat = np.linalg.inv(np.array([normal(theta), normal(phi)]))
        if not 0 <= t <= 0.5 * min(w1, w2):
            raise GeometryError("thickness must lie in [0, half the smaller side]")
        # pick a side, then a depth in [0, t] and a position along it
        side = rng.integers(0, 4, n)
        depth = rng.uniform(0, t, n)
        h1 = np.where(side == 0, depth, np.where(side == 1, w1 - depth, rng.uniform(0, w1, n)))
        h2 = np.where(side == 2, depth, np.where(side == 3, w2 - depth, rng.uniform(0, w2, n)))
        pts = np.c_[h1, h2] @ mat.T
        return pts, {"thickness": t, "theta": theta, "phi": phi}
    raise GeometryError(f"unknown distribution {dist!r}")


def format_points(xy: np.ndarray, facts: dict | None = None) -> str:
    out = [f"# {k} {v!r}" for k, v in (facts or {}).items()]
    out.extend(f"{x!r} {y!r}" for x, y in np.asarray(xy, dtype=float).tolist())
    return "\n".join(out) + "\n"


# ---- result documents ----------------------------------------------------


def _touching(xy, strip: Strip, lo: float, hi: float, tol: float) -> list[int]:
    h = offsets(xy, strip.theta)
    return np.nonzero((np.abs(h - lo) <= tol) | (np.abs(h - hi) <= tol))[0].tolist()


def strip_doc(xy, strip: Strip, tol: float) -> dict:
    d = strip.to_dict()
    d["witness"] = {"outer": _touching(xy, strip, strip.lo, strip.hi, tol)}
    return d


def double_strip_doc(xy, ds: DoubleStrip, tol: float) -> dict:
    d = ds.to_dict()
    d["witness"] = {
        "outer": _touching(xy, ds.outer, ds.outer.lo, ds.outer.hi, tol),
        "inner": _touching(xy, ds.inner, ds.inner.lo, ds.inner.hi, tol),
    }
    return d


def annulus_doc(xy, ann: ParallelogramAnnulus, tol: float) -> dict:
    d = ann.to_dict()
    d["d1"] = double_strip_doc(xy, ann.d1, tol)
    d["d2"] = double_strip_doc(xy, ann.d2, tol)
    return d


def tolerance(points: PointSet) -> float:
    return 1e-9 * (1.0 + float(np.abs(points.xy).max()))


def dumps(doc: dict) -> str:
    """JSON with shortest round-trip float repr and sorted keys."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def strip_from_doc(d: dict) -> Strip:
    return Strip(float(d["theta"]), float(d["lo"]), float(d["hi"]))


def double_strip_from_doc(d: dict) -> DoubleStrip:
    return DoubleStrip(strip_from_doc(d["outer"]), strip_from_doc(d["inner"]))


def annulus_from_doc(d: dict) -> ParallelogramAnnulus:
    return ParallelogramAnnulus(double_strip_from_doc(d["d1"]), double_strip_from_doc(d["d2"]))
