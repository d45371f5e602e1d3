"""Figures for result documents: hand-written SVG and an optional matplotlib PNG."""

from __future__ import annotations

import math

import numpy as np

from .formats import annulus_from_doc, double_strip_from_doc, strip_from_doc
from .geom import PointSet

BAND_FILL = "#9ecae1"
RING_FILL = "#fdd0a2"


def _box(xy: np.ndarray):
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    pad = 0.1 * max(float((hi - lo).max()), 1e-9)
    if float((hi - lo).max()) == 0.0:
        pad = 1.0
    return lo - pad, hi + pad


def _corners(lo, hi):
    return [(lo[0], lo[1]), (hi[0], lo[1]), (hi[0], hi[1]), (lo[0], hi[1])]


def _clip(poly, n, c, keep_below: bool):
    """Sutherland-Hodgman clip of ``poly`` to n.p <= c (or >= c)."""
    s = 1.0 if keep_below else -1.0
    out = []
    for k in range(len(poly)):
        p, q = poly[k], poly[(k + 1) % len(poly)]
        fp = s * (n[0] * p[0] + n[1] * p[1] - c)
        fq = s * (n[0] * q[0] + n[1] * q[1] - c)
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _band(box, theta, lo, hi):
    n = (-math.sin(theta), math.cos(theta))
    poly = _clip(_corners(*box), n, lo, keep_below=False)
    return _clip(poly, n, hi, keep_below=True) if poly else []


def _line(box, theta, h):
    n = np.array([-math.sin(theta), math.cos(theta)])
    d = np.array([math.cos(theta), math.sin(theta)])
    ts = [float(d @ np.array(c)) for c in _corners(*box)]
    base = h * n
    a, b = base + min(ts) * d, base + max(ts) * d
    return (float(a[0]), float(a[1])), (float(b[0]), float(b[1]))


def scene(points: PointSet, doc: dict) -> dict:
    """Renderer-neutral description: bands, lines, parallelograms, points."""
    xy = points.xy
    box = _box(xy)
    sc = {"box": box, "bands": [], "lines": [], "outer_paths": [], "inner_paths": [], "arrows": [], "witness": set()}
    geo = doc.get("geometry") or {}
    kind = geo.get("kind")
    if kind == "strip":
        s = strip_from_doc(geo["strip"])
        sc["bands"].append(_band(box, s.theta, s.lo, s.hi))
        sc["lines"].extend(("outer", _line(box, s.theta, h)) for h in (s.lo, s.hi))
        sc["witness"].update(geo["strip"]["witness"]["outer"])
    elif kind == "double-strip":
        ds = double_strip_from_doc(geo["double_strip"])
        _double_strip(sc, box, ds)
        for ids in geo["double_strip"]["witness"].values():
            sc["witness"].update(ids)
    elif kind == "annulus":
        ann = annulus_from_doc(geo["annulus"])
        sc["outer_paths"].append(ann.outer_corners())
        sc["inner_paths"].append(ann.inner_corners())
        for part, ds in (("d1", ann.d1), ("d2", ann.d2)):
            sc["lines"].extend(("outer", _line(box, ds.theta, h)) for h in (ds.outer.lo, ds.outer.hi))
            sc["lines"].extend(("inner", _line(box, ds.theta, h)) for h in (ds.inner.lo, ds.inner.hi))
            for ids in geo["annulus"][part]["witness"].values():
                sc["witness"].update(ids)
    return sc


def _double_strip(sc, box, ds):
    o, i, t = ds.outer, ds.inner, ds.theta
    sc["bands"].append(_band(box, t, o.lo, i.lo))
    sc["bands"].append(_band(box, t, i.hi, o.hi))
    sc["lines"].extend(("outer", _line(box, t, h)) for h in (o.lo, o.hi))
    sc["lines"].extend(("inner", _line(box, t, h)) for h in (i.lo, i.hi))
    mid = _line(box, t, 0.5 * (o.lo + o.hi))
    centre = np.mean(np.array(mid), axis=0)
    n = np.array([-math.sin(t), math.cos(t)])
    base = centre - n * (n @ centre)
    sc["arrows"].append((tuple(base + o.hi * n), tuple(base + i.hi * n)))


def render_svg(points: PointSet, doc: dict, size: int = 600) -> bytes:
    sc = scene(points, doc)
    (x0, y0), (x1, y1) = sc["box"]
    scale = size / max(x1 - x0, y1 - y0)
    w, h = (x1 - x0) * scale, (y1 - y0) * scale

    def pt(p):
        return f"{(p[0] - x0) * scale:.4f},{(y1 - p[1]) * scale:.4f}"

    def path(poly):
        return "M " + " L ".join(pt(p) for p in poly) + " Z" if poly else ""

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.2f}" height="{h:.2f}" viewBox="0 0 {w:.4f} {h:.4f}">',
        '<defs><marker id="head" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto">'
        '<path d="M0,0 L8,4 L0,8 z" fill="#333"/></marker></defs>',
        f'<rect class="background" x="0" y="0" width="{w:.4f}" height="{h:.4f}" fill="white"/>',
    ]
    if sc["outer_paths"]:
        ring = " ".join(path(p) for p in sc["outer_paths"] + sc["inner_paths"])
        out.append(f'<path class="annulus-region" d="{ring}" fill="{RING_FILL}" fill-rule="evenodd"/>')
    for band in sc["bands"]:
        out.append(f'<polygon class="band" points="{" ".join(pt(p) for p in band)}" fill="{BAND_FILL}" fill-opacity="0.7"/>')
    for cls, (a, b) in sc["lines"]:
        dash = ' stroke-dasharray="4 3"' if cls == "inner" else ""
        out.append(f'<polyline class="{cls}" points="{pt(a)} {pt(b)}" stroke="#08519c" stroke-width="1"{dash} fill="none"/>')
    for cls, polys in (("outer-parallelogram", sc["outer_paths"]), ("inner-parallelogram", sc["inner_paths"])):
        for poly in polys:
            out.append(f'<path class="{cls}" d="{path(poly)}" stroke="#a63603" stroke-width="1.5" fill="none"/>')
    for a, b in sc["arrows"]:
        out.append(f'<polyline class="width-arrow" points="{pt(a)} {pt(b)}" stroke="#333" marker-end="url(#head)" fill="none"/>')
    for k, p in enumerate(points):
        cls = "point witness" if k in sc["witness"] else "point"
        fill = "#d62728" if k in sc["witness"] else "#222"
        x, y = pt(p).split(",")
        out.append(f'<circle class="{cls}" cx="{x}" cy="{y}" r="3" fill="{fill}"/>')
    if "width" in doc:
        out.append(f'<text x="6" y="16" font-family="sans-serif" font-size="12">{doc.get("problem", "")} width {doc["width"]!r}</text>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def render_png(points: PointSet, doc: dict, path: str, dpi: int = 120) -> None:
    """Draw the same scene with matplotlib (imported lazily)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import PathPatch, Polygon
    from matplotlib.path import Path

    sc = scene(points, doc)
    (x0, y0), (x1, y1) = sc["box"]
    fig, ax = plt.subplots(figsize=(6, 6 * (y1 - y0) / max(x1 - x0, 1e-12)))
    if sc["outer_paths"]:
        verts, codes = [], []
        for poly in sc["outer_paths"] + sc["inner_paths"]:
            verts.extend(poly + [poly[0]])
            codes.extend([Path.MOVETO] + [Path.LINETO] * (len(poly) - 1) + [Path.CLOSEPOLY])
        ax.add_patch(PathPatch(Path(verts, codes), facecolor=RING_FILL, edgecolor="none"))
    for band in sc["bands"]:
        if len(band) >= 3:
            ax.add_patch(Polygon(band, closed=True, facecolor=BAND_FILL, alpha=0.7, edgecolor="none"))
    for cls, (a, b) in sc["lines"]:
        ax.plot([a[0], b[0]], [a[1], b[1]], color="#08519c", lw=1, ls="--" if cls == "inner" else "-")
    for polys in (sc["outer_paths"], sc["inner_paths"]):
        for poly in polys:
            ax.add_patch(Polygon(poly, closed=True, fill=False, edgecolor="#a63603", lw=1.5))
    for a, b in sc["arrows"]:
        ax.annotate("", xy=b, xytext=a, arrowprops={"arrowstyle": "->", "color": "#333"})
    xy = points.xy
    wit = sorted(sc["witness"])
    ax.scatter(xy[:, 0], xy[:, 1], s=12, color="#222", zorder=3)
    if wit:
        ax.scatter(xy[wit, 0], xy[wit, 1], s=16, color="#d62728", zorder=4)
    if "width" in doc:
        ax.set_title(f"{doc.get('problem', '')} width {doc['width']:.6g}")
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)

