"""Marching-squares tracing of the curve and SVG/CSV output."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .cubic import CubicCurve, evaluate_xy
from .geom import Circle, Line, PlanePoint

Window = Tuple[float, float, float, float]  # x0, x1, y0, y1

# marching-squares case -> pairs of cell edges joined (0 bottom, 1 right, 2 top, 3 left)
_CASES = {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)], 6: [(0, 2)], 7: [(3, 2)],
    8: [(2, 3)], 9: [(0, 2)], 11: [(1, 2)], 12: [(1, 3)], 13: [(0, 1)], 14: [(3, 0)],
}


def _edge_key(i: int, j: int, e: int):
    # bottom/top edges are horizontal grid edges, left/right vertical ones
    if e == 0:
        return ("h", i, j)
    if e == 2:
        return ("h", i, j + 1)
    if e == 3:
        return ("v", i, j)
    return ("v", i + 1, j)


def trace_curve(curve: CubicCurve, window: Window, resolution: int) -> List[np.ndarray]:
    """Polylines (n x 2 arrays) approximating f = 0 inside the window.

    The grid has ``resolution`` cells per axis; crossings are placed by
    linear interpolation and stitched across shared cell edges.
    """
    x0, x1, y0, y1 = window
    xs = np.linspace(x0, x1, resolution + 1)
    ys = np.linspace(y0, y1, resolution + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    F = evaluate_xy(curve, X, Y)
    pos = F >= 0

    def crossing(key) -> Tuple[float, float]:
        kind, i, j = key
        if kind == "h":
            fa, fb = F[i, j], F[i + 1, j]
            s = fa / (fa - fb)
            return (xs[i] + s * (xs[i + 1] - xs[i]), ys[j])
        fa, fb = F[i, j], F[i, j + 1]
        s = fa / (fa - fb)
        return (xs[i], ys[j] + s * (ys[j + 1] - ys[j]))

    case = (pos[:-1, :-1].astype(int) | (pos[1:, :-1] << 1) | (pos[1:, 1:] << 2) | (pos[:-1, 1:] << 3))
    adj: Dict[tuple, List[tuple]] = defaultdict(list)
    for i, j in zip(*np.nonzero((case != 0) & (case != 15))):
        c = int(case[i, j])
        if c in (5, 10):
            center = (F[i, j] + F[i + 1, j] + F[i + 1, j + 1] + F[i, j + 1]) / 4
            if (center >= 0) == (c == 5):
                pairs = [(3, 2), (0, 1)] if c == 5 else [(3, 0), (1, 2)]
            else:
                pairs = [(3, 0), (1, 2)] if c == 5 else [(0, 1), (2, 3)]
        else:
            pairs = _CASES[c]
        for ea, eb in pairs:
            ka, kb = _edge_key(i, j, ea), _edge_key(i, j, eb)
            adj[ka].append(kb)
            adj[kb].append(ka)

    seen = set()
    chains = []

    def walk(start):
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [k for k in adj[cur] if k != prev and k not in seen]
            if not nxt:
                # closing a loop back to the start
                if prev is not None and start in adj[cur] and len(chain) > 2:
                    chain.append(start)
                return chain
            prev, cur = cur, nxt[0]
            seen.add(cur)
            chain.append(cur)

    keys = sorted(adj)
    for k in keys:
        if k not in seen and len(adj[k]) == 1:
            chains.append(walk(k))
    for k in keys:
        if k not in seen:
            chains.append(walk(k))
    return [np.array([crossing(k) for k in ch]) for ch in chains if len(ch) > 1]


def _clip_line(line: Line, window: Window) -> Optional[Tuple[Tuple[float, float], Tuple[float, float]]]:
    x0, x1, y0, y1 = window
    base = line.foot((0.5 * (x0 + x1), 0.5 * (y0 + y1)))
    d = line.direction.unit()
    lo, hi = -np.inf, np.inf
    for p, dp, a, b in ((base.real, d.real, x0, x1), (base.imag, d.imag, y0, y1)):
        if dp == 0:
            if not (a <= p <= b):
                return None
            continue
        t1, t2 = sorted(((a - p) / dp, (b - p) / dp))
        lo, hi = max(lo, t1), min(hi, t2)
    if lo >= hi:
        return None
    s, e = base + lo * d, base + hi * d
    return (s.real, s.imag), (e.real, e.imag)


class _Canvas:
    def __init__(self, window: Window, width: int = 800):
        self.window = window
        x0, x1, y0, y1 = window
        self.w = width
        self.h = max(1, int(round(width * (y1 - y0) / (x1 - x0))))

    def px(self, x: float, y: float) -> Tuple[float, float]:
        x0, x1, y0, y1 = self.window
        return ((x - x0) / (x1 - x0) * self.w, (y1 - y) / (y1 - y0) * self.h)

    def path(self, pts: Iterable[Tuple[float, float]]) -> str:
        parts = []
        for k, (x, y) in enumerate(pts):
            u, v = self.px(x, y)
            parts.append(f"{'M' if k == 0 else 'L'}{u:.3f},{v:.3f}")
        return " ".join(parts)


def render_svg(curve: CubicCurve, window: Window, resolution: int,
               asymptote: Optional[Line] = None,
               points: Optional[Dict[str, PlanePoint]] = None,
               lines: Optional[Dict[str, Line]] = None,
               circles: Optional[Dict[str, Circle]] = None,
               polylines: Optional[Sequence[np.ndarray]] = None) -> str:
    if polylines is None:
        polylines = trace_curve(curve, window, resolution)
    cv = _Canvas(window)
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{cv.w}" height="{cv.h}" '
              f'viewBox="0 0 {cv.w} {cv.h}">\n')
    out.write(f'<rect x="0" y="0" width="{cv.w}" height="{cv.h}" fill="white"/>\n')
    out.write('<g id="curve" fill="none" stroke="black" stroke-width="1.5">\n')
    for k, pl in enumerate(polylines):
        out.write(f'<path id="branch{k}" d="{cv.path(pl)}"/>\n')
    out.write("</g>\n")
    if asymptote is not None:
        seg = _clip_line(asymptote, window)
        if seg is not None:
            out.write(f'<path id="asymptote" d="{cv.path(seg)}" fill="none" stroke="gray" '
                      f'stroke-dasharray="6,4"/>\n')
    for name, line in sorted((lines or {}).items()):
        seg = _clip_line(line, window)
        if seg is not None:
            out.write(f'<path id="line-{name}" d="{cv.path(seg)}" fill="none" stroke="blue"/>\n')
    x0, x1, y0, y1 = window
    for name, c in sorted((circles or {}).items()):
        u, v = cv.px(c.center.x, c.center.y)
        r = c.radius if c.radius_sq > 0 else 0.0
        rx, ry = r / (x1 - x0) * cv.w, r / (y1 - y0) * cv.h
        out.write(f'<ellipse id="circle-{name}" cx="{u:.3f}" cy="{v:.3f}" rx="{rx:.3f}" ry="{ry:.3f}" '
                  f'fill="none" stroke="green"/>\n')
    for name, p in sorted((points or {}).items()):
        u, v = cv.px(p.x, p.y)
        out.write(f'<circle id="point-{name}" cx="{u:.3f}" cy="{v:.3f}" r="3" fill="red"/>\n')
        out.write(f'<text x="{u + 5:.3f}" y="{v - 5:.3f}" font-size="12">{name}</text>\n')
    out.write("</svg>\n")
    return out.getvalue()


def polylines_csv(polylines: Sequence[np.ndarray]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "branch"])
    for k, pl in enumerate(polylines):
        for x, y in pl:
            w.writerow([repr(float(x)), repr(float(y)), k])
    return buf.getvalue()
