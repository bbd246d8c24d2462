"""Presentation-only SVG rendering of packings.

Plane and torus packings are drawn in their own coordinates (the torus
fundamental domain gets ghosted lattice translates); sphere packings are
drawn in orthographic projection with hidden cap arcs dimmed.
"""

from __future__ import annotations

import math

import numpy as np

from .layout import Geometry, Packing

STYLE = {
    "circle": 'fill="none" stroke="#1f4e79" stroke-width="{w}"',
    "ghost": 'fill="none" stroke="#9db6cc" stroke-width="{w}"',
    "edge": 'stroke="#c05040" stroke-width="{w}"',
    "hidden": 'fill="none" stroke="#cccccc" stroke-width="{w}"',
}


def _header(xmin, ymin, xmax, ymax, size):
    w = xmax - xmin
    h = ymax - ymin
    pad = 0.05 * max(w, h)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size * (h + 2 * pad) / (w + 2 * pad):.0f}" viewBox='
        f'"{xmin - pad} {ymin - pad} {w + 2 * pad} {h + 2 * pad}">\n'
        f'<g transform="translate(0,{ymin + ymax}) scale(1,-1)">\n')


FOOTER = "</g>\n</svg>\n"


def _planar_svg(packing: Packing, size: int, copies: int) -> str:
    circles = list(packing.circles.values())
    shifts = [(0.0, 0.0)]
    if packing.lattice is not None and copies > 0:
        tl, tm = packing.lattice
        shifts = [(i * tl[0] + j * tm[0], i * tl[1] + j * tm[1])
                  for i in range(-copies, copies + 1)
                  for j in range(-copies, copies + 1)]
        shifts.sort(key=lambda s: (s != (0.0, 0.0),))
    xs, ys = [], []
    for (cx, cy), r in circles:
        for sx, sy in shifts:
            xs += [cx + sx - r, cx + sx + r]
            ys += [cy + sy - r, cy + sy + r]
    xmin, xmax, ymin, ymax = min(xs), max(xs), min(ys), max(ys)
    lw = 0.004 * max(xmax - xmin, ymax - ymin)
    out = [_header(xmin, ymin, xmax, ymax, size)]
    for sx, sy in shifts:
        base = (sx, sy) == (0.0, 0.0)
        style = STYLE["circle" if base else "ghost"].format(w=lw)
        if base:
            estyle = STYLE["edge"].format(w=lw * 0.7)
            for pf in packing.faces:
                pts = [(p[0] + sx, p[1] + sy) for p in pf.positions]
                for i in range(3):
                    x1, y1 = pts[i]
                    x2, y2 = pts[(i + 1) % 3]
                    out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" '
                               f'y2="{y2}" {estyle}/>\n')
        for (cx, cy), r in circles:
            out.append(f'<circle cx="{cx + sx}" cy="{cy + sy}" r="{r}" '
                       f'{style}/>\n')
    out.append(FOOTER)
    return "".join(out)


def _sphere_svg(packing: Packing, size: int) -> str:
    lw = 0.004 * 2.2
    out = [_header(-1.1, -1.1, 1.1, 1.1, size)]
    out.append(f'<circle cx="0" cy="0" r="1" '
               f'{STYLE["ghost"].format(w=lw)}/>\n')
    samples = 96
    for v, (center, rho) in sorted(packing.circles.items()):
        c = np.array(center)
        seed = np.array([0.0, 0.0, 1.0]) if abs(c[2]) < 0.9 \
            else np.array([1.0, 0.0, 0.0])
        e1 = np.cross(c, seed)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(c, e1)
        pts = [math.cos(rho) * c
               + math.sin(rho) * (math.cos(t) * e1 + math.sin(t) * e2)
               for t in np.linspace(0.0, 2.0 * math.pi, samples)]
        for vis in (False, True):
            path = []
            for p in pts:
                front = p[2] >= 0.0
                if front == vis:
                    path.append(p)
                elif path:
                    out.append(_polyline(path, vis, lw))
                    path = []
            if path:
                out.append(_polyline(path, vis, lw))
    out.append(FOOTER)
    return "".join(out)


def _polyline(points, visible: bool, lw: float) -> str:
    style = STYLE["circle" if visible else "hidden"].format(w=lw)
    coords = " ".join(f"{p[0]},{p[1]}" for p in points)
    return f'<polyline points="{coords}" {style}/>\n'


def packing_svg(packing: Packing, size: int = 640, copies: int = 1) -> str:
    """Render a packing; ``copies`` controls torus lattice translates."""
    if packing.geometry is Geometry.SPHERE:
        return _sphere_svg(packing, size)
    if packing.geometry is Geometry.PLANE:
        return _planar_svg(packing, size, copies=0)
    return _planar_svg(packing, size, copies=copies)
