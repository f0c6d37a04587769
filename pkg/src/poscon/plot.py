"""Simplex-projected views of the growing controllable cones.

CSV works for any dimension. SVG is drawn only for n = 3, on the 2-simplex
laid out as an equilateral triangle, with one convex-hull polygon per k.
"""

from __future__ import annotations

import csv
import io
import math

import numpy as np

from .cones import project_simplex
from .controllability import SystemSI, conmat
from .errors import SvgUnsupportedDim

# triangle corners for e1, e2, e3 inside a 100 x 100 viewBox
_CORNERS = np.array([[5.0, 92.0], [95.0, 92.0], [50.0, 92.0 - 90.0 * math.sqrt(3) / 2]])
_COLOURS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def simplex_to_plane(points) -> np.ndarray:
    """Barycentric points on the 2-simplex to planar coordinates."""
    return np.asarray(points, dtype=float) @ _CORNERS


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points, tol: float = 1e-12) -> list[int]:
    """Gift-wrapping hull, counter-clockwise, as indices into ``points``.

    Collinear boundary points are skipped; degenerate inputs return one or
    two indices.
    """
    pts = np.asarray(points, dtype=float)
    m = len(pts)
    if m == 0:
        return []
    start = min(range(m), key=lambda i: (pts[i, 0], pts[i, 1]))
    uniq = [i for i in range(m) if np.abs(pts[i] - pts[start]).max() > tol]
    if not uniq:
        return [start]
    hull = [start]
    current = start
    while True:
        cand = None
        for i in range(m):
            if i == current or np.abs(pts[i] - pts[current]).max() <= tol:
                continue
            if cand is None:
                cand = i
                continue
            c = _cross(pts[current], pts[cand], pts[i])
            if c < -tol or (abs(c) <= tol and
                            np.sum((pts[i] - pts[current]) ** 2) >
                            np.sum((pts[cand] - pts[current]) ** 2)):
                cand = i
        if cand is None or cand == start or np.abs(pts[cand] - pts[start]).max() <= tol:
            break
        if cand in hull:
            break
        hull.append(cand)
        current = cand
    return hull[::-1] if len(hull) > 2 and _signed_area(pts[hull]) < 0 else hull


def _signed_area(poly) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def inside_hull(point, hull_points, tol: float = 1e-9) -> bool:
    """Is ``point`` in the convex polygon ``hull_points`` (CCW), within
    ``tol``?"""
    p = np.asarray(point, dtype=float)
    poly = np.asarray(hull_points, dtype=float)
    if len(poly) == 1:
        return bool(np.abs(p - poly[0]).max() <= tol)
    if len(poly) == 2:
        a, b = poly
        ab = b - a
        t = np.clip(np.dot(p - a, ab) / np.dot(ab, ab), 0.0, 1.0)
        return bool(np.linalg.norm(a + t * ab - p) <= tol)
    for i in range(len(poly)):
        a, b = poly[i], poly[(i + 1) % len(poly)]
        edge = b - a
        if _cross(a, b, p) < -tol * np.linalg.norm(edge):
            return False
    return True


def layers(sys: SystemSI, ks) -> list[tuple[int, np.ndarray, tuple[str, ...]]]:
    """Simplex-projected generators of conmat_k for each requested k."""
    out = []
    for k in ks:
        C = conmat(sys, k)
        out.append((k, project_simplex(C), C.labels))
    return out


def vf_points(sys: SystemSI) -> tuple[np.ndarray, tuple[str, ...]]:
    C = sys.limit.v_f
    return project_simplex(C), C.labels


def to_csv(sys: SystemSI, ks) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "generator_index"] + [f"coord_{i + 1}" for i in range(sys.n)] + ["label"])
    vf, vf_labels = vf_points(sys)
    for k, pts, labels in layers(sys, ks):
        for j, (pt, lab) in enumerate(zip(pts, labels)):
            w.writerow([k, j] + [repr(float(x)) for x in pt] + [lab])
        for j, (pt, lab) in enumerate(zip(vf, vf_labels)):
            w.writerow([k, len(labels) + j] + [repr(float(x)) for x in pt] + [lab])
    return buf.getvalue()


def to_svg(sys: SystemSI, ks) -> str:
    if sys.n != 3:
        raise SvgUnsupportedDim(f"SVG output needs n = 3, system has n = {sys.n}")
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100" '
        'width="600" height="600">',
        '<polygon points="{}" fill="none" stroke="#444" stroke-width="0.3"/>'.format(
            " ".join(f"{x:.4f},{y:.4f}" for x, y in _CORNERS)),
    ]
    for (x, y), name in zip(_CORNERS, ("x1", "x2", "x3")):
        parts.append(f'<text x="{x:.2f}" y="{y + (5 if y > 50 else -1.5):.2f}" '
                     f'font-size="3" text-anchor="middle">{name}</text>')
    drawn = sorted(layers(sys, ks), key=lambda t: -t[0])
    for idx, (k, pts, _) in enumerate(drawn):
        colour = _COLOURS[(len(drawn) - 1 - idx) % len(_COLOURS)]
        plane = simplex_to_plane(pts)
        hull = plane[convex_hull(plane)]
        coords = " ".join(f"{x:.4f},{y:.4f}" for x, y in hull)
        parts.append(f'<g id="k{k}"><polygon points="{coords}" fill="{colour}" '
                     f'fill-opacity="0.35" stroke="{colour}" stroke-width="0.3"/>')
        for x, y in plane:
            parts.append(f'<text x="{x:.4f}" y="{y + 1.2:.4f}" font-size="3.5" '
                         f'text-anchor="middle" fill="{colour}">*</text>')
        parts.append("</g>")
    vf, _ = vf_points(sys)
    for x, y in simplex_to_plane(vf):
        parts.append(f'<circle class="vf" cx="{x:.4f}" cy="{y:.4f}" r="0.9" fill="#d62728"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
