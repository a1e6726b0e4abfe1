"""Deterministic SVG 1.1 pictures of rank-2 tropical curves.

Bounded edges are drawn as segments, rays are clipped at the boundary of
the square [-R, R]^2 and end in a hollow dot standing for their boundary
point, and every Galois orbit of cells gets its own colour.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .extended import act_on_trop_point
from .galois import TwistedToricVariety
from .trop import TropicalComplex

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22",
)
SCALE = 40  # pixels per unit


def _cell_orbits(cx: TropicalComplex, twist: TwistedToricVariety | None) -> list[int]:
    """Orbit label per cell, edges first and then rays, numbered by first appearance."""
    keys = []
    for e in cx.edges:
        keys.append(("e", frozenset((cx.vertices[e.ends[0]], cx.vertices[e.ends[1]])), e.weight))
    for r in cx.rays:
        keys.append(("r", cx.vertices[r.vertex], r.direction, r.weight))
    parent = list(range(len(keys)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if twist is not None:
        where = {k: i for i, k in enumerate(keys)}
        for g in twist.generators():
            a = twist.matrix(g)
            for i, k in enumerate(keys):
                if k[0] == "e":
                    moved = ("e", frozenset(act_on_trop_point(twist, g, p) for p in k[1]), k[2])
                else:
                    moved = ("r", act_on_trop_point(twist, g, k[1]), a.apply(k[2]), k[3])
                j = where.get(moved)
                if j is not None:
                    parent[find(i)] = find(j)
    labels: dict[int, int] = {}
    out = []
    for i in range(len(keys)):
        root = find(i)
        out.append(labels.setdefault(root, len(labels)))
    return out


def _fmt(x) -> str:
    s = f"{float(x):.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _ray_end(p: Sequence[Fraction], d: Sequence[int], radius: Fraction) -> tuple[Fraction, Fraction]:
    ts = [(radius * (1 if di > 0 else -1) - pi) / di for pi, di in zip(p, d) if di]
    t = max(min(ts), Fraction(1, 2))
    return p[0] + t * d[0], p[1] + t * d[1]


def render_svg(cx: TropicalComplex, twist: TwistedToricVariety | None = None, clip=6) -> str:
    """SVG text for an open rank-2 complex (rays not yet capped)."""
    if any(len(p.coords) != 2 or not p.is_interior for p in cx.vertices):
        raise ValueError("only complexes in a 2-dimensional torus are drawn")
    radius = Fraction(clip)
    for p in cx.vertices:
        radius = max(radius, max(abs(c) for c in p.coords) + 1)
    half = radius + Fraction(1, 2)
    size = _fmt(2 * half * SCALE)

    def xy(pt) -> str:
        return f'x="{_fmt(pt[0] * SCALE)}" y="{_fmt(-pt[1] * SCALE)}"'

    def line(a, b, color, width, extra=""):
        return (f'<line x1="{_fmt(a[0] * SCALE)}" y1="{_fmt(-a[1] * SCALE)}" '
                f'x2="{_fmt(b[0] * SCALE)}" y2="{_fmt(-b[1] * SCALE)}" '
                f'stroke="{color}" stroke-width="{width}"{extra}/>')

    def circle(c, r, stroke, fill):
        return (f'<circle cx="{_fmt(c[0] * SCALE)}" cy="{_fmt(-c[1] * SCALE)}" r="{r}" '
                f'stroke="{stroke}" stroke-width="1.5" fill="{fill}"/>')

    lo = _fmt(-half * SCALE)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="{lo} {lo} {size} {size}">',
        f'<rect x="{lo}" y="{lo}" width="{size}" height="{size}" fill="white"/>',
        '<g id="axes">',
        line((-radius, 0), (radius, 0), "#dddddd", 1),
        line((0, -radius), (0, radius), "#dddddd", 1),
        "</g>",
    ]
    labels = _cell_orbits(cx, twist)
    ne = len(cx.edges)
    parts.append('<g id="edges" stroke-linecap="round">')
    notes = []
    for i, e in enumerate(cx.edges):
        a, b = cx.vertices[e.ends[0]].coords, cx.vertices[e.ends[1]].coords
        color = PALETTE[labels[i] % len(PALETTE)]
        parts.append(line(a, b, color, 2))
        if e.weight > 1:
            notes.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2, e.weight))
    parts.append("</g>")
    parts.append('<g id="rays" stroke-linecap="round">')
    ends = []
    for i, r in enumerate(cx.rays):
        p = cx.vertices[r.vertex].coords
        end = _ray_end(p, r.direction, radius)
        color = PALETTE[labels[ne + i] % len(PALETTE)]
        parts.append(line(p, end, color, 2))
        ends.append((end, color))
        if r.weight > 1:
            notes.append(((p[0] + end[0]) / 2, (p[1] + end[1]) / 2, r.weight))
    parts.append("</g>")
    parts.append('<g id="vertices">')
    for i in cx.mobile_vertices():
        parts.append(circle(cx.vertices[i].coords, 3, "black", "black"))
    for end, color in ends:
        parts.append(circle(end, 4, color, "white"))
    parts.append("</g>")
    if notes:
        parts.append('<g id="weights" font-family="sans-serif" font-size="11">')
        for x, y, w in notes:
            parts.append(f"<text {xy((x, y))} dx=\"4\" dy=\"-4\">{w}</text>")
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
