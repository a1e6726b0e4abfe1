"""Tropicalization of points and plane curves, closures, and equivariance checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _kernels
from .exactnum import INF, PuiseuxSeries, galois_twist, lcm
from .extended import TropPoint, act_on_trop_point, compactify_ray, trop_from_valuations
from .galois import (
    InvalidTwist,
    TwistedLaurentPolynomial,
    TwistedToricVariety,
    make_twist,
)
from .toric import Fan, FanError, LatticeMap, pairing, power_fan, primitive

IntVector = tuple[int, ...]


class UndefinedPoint(ValueError):
    pass


class OrbitError(ValueError):
    pass


# -- complexes ------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    ends: tuple[int, int]  # ends[0] < ends[1]
    direction: IntVector  # primitive, pointing from ends[0] towards ends[1]
    weight: int


@dataclass(frozen=True)
class Ray:
    vertex: int
    direction: IntVector
    weight: int
    boundary: int | None = None


@dataclass
class TropicalComplex:
    """A weighted polyhedral 1-complex, possibly closed in a toric surface.

    Closing caps every ray at a boundary vertex and turns it into an edge,
    so a closed complex has no rays left.
    """

    vertices: list[TropPoint] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    rays: list[Ray] = field(default_factory=list)
    fan: Fan | None = None

    @property
    def is_compact(self) -> bool:
        return not self.rays

    def mobile_vertices(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.is_interior]

    def boundary_vertices(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if not v.is_interior]

    def components(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a, b = find(e.ends[0]), find(e.ends[1])
            if a != b:
                parent[a] = b
        return len({find(i) for i in range(len(self.vertices))})

    def betti_1(self) -> int:
        """First Betti number of the underlying graph (rays contribute nothing)."""
        return len(self.edges) - len(self.vertices) + self.components()

    def outgoing(self, v: int) -> list[tuple[IntVector, int]]:
        """Primitive directions (with weights) of cells leaving a mobile vertex."""
        out = []
        for e in self.edges:
            if e.ends[0] == v:
                out.append((e.direction, e.weight))
            elif e.ends[1] == v:
                out.append((tuple(-x for x in e.direction), e.weight))
        for r in self.rays:
            if r.vertex == v:
                out.append((r.direction, r.weight))
        return out

    def is_balanced(self) -> bool:
        for v in self.mobile_vertices():
            acc = [0] * len(self.vertices[v].coords)
            for d, w in self.outgoing(v):
                acc = [a + w * x for a, x in zip(acc, d)]
            if any(acc):
                return False
        return True


def _edge(a: int, b: int, direction: Sequence[int], weight: int) -> Edge:
    """Edge between a and b, ``direction`` pointing from a to b."""
    d = tuple(int(x) for x in direction)
    if a < b:
        return Edge((a, b), d, weight)
    return Edge((b, a), tuple(-x for x in d), weight)


# -- points ---------------------------------------------------------------------

def trop_point(coords: Sequence[PuiseuxSeries], fan: Fan | None = None):
    """Coordinatewise valuations; with a fan, infinities become sedentarity."""
    vals = tuple(c.val() for c in coords)
    if vals and all(v == INF for v in vals):
        raise UndefinedPoint("all coordinates vanish")
    if fan is None:
        return vals
    return trop_from_valuations(vals, fan)


# -- regular subdivisions -------------------------------------------------------

def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Sequence[int]], indices: Sequence[int] | None = None) -> list[int]:
    """Counter-clockwise hull vertices (no collinear points) as indices."""
    idx = sorted(indices if indices is not None else range(len(points)), key=lambda i: tuple(points[i]))
    if len(idx) <= 2:
        return list(idx)

    def chain(seq):
        out: list[int] = []
        for i in seq:
            while len(out) >= 2 and _cross(points[out[-2]], points[out[-1]], points[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(idx)
    upper = chain(reversed(idx))
    return lower[:-1] + upper[:-1]


def _strictly_inside(poly: list[Sequence[int]], p: Sequence[int]) -> bool:
    n = len(poly)
    return n >= 3 and all(_cross(poly[i], poly[(i + 1) % n], p) > 0 for i in range(n))


@dataclass
class Subdivision:
    points: list[IntVector]
    heights: list[Fraction]
    cells: list[list[int]]
    degenerate: bool = False

    def cell_vertices(self, c: int) -> list[int]:
        return convex_hull(self.points, self.cells[c])

    def vertices(self) -> set[int]:
        return {v for c in range(len(self.cells)) for v in self.cell_vertices(c)}

    def interior_vertices(self) -> list[int]:
        if self.degenerate:
            return []
        hull = [self.points[i] for i in convex_hull(self.points)]
        return sorted(v for v in self.vertices() if _strictly_inside(hull, self.points[v]))

    def segments(self) -> dict[frozenset, list[tuple[int, int, int]]]:
        """Cell edges keyed by endpoint pair; values are (cell, tail, head) in CCW order."""
        out: dict[frozenset, list[tuple[int, int, int]]] = {}
        for c in range(len(self.cells)):
            hull = self.cell_vertices(c)
            for k in range(len(hull)):
                p, q = hull[k], hull[(k + 1) % len(hull)]
                out.setdefault(frozenset((p, q)), []).append((c, p, q))
        return out


def _affine_rank(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [(p[0] - p0[0], p[1] - p0[1]) for p in points[1:]]
    if not any(any(d) for d in diffs):
        return 0
    if any(d[0] * e[1] - d[1] * e[0] for d in diffs for e in diffs):
        return 2
    return 1


def regular_subdivision(points: Sequence[Sequence[int]], heights: Sequence) -> Subdivision:
    """Lower convex hull subdivision of lifted plane lattice points.

    Collinear (or smaller) supports give one cell with ``degenerate`` set.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    hts = [Fraction(h) for h in heights]
    if len(pts) != len(hts):
        raise ValueError("one height per point is required")
    if _affine_rank(pts) < 2:
        return Subdivision(pts, hts, [list(range(len(pts)))], degenerate=True)
    den = _kernels.common_denominator(hts)
    triples, keep, onplane = _kernels.lower_facets(pts, _kernels.scaled(hts, den))
    cells = set()
    for r in range(len(triples)):
        if keep[r]:
            cells.add(tuple(int(i) for i in onplane[r].nonzero()[0]))
    return Subdivision(pts, hts, [list(c) for c in sorted(cells)])


def _face_gradient(pts, hts, cell_hull) -> tuple[Fraction, Fraction]:
    """Slope (b1, b2) of the plane h = a + b.u through a cell."""
    i = cell_hull[0]
    for j_pos in range(1, len(cell_hull)):
        for k_pos in range(j_pos + 1, len(cell_hull)):
            j, k = cell_hull[j_pos], cell_hull[k_pos]
            a = (pts[j][0] - pts[i][0], pts[j][1] - pts[i][1])
            b = (pts[k][0] - pts[i][0], pts[k][1] - pts[i][1])
            d = a[0] * b[1] - a[1] * b[0]
            if d:
                ha, hb = hts[j] - hts[i], hts[k] - hts[i]
                return (ha * b[1] - hb * a[1]) / d, (a[0] * hb - b[0] * ha) / d
    raise ValueError("cell is degenerate")


def trop_curve_2d(f: TwistedLaurentPolynomial) -> TropicalComplex:
    """The tropical curve of f: the 1-complex dual to its regular subdivision."""
    if f.rank != 2:
        raise ValueError("plane curves need a rank-2 polynomial")
    support = f.support()
    if len(support) < 2:
        return TropicalComplex()
    vals = [f.terms[u].val() for u in support]
    if _affine_rank(support) < 2:
        return _line_arrangement(support, vals)
    sub = regular_subdivision(support, vals)
    cx = TropicalComplex()
    for c in range(len(sub.cells)):
        b = _face_gradient(sub.points, sub.heights, sub.cell_vertices(c))
        cx.vertices.append(TropPoint.interior((-b[0], -b[1])))
    for key, owners in sorted(sub.segments().items(), key=lambda kv: sorted(kv[0])):
        p, q = sorted(key)
        seg = (sub.points[q][0] - sub.points[p][0], sub.points[q][1] - sub.points[p][1])
        weight = math.gcd(*seg)
        if len(owners) == 2:
            (ca, _, _), (cb, _, _) = owners
            wa, wb = cx.vertices[ca].coords, cx.vertices[cb].coords
            cx.edges.append(_edge(ca, cb, primitive((wb[0] - wa[0], wb[1] - wa[1])), weight))
        else:
            (c, tail, head), = owners
            e = (sub.points[head][0] - sub.points[tail][0], sub.points[head][1] - sub.points[tail][1])
            cx.rays.append(Ray(c, primitive((-e[1], e[0])), weight))
    return cx


def _line_arrangement(support, vals) -> TropicalComplex:
    """Collinear support: parallel classical lines, one per lower-hull segment."""
    u0 = support[0]
    d = primitive((support[-1][0] - u0[0], support[-1][1] - u0[1])) if len(support) > 1 else (1, 0)
    params = []
    for u, h in zip(support, vals):
        s = (u[0] - u0[0]) * d[0] + (u[1] - u0[1]) * d[1]
        params.append((s, h, u))
    params.sort()
    hull: list[tuple] = []
    for pt in params:
        while len(hull) >= 2:
            (s1, h1, _), (s2, h2, _) = hull[-2], hull[-1]
            if (h2 - h1) * (pt[0] - s1) >= (pt[1] - h1) * (s2 - s1):
                hull.pop()
            else:
                break
        hull.append(pt)
    cx = TropicalComplex()
    normal = (-d[1], d[0])
    for (sa, ha, ua), (sb, hb, ub) in zip(hull, hull[1:]):
        diff = (ub[0] - ua[0], ub[1] - ua[1])
        scale = (ha - hb) / (diff[0] ** 2 + diff[1] ** 2)
        v = len(cx.vertices)
        cx.vertices.append(TropPoint.interior((scale * diff[0], scale * diff[1])))
        cx.rays.append(Ray(v, normal, sb - sa))
        cx.rays.append(Ray(v, (-normal[0], -normal[1]), sb - sa))
    return cx


# -- closure in a toric surface --------------------------------------------------

def _split_params(start, vec, is_ray: bool, fan: Fan) -> list[Fraction]:
    """Parameters in (0, 1) (or (0, inf) for rays) where the path crosses a fan ray."""
    out = set()
    ax, ay = start
    dx, dy = vec
    for rx, ry in fan.rays:
        det = rx * dy - dx * ry
        if det:
            lam = Fraction(ax * ry - rx * ay) / det
            s = Fraction(dy * ax - dx * ay) / det
            if s < 0:
                continue
        elif ax * ry - ay * rx == 0:
            lam = -Fraction(ax * dx + ay * dy) / (dx * dx + dy * dy)
        else:
            continue
        if lam > 0 and (is_ray or lam < 1):
            out.add(lam)
    return sorted(out)


def _is_complete_surface_fan(fan: Fan) -> bool:
    return fan.rank == 2 and fan.covers_sample(4)


def close_in_toric_surface(cx: TropicalComplex, fan: Fan, refine: bool = True) -> TropicalComplex:
    """Cap every ray at its limit point in Trop(Y_fan).

    With ``refine`` the cells are also cut along the rays of the fan so
    that each closed cell lies in the closure of a single cone.
    """
    if not _is_complete_surface_fan(fan):
        raise FanError("closure needs a complete fan of rank 2")
    out = TropicalComplex(fan=fan)
    index: dict[TropPoint, int] = {}

    def vertex(p: TropPoint) -> int:
        if p not in index:
            index[p] = len(out.vertices)
            out.vertices.append(p)
        return index[p]

    for p in cx.vertices:
        vertex(p)

    def add_path(a_idx: int, start, vec, is_ray: bool, direction, weight):
        cuts = _split_params(start, vec, is_ray, fan) if refine else []
        prev = a_idx
        for lam in cuts:
            pt = TropPoint.interior((start[0] + lam * vec[0], start[1] + lam * vec[1]))
            cur = vertex(pt)
            if cur != prev:
                out.edges.append(_edge(prev, cur, direction, weight))
            prev = cur
        return prev

    for e in cx.edges:
        a, b = cx.vertices[e.ends[0]], cx.vertices[e.ends[1]]
        vec = (b.coords[0] - a.coords[0], b.coords[1] - a.coords[1])
        last = add_path(index[a], a.coords, vec, False, e.direction, e.weight)
        out.edges.append(_edge(last, index[b], e.direction, e.weight))
    for r in cx.rays:
        a = cx.vertices[r.vertex]
        last = add_path(index[a], a.coords, r.direction, True, r.direction, r.weight)
        base = out.vertices[last].coords
        cap = vertex(compactify_ray(base, r.direction, fan))
        out.edges.append(_edge(last, cap, r.direction, r.weight))
    return out


# -- equivariance ---------------------------------------------------------------

def _cell_keys(cx: TropicalComplex):
    verts = frozenset(cx.vertices)
    edges = []
    for e in cx.edges:
        a, b = cx.vertices[e.ends[0]], cx.vertices[e.ends[1]]
        da = e.direction if a.is_interior else None
        db = tuple(-x for x in e.direction) if b.is_interior else None
        edges.append((frozenset(((a, da), (b, db))), e.weight))
    rays = [(cx.vertices[r.vertex], r.direction, r.weight) for r in cx.rays]
    return verts, sorted_multiset(edges), sorted_multiset(rays)


def sorted_multiset(items) -> dict:
    out: dict = {}
    for it in items:
        out[it] = out.get(it, 0) + 1
    return out


def transform_complex(cx: TropicalComplex, twist: TwistedToricVariety, g: int) -> TropicalComplex:
    """Image of the complex under the action of g (same labels, moved cells)."""
    a = twist.matrix(g)
    verts = [act_on_trop_point(twist, g, p) for p in cx.vertices]
    edges = [Edge(e.ends, a.apply(e.direction), e.weight) for e in cx.edges]
    rays = [Ray(r.vertex, a.apply(r.direction), r.weight, r.boundary) for r in cx.rays]
    return TropicalComplex(verts, edges, rays, cx.fan)


def equivariance_witness(cx: TropicalComplex, twist: TwistedToricVariety) -> dict | None:
    """None if every generator maps the complex onto itself, else a description."""
    base = _cell_keys(cx)
    for g in twist.generators():
        moved = _cell_keys(transform_complex(cx, twist, g))
        for name, x, y in zip(("vertices", "edges", "rays"), base, moved):
            if x != y:
                if name == "vertices":
                    missing = sorted((p for p in y if p not in x), key=repr)
                else:
                    missing = [k for k in y if x.get(k) != y[k]]
                return {"generator": g, "cells": name, "unmatched": [repr(m) for m in missing[:5]]}
    return None


def check_complex_equivariance(cx: TropicalComplex, twist: TwistedToricVariety) -> bool:
    return equivariance_witness(cx, twist) is None


# -- Groebner cells -------------------------------------------------------------

def groebner_cell(f: TwistedLaurentPolynomial, v: Sequence) -> list[IntVector]:
    """Exponents u minimising val(a_u) + <u, v>."""
    v = [Fraction(x) for x in v]
    scores = {u: a.val() + pairing(u, v) for u, a in f.terms.items()}
    if not scores:
        return []
    best = min(scores.values())
    return sorted(u for u, s in scores.items() if s == best)


def argmin_multiplicity(f: TwistedLaurentPolynomial, grid: Sequence[Sequence]) -> list[int]:
    """Number of terms attaining the tropical minimum at each grid point."""
    support = f.support()
    vals = [f.terms[u].val() for u in support]
    den = _kernels.common_denominator(vals, [list(g) for g in grid])
    _, counts = _kernels.argmin_counts(
        support, _kernels.scaled(vals, den), _kernels.scaled([list(g) for g in grid], den)
    )
    return [int(c) for c in counts]


def support_contains(cx: TropicalComplex, grid: Sequence[Sequence]) -> list[bool]:
    """Whether each point of an interior grid lies on the (open) complex."""
    starts, dirs, flags = [], [], []
    for e in cx.edges:
        a, b = cx.vertices[e.ends[0]], cx.vertices[e.ends[1]]
        if not (a.is_interior and b.is_interior):
            raise ValueError("support tests are for complexes in the torus")
        starts.append(list(a.coords))
        dirs.append([b.coords[0] - a.coords[0], b.coords[1] - a.coords[1]])
        flags.append(False)
    for r in cx.rays:
        starts.append(list(cx.vertices[r.vertex].coords))
        dirs.append(list(r.direction))
        flags.append(True)
    pts = [list(g) for g in grid]
    den = _kernels.common_denominator(starts, dirs, pts)
    hit = _kernels.on_segments(
        _kernels.scaled(starts, den), _kernels.scaled(dirs, den), flags, _kernels.scaled(pts, den)
    )
    return [bool(h) for h in hit]


# -- embeddings -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EmbeddingData:
    coordinates: tuple[TwistedLaurentPolynomial, ...]
    target: TwistedToricVariety

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        if len(self.coordinates) != self.target.rank:
            raise ValueError(
                f"{len(self.coordinates)} coordinates for a target of rank {self.target.rank}"
            )

    def evaluate(self, x: Sequence[PuiseuxSeries]) -> tuple[PuiseuxSeries, ...]:
        return tuple(c.evaluate(x) for c in self.coordinates)

    def image(self, x: Sequence[PuiseuxSeries]) -> TropPoint:
        return trop_point(self.evaluate(x), self.target.fan)


def _twist_poly(f: TwistedLaurentPolynomial, k: int, level: int) -> TwistedLaurentPolynomial:
    return TwistedLaurentPolynomial(f.rank, {u: galois_twist(k, a, level) for u, a in f.terms.items()})


def _shift_matrix(blocks: int, size: int) -> LatticeMap:
    """Block permutation sending factor b to factor b + 1 (mod blocks)."""
    n = blocks * size
    rows = [[0] * n for _ in range(n)]
    for b in range(blocks):
        for i in range(size):
            rows[((b + 1) % blocks) * size + i][b * size + i] = 1
    return LatticeMap(tuple(tuple(r) for r in rows))


def equivariantize_embedding(emb: EmbeddingData, order: int, level: int | None = None) -> EmbeddingData:
    """Product of the Galois conjugates of an embedding, with the factor-shift twist.

    Factor k carries the coordinates conjugated by k; the generator of
    Z/order shifts factor k to factor k + 1 and twists coefficients by 1.
    """
    if len(emb.target.group) != 1:
        raise InvalidTwist("equivariantization starts from an untwisted embedding")
    levels = [c.level for c in emb.coordinates]
    n_level = level or lcm(order, *levels)
    if n_level % order or any(n_level % lv for lv in levels):
        raise InvalidTwist(f"order {order} and coordinate levels {levels} are incompatible with level {n_level}")
    for c in emb.coordinates:
        if _twist_poly(c, order, n_level) != c.rescale(n_level):
            raise InvalidTwist("coordinates are not fixed by the kernel of the quotient")
    if order == 1:
        return emb
    coords = []
    for k in range(order):
        coords.extend(_twist_poly(c, k, n_level) for c in emb.coordinates)
    fan = power_fan(emb.target.fan, order)
    twist = make_twist(fan, [_shift_matrix(order, emb.target.rank)], [order], [1], n_level)
    return EmbeddingData(tuple(coords), twist)


def is_consistent_equivariantization(emb: EmbeddingData) -> bool:
    """Each generator permutes-and-conjugates the coordinate list into itself."""
    twist = emb.target
    for g in twist.generators():
        a = twist.matrix(g)
        k = twist.residue(g)
        for j, c in enumerate(emb.coordinates):
            col = [a.matrix[i][j] for i in range(a.rank)]
            if sorted(col) != [0] * (a.rank - 1) + [1]:
                return False
            target = emb.coordinates[col.index(1)]
            if _twist_poly(c, k, twist.puiseux_level) != target.rescale(twist.puiseux_level):
                return False
    return True


@dataclass
class OrbitImage:
    images: list[TropPoint]
    injective: bool
    action_compatible: bool


def _same_point(x, y) -> bool:
    return len(x) == len(y) and all(a == b for a, b in zip(x, y))


def orbit_image(orbit: Sequence[Sequence[PuiseuxSeries]], emb: EmbeddingData, generator: int | None = None) -> OrbitImage:
    twist = emb.target
    g = generator if generator is not None else (twist.generators()[0] if twist.generators() else 0)
    k = twist.residue(g)
    moved = [tuple(galois_twist(k, c, twist.puiseux_level) for c in x) for x in orbit]
    for y in moved:
        if not any(_same_point(y, x) for x in orbit):
            raise OrbitError(f"orbit is not closed under generator {g}")
    images = [emb.image(x) for x in orbit]
    injective = len(set(images)) == len(images)
    compatible = all(
        act_on_trop_point(twist, g, img) == emb.image(y) for img, y in zip(images, moved)
    )
    return OrbitImage(images, injective, compatible)
