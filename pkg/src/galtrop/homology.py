"""Tropical cellular (co)homology of compact tropical curves with group actions.

Chains of the coefficient system F_p on a closed 1-complex:

* F_0 is Q on every cell;
* F_1 of an edge is the line through its direction, of a mobile vertex the
  span of its adjacent directions, of a boundary vertex the span of the
  adjacent directions projected to the quotient of its stratum.

Edges are oriented from the lower to the higher vertex index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .extended import act_on_trop_point
from .galois import TwistedToricVariety
from .trop import TropicalComplex, check_complex_equivariance

Matrix = linalg.Matrix


class NonCompactComplex(ValueError):
    pass


class NotEquivariant(ValueError):
    pass


@dataclass
class MultiTangentSpace:
    cell: tuple[int, int]  # (dimension, index)
    basis: list[list[Fraction]]


def _require_closed(cx: TropicalComplex):
    if not cx.is_compact or cx.fan is None:
        raise NonCompactComplex("homology needs a complex closed in a toric surface")


def _project(cx: TropicalComplex, v: int, w: Sequence) -> list[Fraction]:
    p = cx.vertices[v]
    if p.is_interior:
        return [Fraction(x) for x in w]
    return list(cx.fan.reduce(p.sedentarity, w))


def _span(vectors: list[list[Fraction]], dim: int) -> list[list[Fraction]]:
    basis = linalg.column_space_basis([v for v in vectors if any(v)])
    if len(basis) == dim:
        return linalg.identity(dim)
    return basis


def multitangent_spaces(cx: TropicalComplex, p: int) -> tuple[list[MultiTangentSpace], list[MultiTangentSpace]]:
    """Bases of F_p on vertices and on edges."""
    _require_closed(cx)
    n = cx.fan.rank
    if p == 0:
        one = [[Fraction(1)]]
        return (
            [MultiTangentSpace((0, i), one) for i in range(len(cx.vertices))],
            [MultiTangentSpace((1, i), one) for i in range(len(cx.edges))],
        )
    if p != 1:
        raise ValueError("only p = 0 and p = 1 occur on curves")
    adjacent: list[list[list[Fraction]]] = [[] for _ in cx.vertices]
    for e in cx.edges:
        d = [Fraction(x) for x in e.direction]
        for v in e.ends:
            adjacent[v].append(_project(cx, v, d))
    verts = []
    for i, pt in enumerate(cx.vertices):
        if pt.is_interior:
            basis = _span(adjacent[i], n)
        else:
            basis = linalg.column_space_basis([v for v in adjacent[i] if any(v)])
        verts.append(MultiTangentSpace((0, i), basis))
    edges = [MultiTangentSpace((1, i), [[Fraction(x) for x in e.direction]]) for i, e in enumerate(cx.edges)]
    return verts, edges


def _offsets(spaces: list[MultiTangentSpace]) -> list[int]:
    out, acc = [], 0
    for s in spaces:
        out.append(acc)
        acc += len(s.basis)
    out.append(acc)
    return out


def _coords(basis, w) -> list[Fraction]:
    c = linalg.coordinates(basis, w)
    if c is None:
        raise ArithmeticError(f"{w} is not in the span of {basis}")
    return c


@dataclass
class ChainComplex:
    """C_1(F_p) -> C_0(F_p) for one p."""

    p: int
    verts: list[MultiTangentSpace]
    edges: list[MultiTangentSpace]
    boundary: Matrix  # rows: C_0 coordinates, columns: C_1 coordinates
    dims: tuple[int, int]


def chain_complex(cx: TropicalComplex, p: int) -> ChainComplex:
    verts, edges = multitangent_spaces(cx, p)
    vo, eo = _offsets(verts), _offsets(edges)
    d = linalg.zeros(vo[-1], eo[-1])
    for j, e in enumerate(cx.edges):
        for k, w in enumerate(edges[j].basis):
            col = eo[j] + k
            for sign, v in ((-1, e.ends[0]), (1, e.ends[1])):
                if p == 0:
                    d[vo[v]][col] += sign
                    continue
                image = _project(cx, v, w)
                if not any(image):
                    continue
                for r, c in enumerate(_coords(verts[v].basis, image)):
                    d[vo[v] + r][col] += sign * c
    return ChainComplex(p, verts, edges, d, (vo[-1], eo[-1]))


def homology_dims(cx: TropicalComplex) -> dict[str, int]:
    """dim H_{p,q} keyed "H{p}{q}"."""
    out = {}
    for p in (0, 1):
        cc = chain_complex(cx, p)
        r = linalg.rank(cc.boundary) if cc.dims[0] and cc.dims[1] else 0
        out[f"H{p}0"] = cc.dims[0] - r
        out[f"H{p}1"] = cc.dims[1] - r
    return out


def cohomology_dims(cx: TropicalComplex) -> dict[str, int]:
    """dim H^{p,q} from the transposed (coboundary) maps."""
    out = {}
    for p in (0, 1):
        cc = chain_complex(cx, p)
        delta = linalg.transpose(cc.boundary, cc.dims[1])
        r = linalg.rank(delta) if cc.dims[0] and cc.dims[1] else 0
        out[f"H{p}0"] = cc.dims[0] - r  # kernel of C^0 -> C^1
        out[f"H{p}1"] = cc.dims[1] - r  # cokernel of C^0 -> C^1
    return out


# -- group actions --------------------------------------------------------------

def _vertex_lookup(cx: TropicalComplex) -> dict:
    return {p: i for i, p in enumerate(cx.vertices)}


def _edge_lookup(cx: TropicalComplex) -> dict:
    return {(e.ends, e.direction): i for i, e in enumerate(cx.edges)}


def chain_maps(cx: TropicalComplex, twist: TwistedToricVariety, g: int, p: int,
               cc: ChainComplex | None = None) -> tuple[Matrix, Matrix]:
    """Matrices of g on C_0(F_p) and C_1(F_p)."""
    cc = cc or chain_complex(cx, p)
    a = twist.matrix(g)
    vlook, elook = _vertex_lookup(cx), _edge_lookup(cx)
    vo, eo = _offsets(cc.verts), _offsets(cc.edges)
    vmap = [vlook[act_on_trop_point(twist, g, q)] for q in cx.vertices]

    phi0 = linalg.zeros(vo[-1], vo[-1])
    for i in range(len(cx.vertices)):
        j = vmap[i]
        for k, w in enumerate(cc.verts[i].basis):
            image = [Fraction(1)] if p == 0 else _project(cx, j, a.apply(w))
            for r, c in enumerate(_coords(cc.verts[j].basis, image)):
                phi0[vo[j] + r][vo[i] + k] = c

    phi1 = linalg.zeros(eo[-1], eo[-1])
    for i, e in enumerate(cx.edges):
        s, t = vmap[e.ends[0]], vmap[e.ends[1]]
        d = a.apply(e.direction)
        if s < t:
            key, sign = ((s, t), d), 1
        else:
            key, sign = ((t, s), tuple(-x for x in d)), -1
        j = elook[key]
        for k, w in enumerate(cc.edges[i].basis):
            image = [Fraction(1)] if p == 0 else [Fraction(x) for x in a.apply(w)]
            for r, c in enumerate(_coords(cc.edges[j].basis, image)):
                phi1[eo[j] + r][eo[i] + k] = sign * c
    return phi0, phi1


@dataclass
class HomologyBasis:
    reps: list[list[Fraction]]  # representatives of a basis of H
    image: list[list[Fraction]]  # basis of the boundaries

    def coordinates(self, z: Sequence[Fraction]) -> list[Fraction]:
        sol = linalg.coordinates(self.reps + self.image, list(z))
        if sol is None:
            raise ArithmeticError("vector is not a cycle")
        return sol[: len(self.reps)]


def homology_basis(cc: ChainComplex, q: int) -> HomologyBasis:
    n0, n1 = cc.dims
    cols = linalg.transpose(cc.boundary, n1) if n0 and n1 else []
    if q == 0:
        cycles = linalg.identity(n0)
        boundaries = linalg.column_space_basis(cols)
    else:
        cycles = linalg.nullspace(cc.boundary, n1) if n0 else linalg.identity(n1)
        boundaries = []
    basis = linalg.column_space_basis(boundaries + cycles)
    return HomologyBasis(basis[len(boundaries):], boundaries)


def induced_action(cx: TropicalComplex, twist: TwistedToricVariety, p: int, q: int,
                   elements: Sequence[int] | None = None) -> tuple[dict[int, Matrix], list[Fraction]]:
    """Matrices of group elements on H_{p,q}, and the character (trace per element).

    ``elements`` defaults to the generators; characters cover the whole group.
    """
    if not check_complex_equivariance(cx, twist):
        raise NotEquivariant("the complex is not invariant under the twist")
    cc = chain_complex(cx, p)
    hb = homology_basis(cc, q)
    mats = {}
    for g in range(len(twist.group)):
        phi = chain_maps(cx, twist, g, p, cc)[q]
        mats[g] = linalg.transpose([hb.coordinates(linalg.matvec(phi, z)) for z in hb.reps], len(hb.reps))
    character = [sum((m[i][i] for i in range(len(m))), Fraction(0)) for m in
                 (mats[g] for g in range(len(twist.group)))]
    wanted = twist.generators() if elements is None else elements
    return {g: mats[g] for g in wanted}, character


@dataclass
class HomologyReport:
    dims: dict[str, int]
    action: dict[int, dict[str, Matrix]] = field(default_factory=dict)
    characters: dict[str, list[Fraction]] = field(default_factory=dict)


def homology_report(cx: TropicalComplex, twist: TwistedToricVariety | None = None) -> HomologyReport:
    report = HomologyReport(homology_dims(cx))
    if twist is None:
        return report
    for p in (0, 1):
        for q in (0, 1):
            mats, chi = induced_action(cx, twist, p, q)
            key = f"H{p}{q}"
            for g, m in mats.items():
                report.action.setdefault(g, {})[key] = m
            report.characters[key] = chi
    return report


def fixed_dimension(m: Matrix) -> int:
    n = len(m)
    shifted = [[m[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    return n - linalg.rank(shifted) if n else 0


def multiplicative_order(m: Matrix, limit: int = 64) -> int | None:
    n = len(m)
    ident = linalg.identity(n)
    power = m
    for k in range(1, limit + 1):
        if power == ident:
            return k
        power = linalg.matmul(power, m)
    return None
