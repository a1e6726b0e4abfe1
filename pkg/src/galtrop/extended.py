"""Points of extended tropicalizations and the induced action on them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .galois import TwistedToricVariety
from .toric import Cone, Fan, FanError, PointNotFound, cone_of_point, pairing


class UnsupportedPoint(ValueError):
    pass


@dataclass(frozen=True)
class TropPoint:
    """A point of Trop(Y_fan): a sedentarity cone plus coordinates mod its span.

    ``coords`` is always the canonical representative produced by
    :meth:`Fan.reduce`, so dataclass equality is equality of points.
    """

    sedentarity: Cone
    coords: tuple[Fraction, ...]

    @classmethod
    def make(cls, fan: Fan, cone: Sequence[int], coords: Sequence) -> "TropPoint":
        cone = tuple(sorted(cone))
        if not fan.has_cone(cone):
            raise FanError(f"{cone} is not a cone of the fan")
        return cls(cone, fan.reduce(cone, [Fraction(x) for x in coords]))

    @classmethod
    def interior(cls, coords: Sequence) -> "TropPoint":
        return cls((), tuple(Fraction(x) for x in coords))

    @property
    def is_interior(self) -> bool:
        return not self.sedentarity

    def __repr__(self):
        c = ", ".join(str(x) for x in self.coords)
        if self.is_interior:
            return f"TropPoint(({c}))"
        return f"TropPoint(sed={self.sedentarity}, ({c}))"


def act_on_trop_point(twist: TwistedToricVariety, g: int, p: TropPoint) -> TropPoint:
    a = twist.matrix(g)
    fan = twist.fan
    cone = fan.map_cone(a, p.sedentarity)
    return TropPoint(cone, fan.reduce(cone, a.apply(p.coords)))


def compactify_ray(basepoint: Sequence, direction: Sequence[int], fan: Fan) -> TropPoint:
    """Limit of basepoint + s * direction as s -> infinity."""
    if not any(direction):
        raise ValueError("ray direction must be nonzero")
    cone = cone_of_point(direction, fan)
    return TropPoint.make(fan, cone, basepoint)


def trop_from_valuations(vals: Sequence, fan: Fan) -> TropPoint:
    """Fold infinite valuations into a sedentarity cone spanned by coordinate rays."""
    inf_idx = [i for i, v in enumerate(vals) if v == float("inf")]
    direction = [int(i in inf_idx) for i in range(len(vals))]
    if not inf_idx:
        return TropPoint.interior(vals)
    try:
        cone = cone_of_point(direction, fan)
    except PointNotFound:
        raise UnsupportedPoint(f"coordinates {inf_idx} at infinity do not span a cone of the fan") from None
    expected = [fan.ray_index(tuple(int(i == j) for j in range(len(vals)))) for i in inf_idx]
    if None in expected or list(cone) != sorted(expected):
        raise UnsupportedPoint(f"coordinates {inf_idx} at infinity do not span a cone of the fan")
    finite = [Fraction(0) if i in inf_idx else Fraction(v) for i, v in enumerate(vals)]
    return TropPoint.make(fan, cone, finite)


def tropical_monomial_map(exponents: Sequence[Sequence[int]], p: TropPoint) -> tuple[Fraction, ...]:
    """Min-plus image of a monomial map: the pairings <u_i, p>."""
    if not p.is_interior:
        raise UnsupportedPoint("monomial maps are only tropicalized on interior points")
    return tuple(Fraction(pairing(u, p.coords)) for u in exponents)


def segre_exponents(dims: Sequence[int]) -> list[tuple[int, ...]]:
    """Exponent rows of the Segre map of P^{d_1} x ... x P^{d_k} in torus charts.

    Row for the multi-index (i_1..i_k) concatenates e_{i_j} (with e_0 = 0),
    listed in decreasing lexicographic order of the multi-index.
    """
    rows = []
    for idx in itertools.product(*(range(d, -1, -1) for d in dims)):
        row: list[int] = []
        for d, i in zip(dims, idx):
            row.extend(int(i == j + 1) for j in range(d))
        rows.append(tuple(row))
    return rows
