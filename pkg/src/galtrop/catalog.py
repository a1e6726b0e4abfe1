"""Ready-made instances: the Z/3-twisted projective plane with its invariant
sextic, the Z/2-twisted P^3 embedding of the projective line, and the
tropical line."""
from __future__ import annotations

from .exactnum import PuiseuxSeries
from .galois import TwistedLaurentPolynomial, TwistedToricVariety, make_twist, trivial_twist
from .toric import LatticeMap, projective_fan
from .trop import EmbeddingData

ROTATION = LatticeMap(((0, -1), (1, -1)))

# (t-exponent, one exponent of each Z/3-orbit of monomials)
_SEXTIC_ORBITS = [
    (12, (-2, -2)),
    (7, (-1, -2)),
    (7, (3, -2)),
    (4, (0, -2)),
    (4, (0, 2)),
    (3, (1, -2)),
    (3, (-1, 2)),
    (1, (0, -1)),
    (1, (0, 1)),
]


def rotation_twist() -> TwistedToricVariety:
    """P^2 fan with Z/3 acting by the order-3 rotation, coefficients at level 3."""
    return make_twist(projective_fan(2), [ROTATION], [3], [1], 3)


def orbit_of_monomial(u: tuple[int, int]) -> list[tuple[int, int]]:
    dual = ROTATION.transpose()
    out = [u]
    while len(out) < 3:
        out.append(dual.apply(out[-1]))
    return out


def brauer_severi_sextic() -> TwistedLaurentPolynomial:
    """The degree-6 genus-10 curve: nine Z/3-orbits of trinomials plus 1."""
    terms = {(0, 0): PuiseuxSeries.constant(1, 3)}
    for texp, u in _SEXTIC_ORBITS:
        for v in orbit_of_monomial(u):
            terms[v] = PuiseuxSeries.monomial(texp, 1, 3)
    return TwistedLaurentPolynomial(2, terms)


def sextic_as_printed() -> TwistedLaurentPolynomial:
    """The same sextic, typed term by term as the trinomials are written out."""
    rows = [
        (12, [(-2, -2), (-2, 4), (4, -2)]),
        (7, [(-1, -2), (-2, 3), (3, -1)]),
        (7, [(3, -2), (-2, -1), (-1, 3)]),
        (4, [(0, -2), (-2, 2), (2, 0)]),
        (4, [(0, 2), (2, -2), (-2, 0)]),
        (3, [(1, -2), (-2, 1), (1, 1)]),
        (3, [(-1, 2), (2, -1), (-1, -1)]),
        (1, [(0, -1), (-1, 1), (1, 0)]),
        (1, [(0, 1), (1, -1), (-1, 0)]),
    ]
    terms = {(0, 0): PuiseuxSeries.constant(1, 3)}
    for texp, us in rows:
        for u in us:
            terms[u] = PuiseuxSeries.monomial(texp, 1, 3)
    return TwistedLaurentPolynomial(2, terms)


def tropical_line(shift: int = 0) -> TwistedLaurentPolynomial:
    """x + y + t^shift."""
    return TwistedLaurentPolynomial(2, {
        (1, 0): PuiseuxSeries.constant(1),
        (0, 1): PuiseuxSeries.constant(1),
        (0, 0): PuiseuxSeries.monomial(shift),
    })


def swap_twist_p3() -> TwistedToricVariety:
    """P^3 fan with Z/2 exchanging e1 and e2, acting on t^(1/2)."""
    swap = LatticeMap(((0, 1, 0), (1, 0, 0), (0, 0, 1)))
    return make_twist(projective_fan(3), [swap], [2], [1], 2)


def _linear(c0: PuiseuxSeries) -> TwistedLaurentPolynomial:
    """x + c0 in one variable."""
    return TwistedLaurentPolynomial(1, {(1,): PuiseuxSeries.constant(1, 2), (0,): c0})


def p1_embedding() -> EmbeddingData:
    """x -> (x - t^(1/2), x + t^(1/2), x - 1) into the Z/2-twisted P^3."""
    half = PuiseuxSeries.monomial("1/2", 1, 2)
    coords = (_linear(-half), _linear(half), _linear(PuiseuxSeries.constant(-1, 2)))
    return EmbeddingData(coords, swap_twist_p3())


def naive_p1_embedding() -> EmbeddingData:
    """x -> x into P^1, with Z/2 acting on t^(1/2) and trivially on the fan."""
    x = TwistedLaurentPolynomial(1, {(1,): PuiseuxSeries.constant(1, 2)})
    twist = make_twist(projective_fan(1), [LatticeMap(((1,),))], [2], [1], 2)
    return EmbeddingData((x,), twist)


def untwisted_line_embedding(c0: PuiseuxSeries) -> EmbeddingData:
    """x -> x + c0 into P^1 with the trivial twist."""
    return EmbeddingData((_linear(c0),), trivial_twist(projective_fan(1), c0.level))


def p1_orbit() -> list[tuple[PuiseuxSeries]]:
    half = PuiseuxSeries.monomial("1/2", 1, 2)
    return [(half,), (-half,)]
