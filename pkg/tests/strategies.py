"""Random generators shared by the property tests (seeded, exact)."""
import random
from fractions import Fraction

from hypothesis import strategies as st

from galtrop.exactnum import Cyclotomic, PuiseuxSeries
from galtrop.toric import LatticeMap

small_fractions = st.fractions(min_value=-6, max_value=6, max_denominator=6)


@st.composite
def cyclotomics(draw, level=None):
    n = level or draw(st.sampled_from([1, 2, 3, 4, 6, 12]))
    coeffs = draw(st.lists(small_fractions, min_size=1, max_size=6))
    return Cyclotomic(n, coeffs)


@st.composite
def puiseux(draw, level=None, nonzero=True, max_terms=4):
    n = level or draw(st.sampled_from([1, 2, 3, 4, 6]))
    k = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = []
    for _ in range(k):
        q = Fraction(draw(st.integers(-12, 12)), n)
        terms.append((q, draw(cyclotomics(n))))
    f = PuiseuxSeries(terms, n)
    if nonzero and f.is_zero():
        f = PuiseuxSeries.monomial(0, 1, n)
    return f


def rand_fraction(rng: random.Random, lo=-5, hi=5, den=4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def rand_cyclotomic(rng: random.Random, level: int) -> Cyclotomic:
    while True:
        c = Cyclotomic(level, [rand_fraction(rng, -3, 3, 3) for _ in range(rng.randint(1, 4))])
        if not c.is_zero():
            return c


def rand_series(rng: random.Random, level: int, terms: int | None = None) -> PuiseuxSeries:
    while True:
        k = terms or rng.randint(1, 4)
        f = PuiseuxSeries(
            [(Fraction(rng.randint(-10, 10), level), rand_cyclotomic(rng, level)) for _ in range(k)], level
        )
        if not f.is_zero():
            return f


def ray_permutation_matrix(n: int, perm: list[int]) -> LatticeMap:
    """Matrix of the P^n fan sending ray rho to ray perm[rho] (rays e_1..e_n, -sum)."""
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cols = [rays[perm[j]] for j in range(n)]
    return LatticeMap(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))


def permutation_order(perm: list[int]) -> int:
    k, cur = 1, list(perm)
    while cur != list(range(len(perm))):
        cur = [perm[x] for x in cur]
        k += 1
    return k
