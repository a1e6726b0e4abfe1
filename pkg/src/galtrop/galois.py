"""Finite twist data on fans and the twisted action on Laurent polynomials.

Group elements act on the right: the matrix of ``g*h`` is
``matrix(h) @ matrix(g)``.  On coefficients an element acts through a
single residue mod the Puiseux level, i.e. by a power of
``t^(1/N) -> zeta_N t^(1/N)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactnum import PuiseuxSeries, lcm
from .toric import Fan, FanError, LatticeMap, is_fan_automorphism

Exponent = tuple[int, ...]


class InvalidTwist(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    """An explicit finite group: elements (identity first) and a multiplication table."""

    elements: tuple
    table: tuple[tuple[int, ...], ...]
    generator_indices: tuple[int, ...]

    def __post_init__(self):
        n = len(self.elements)
        if any(len(row) != n for row in self.table):
            raise ValueError("multiplication table has the wrong shape")
        if any(self.table[0][i] != i or self.table[i][0] != i for i in range(n)):
            raise ValueError("element 0 is not an identity")
        for i in range(n):
            if 0 not in self.table[i]:
                raise ValueError(f"element {self.elements[i]!r} has no inverse")
        # associativity spot-check on a bounded sample
        idx = range(n)
        for a, b, c in itertools.islice(itertools.product(idx, idx, idx), 4096):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise ValueError("multiplication table is not associative")
        if set(self.closure(self.generator_indices)) != set(range(n)):
            raise ValueError("generators do not generate the group")

    @classmethod
    def cyclic_product(cls, orders: Sequence[int]) -> "FiniteGroup":
        """Z/n_1 x ... x Z/n_r with elements as residue tuples."""
        orders = tuple(int(o) for o in orders)
        if any(o < 1 for o in orders):
            raise ValueError("cyclic orders must be positive")
        elements = tuple(itertools.product(*(range(o) for o in orders)))
        index = {e: i for i, e in enumerate(elements)}
        table = tuple(
            tuple(index[tuple((x + y) % o for x, y, o in zip(a, b, orders))] for b in elements)
            for a in elements
        )
        gens = tuple(index[tuple(int(i == j) for j in range(len(orders)))] for i in range(len(orders)))
        return cls(elements, table, gens)

    def __len__(self):
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.table[a].index(0)

    def order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def closure(self, gens: Iterable[int]) -> list[int]:
        seen = [0]
        frontier = [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.append(y)
                        nxt.append(y)
            frontier = nxt
        return seen


class TwistedLaurentPolynomial:
    """Laurent polynomial sum a_u chi^u with Puiseux coefficients."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, PuiseuxSeries] = {}
        for u, a in items:
            u = tuple(int(x) for x in u)
            if len(u) != rank:
                raise ValueError(f"exponent {u} does not have length {rank}")
            if not isinstance(a, PuiseuxSeries):
                a = PuiseuxSeries.constant(a)
            acc[u] = acc[u] + a if u in acc else a
        acc = {u: a for u, a in acc.items() if not a.is_zero()}
        level = lcm(*(a.level for a in acc.values())) if acc else 1
        self.rank = int(rank)
        self.terms = {u: a.rescale(level) for u, a in sorted(acc.items())}

    @property
    def level(self) -> int:
        return next(iter(self.terms.values())).level if self.terms else 1

    def support(self) -> list[Exponent]:
        return list(self.terms)

    def valuations(self) -> dict[Exponent, Fraction]:
        return {u: a.val() for u, a in self.terms.items()}

    def rescale(self, level: int) -> "TwistedLaurentPolynomial":
        return TwistedLaurentPolynomial(self.rank, {u: a.rescale(level) for u, a in self.terms.items()})

    def __add__(self, other: "TwistedLaurentPolynomial"):
        return TwistedLaurentPolynomial(self.rank, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self):
        return TwistedLaurentPolynomial(self.rank, {u: -a for u, a in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TwistedLaurentPolynomial):
            return TwistedLaurentPolynomial(self.rank, [
                (tuple(x + y for x, y in zip(u, v)), a * b)
                for u, a in self.terms.items()
                for v, b in other.terms.items()
            ])
        return TwistedLaurentPolynomial(self.rank, {u: a * other for u, a in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TwistedLaurentPolynomial):
            return NotImplemented
        return self.rank == other.rank and self.terms.keys() == other.terms.keys() and all(
            self.terms[u] == other.terms[u] for u in self.terms
        )

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({a})*x^{u}" for u, a in self.terms.items())

    def evaluate(self, point: Sequence[PuiseuxSeries]) -> PuiseuxSeries:
        """Substitute Puiseux values; negative powers need monomial values."""
        total = PuiseuxSeries.zero()
        for u, a in self.terms.items():
            term = a
            for x, e in zip(point, u):
                if e:
                    term = term * (x ** e)
            total = total + term
        return total

    @classmethod
    def variable(cls, rank: int, i: int, level: int = 1) -> "TwistedLaurentPolynomial":
        u = tuple(int(j == i) for j in range(rank))
        return cls(rank, {u: PuiseuxSeries.constant(1, level)})

    @classmethod
    def constant(cls, rank: int, value) -> "TwistedLaurentPolynomial":
        if not isinstance(value, PuiseuxSeries):
            value = PuiseuxSeries.constant(value)
        return cls(rank, {(0,) * rank: value})


@dataclass(frozen=True, eq=False)
class TwistedToricVariety:
    fan: Fan
    group: FiniteGroup
    action: tuple[LatticeMap, ...]  # indexed like group.elements
    puiseux_level: int
    residues: tuple[int, ...]  # coefficient residue mod puiseux_level per element

    @property
    def rank(self) -> int:
        return self.fan.rank

    def generators(self) -> tuple[int, ...]:
        return self.group.generator_indices

    def matrix(self, g: int) -> LatticeMap:
        return self.action[g]

    def residue(self, g: int) -> int:
        return self.residues[g]


def make_twist(
    fan: Fan,
    generators: Sequence[LatticeMap],
    orders: Sequence[int],
    residues: Sequence[int] | None = None,
    level: int = 1,
) -> TwistedToricVariety:
    """Validate generator matrices and expand the action of Z/n_1 x ... x Z/n_r."""
    generators = [g if isinstance(g, LatticeMap) else LatticeMap(g) for g in generators]
    if len(generators) != len(orders):
        raise InvalidTwist("one generator matrix is needed per cyclic factor")
    residues = list(residues) if residues is not None else [0] * len(orders)
    if len(residues) != len(orders):
        raise InvalidTwist("one coefficient residue is needed per cyclic factor")
    n = fan.rank
    for a, m in zip(generators, orders):
        if a.rank != n:
            raise InvalidTwist(f"generator {a.matrix} does not act on Z^{n}")
        try:
            ok = is_fan_automorphism(a, fan)
        except FanError as exc:
            raise InvalidTwist(str(exc)) from exc
        if not ok:
            raise InvalidTwist(f"{a.matrix} does not preserve the fan")
        if not a.power(m).is_identity():
            raise InvalidTwist(f"{a.matrix} does not have order dividing {m}")
    for a, b in itertools.combinations(generators, 2):
        if a @ b != b @ a:
            raise InvalidTwist("generators of distinct cyclic factors must commute")
    group = FiniteGroup.cyclic_product(orders)
    action = []
    res = []
    for elem in group.elements:
        mat = LatticeMap.identity(n)
        for a, e in zip(generators, elem):
            mat = a.power(e) @ mat
        action.append(mat)
        res.append(sum(k * e for k, e in zip(residues, elem)) % level)
    return TwistedToricVariety(fan, group, tuple(action), int(level), tuple(res))


def trivial_twist(fan: Fan, level: int = 1) -> TwistedToricVariety:
    return make_twist(fan, [], [], [], level)


def dual_character_action(twist: TwistedToricVariety, g: int) -> LatticeMap:
    return twist.matrix(g).transpose()


def act_on_laurent(twist: TwistedToricVariety, g: int, f: TwistedLaurentPolynomial) -> TwistedLaurentPolynomial:
    """a_u chi^u -> twist(k_g, a_u) chi^(A_g^T u)."""
    if f.level != 1 and twist.puiseux_level % f.level:
        raise InvalidTwist(f"polynomial level {f.level} does not divide the twist level {twist.puiseux_level}")
    dual = dual_character_action(twist, g)
    k = twist.residue(g)
    return TwistedLaurentPolynomial(f.rank, [
        (dual.apply(u), a.rescale(twist.puiseux_level).twist(k)) for u, a in f.terms.items()
    ])


def _proportional(f: TwistedLaurentPolynomial, h: TwistedLaurentPolynomial) -> bool:
    """Whether h == c * chi^w * f for a nonzero scalar c and an exponent w.

    Neither factor changes the hypersurface in the torus. The scalar may be an
    infinite series, so the test cross-multiplies instead of dividing.
    """
    fs, hs = f.support(), h.support()
    if len(fs) != len(hs):
        return False
    if not fs:
        return True
    # translation preserves lexicographic order, so supports line up term by term
    w = tuple(b - a for a, b in zip(fs[0], hs[0]))
    if any(tuple(x + y for x, y in zip(u, w)) != v for u, v in zip(fs, hs)):
        return False
    a, b = f.terms[fs[0]], h.terms[hs[0]]
    return all(f.terms[u] * b == h.terms[v] * a for u, v in zip(fs[1:], hs[1:]))


def is_invariant_hypersurface(twist: TwistedToricVariety, f: TwistedLaurentPolynomial) -> bool:
    return all(_proportional(f, act_on_laurent(twist, g, f)) for g in twist.generators())


def act_on_torus_point(twist: TwistedToricVariety, g: int, x: Sequence[PuiseuxSeries]) -> tuple[PuiseuxSeries, ...]:
    """(g.x)_i = twist(k_g, prod_j x_j^(A_g)_ij), so that trop(g.x) = A_g trop(x).

    Negative exponents require monomial coordinates.
    """
    level = twist.puiseux_level
    k = twist.residue(g)
    out = []
    for row in twist.matrix(g).matrix:
        val = PuiseuxSeries.constant(1)
        for xj, e in zip(x, row):
            if e:
                val = val * (xj ** e)
        if level % val.level:
            raise InvalidTwist(f"coordinate level {val.level} does not divide the twist level {level}")
        out.append(val.rescale(level).twist(k))
    return tuple(out)
