"""Exact arithmetic: cyclotomic numbers and finite Puiseux series.

Rationals are :class:`fractions.Fraction`.  A :class:`Cyclotomic` is an
element of Q(zeta_N) stored as a coefficient vector modulo the N-th
cyclotomic polynomial; a :class:`PuiseuxSeries` is a finite sum of
``c * t**q`` with ``q * N`` integral and ``c`` in Q(zeta_N).

Valuations are normalised so that ``val(t) == 1``; the zero series has
valuation :data:`INF`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

INF = math.inf

Number = Union[int, Fraction]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"a/b"`` strings into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


# -- integer polynomial helpers (coefficient lists, lowest degree first) ------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Exact division by a monic polynomial."""
    num = list(num)
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    dq = len(den) - 1
    if len(num) - 1 < dq:
        return [], _trim(num)
    quo = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        if c:
            quo[i - dq] = c
            for j in range(dq + 1):
                num[i - dq + j] -= c * den[j]
    return _trim(quo), _trim(num[:dq])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Phi_n as an integer coefficient tuple, via x^n - 1 = prod_{d | n} Phi_d."""
    if n < 1:
        raise ValueError("cyclotomic level must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(poly)


def totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


def _reduce(coeffs: list, n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        lead = c[i]
        if lead:
            for j in range(deg + 1):
                c[i - deg + j] -= lead * phi[j]
    c = c[:deg] + [Fraction(0)] * max(0, deg - len(c))
    return tuple(c)


class Cyclotomic:
    """An element of Q(zeta_N), zeta_N = exp(2 pi i / N)."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs: Iterable[Number]):
        self.level = int(level)
        self.coeffs = _reduce(list(coeffs), self.level)

    @classmethod
    def rational(cls, value, level: int = 1) -> "Cyclotomic":
        return cls(level, [as_fraction(value)])

    @classmethod
    def zeta(cls, level: int, power: int = 1) -> "Cyclotomic":
        power %= level
        return cls(level, [0] * power + [1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rescale(self, level: int) -> "Cyclotomic":
        """Re-express in Q(zeta_M) using zeta_N = zeta_M ** (M / N)."""
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"level {self.level} does not divide {level}")
        m = level // self.level
        spread = [Fraction(0)] * (m * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            spread[i * m] = c
        return Cyclotomic(level, spread)

    def _coerce(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.level)
        n = lcm(self.level, other.level)
        return self.rescale(n), other.rescale(n)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Cyclotomic(a.level, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.level, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else -as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(a.level, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of cyclotomic numbers are not supported")
        out = Cyclotomic(self.level, [1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # equality crosses levels

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if i == 0 else f"{c}*z{self.level}^{i}")
        return "(" + " + ".join(parts) + ")"


class PuiseuxSeries:
    """Finite Puiseux series sum(c_q * t**q) over Q(zeta_N), exponents in (1/N)Z."""

    __slots__ = ("level", "terms")

    def __init__(self, terms: Mapping | Iterable = (), level: int = 1):
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: dict[Fraction, Cyclotomic] = {}
        lev = int(level)
        raw = []
        for q, c in items:
            q = as_fraction(q)
            if not isinstance(c, Cyclotomic):
                c = Cyclotomic.rational(c)
            lev = lcm(lev, q.denominator, c.level)
            raw.append((q, c))
        for q, c in raw:
            c = c.rescale(lev)
            collected[q] = collected[q] + c if q in collected else c
        self.level = lev
        self.terms = tuple(sorted((q, c) for q, c in collected.items() if not c.is_zero()))

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, level: int = 1) -> "PuiseuxSeries":
        return cls((), level)

    @classmethod
    def constant(cls, value, level: int = 1) -> "PuiseuxSeries":
        if not isinstance(value, Cyclotomic):
            value = Cyclotomic.rational(value)
        return cls([(0, value)], level)

    @classmethod
    def monomial(cls, exponent, coeff=1, level: int = 1) -> "PuiseuxSeries":
        if not isinstance(coeff, Cyclotomic):
            coeff = Cyclotomic.rational(coeff)
        return cls([(as_fraction(exponent), coeff)], level)

    # -- structure ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def rescale(self, level: int) -> "PuiseuxSeries":
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"level {self.level} does not divide {level}")
        return PuiseuxSeries([(q, c.rescale(level)) for q, c in self.terms], level)

    def val(self):
        return self.terms[0][0] if self.terms else INF

    def leading_coefficient(self) -> Cyclotomic:
        if not self.terms:
            raise ValueError("the zero series has no leading coefficient")
        return self.terms[0][1]

    def twist(self, k: int) -> "PuiseuxSeries":
        """Apply t^(a/N) -> zeta_N^(k a) t^(a/N) at this series' level."""
        n = self.level
        out = []
        for q, c in self.terms:
            a = q * n
            assert a.denominator == 1
            out.append((q, c * Cyclotomic.zeta(n, k * a.numerator)))
        return PuiseuxSeries(out, n)

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> tuple["PuiseuxSeries", "PuiseuxSeries"]:
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other)
        n = lcm(self.level, other.level)
        return self.rescale(n), other.rescale(n)

    def __add__(self, other):
        if not isinstance(other, (PuiseuxSeries, int, Fraction, Cyclotomic)):
            return NotImplemented
        a, b = self._coerce(other)
        return PuiseuxSeries(list(a.terms) + list(b.terms), a.level)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries([(q, -c) for q, c in self.terms], self.level)

    def __sub__(self, other):
        if not isinstance(other, (PuiseuxSeries, int, Fraction, Cyclotomic)):
            return NotImplemented
        a, b = self._coerce(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (PuiseuxSeries, int, Fraction, Cyclotomic)):
            return NotImplemented
        a, b = self._coerce(other)
        return PuiseuxSeries(
            [(q1 + q2, c1 * c2) for q1, c1 in a.terms for q2, c2 in b.terms], a.level
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomial Puiseux series are invertible here")
            (q, c), = self.terms
            if not c.is_rational():
                # zeta powers are the only non-rational units needed
                inv = _cyclotomic_inverse(c)
            else:
                inv = Cyclotomic.rational(1 / c.coeffs[0], c.level)
            return PuiseuxSeries([(-q, inv)], self.level) ** (-k)
        out = PuiseuxSeries.constant(1, self.level)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, (PuiseuxSeries, int, Fraction, Cyclotomic)):
            return NotImplemented
        a, b = self._coerce(other)
        return a.terms == b.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*t^({q})" for q, c in self.terms)


def _cyclotomic_inverse(c: Cyclotomic) -> Cyclotomic:
    """Inverse in Q(zeta_N) by solving the multiplication-matrix system."""
    from .linalg import solve

    n = c.level
    d = len(c.coeffs)
    cols = []
    for j in range(d):
        cols.append(list((c * Cyclotomic(n, [0] * j + [1])).coeffs))
    mat = [[cols[j][i] for j in range(d)] for i in range(d)]
    rhs = [Fraction(1)] + [Fraction(0)] * (d - 1)
    x = solve(mat, rhs)
    if x is None:
        raise ZeroDivisionError("zero has no inverse")
    return Cyclotomic(n, x)


def puiseux_add(f: PuiseuxSeries, g: PuiseuxSeries) -> PuiseuxSeries:
    return f + g


def puiseux_mul(f: PuiseuxSeries, g: PuiseuxSeries) -> PuiseuxSeries:
    return f * g


def puiseux_val(f: PuiseuxSeries):
    return f.val()


def galois_twist(k: int, f: PuiseuxSeries, level: int | None = None) -> PuiseuxSeries:
    """Act by the residue ``k`` of Z/level on ``f`` (``level`` defaults to f's own).

    ``f`` is first rescaled to ``level``, which its own level must divide.
    """
    if level is not None:
        f = f.rescale(level)
    return f.twist(k)


def t(exponent: Number | str = 1, coeff=1, level: int = 1) -> PuiseuxSeries:
    """Shorthand for ``coeff * t**exponent``."""
    return PuiseuxSeries.monomial(exponent, coeff, level)


def parse_rational_vector(values: Sequence) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in values)
