"""Lattices, smooth simplicial fans and their automorphisms."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg

IntVector = tuple[int, ...]
Cone = tuple[int, ...]


class FanError(ValueError):
    """Malformed fan or lattice data."""


class UnsupportedCone(FanError):
    pass


class PointNotFound(FanError):
    pass


def primitive(v: Sequence) -> IntVector:
    """The primitive integer vector on the ray through a rational vector."""
    fr = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = math.gcd(*ints) if ints else 0
    if g == 0:
        raise FanError("zero vector has no primitive direction")
    return tuple(x // g for x in ints)


def is_primitive(v: Sequence[int]) -> bool:
    return math.gcd(*v) == 1


def pairing(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class LatticeMap:
    """An integer n x n matrix acting on column vectors of N."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in self.matrix))
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise FanError("lattice maps must be square")

    @classmethod
    def identity(cls, n: int) -> "LatticeMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def det(self) -> int:
        return int(linalg.det(self.matrix))

    def is_unimodular(self) -> bool:
        return abs(self.det()) == 1

    def apply(self, v: Sequence):
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.matrix)

    def __matmul__(self, other: "LatticeMap") -> "LatticeMap":
        n = self.rank
        return LatticeMap(tuple(
            tuple(sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        ))

    def transpose(self) -> "LatticeMap":
        return LatticeMap(tuple(zip(*self.matrix)) if self.matrix else ())

    def inverse(self) -> "LatticeMap":
        if not self.is_unimodular():
            raise FanError("only unimodular maps are invertible over Z")
        inv = linalg.inverse(linalg.to_matrix(self.matrix))
        return LatticeMap(tuple(tuple(int(x) for x in row) for row in inv))

    def power(self, k: int) -> "LatticeMap":
        out = LatticeMap.identity(self.rank)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out @ base
        return out

    def is_identity(self) -> bool:
        return self == LatticeMap.identity(self.rank)


def _unimodular_completion(rays: Sequence[IntVector], n: int) -> list[list[int]] | None:
    """Unimodular U with R U = [I | 0] for the ray matrix R, or None if not smooth.

    Column operations only, so U stays unimodular; its columns are the dual
    basis of a Z-basis extending the rays.
    """
    k = len(rays)
    r = [list(row) for row in rays]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(dst: int, src: int, factor: int):
        for row in r:
            row[dst] += factor * row[src]
        for row in u:
            row[dst] += factor * row[src]

    def swap(a: int, b: int):
        for row in r:
            row[a], row[b] = row[b], row[a]
        for row in u:
            row[a], row[b] = row[b], row[a]

    def negate(a: int):
        for row in r:
            row[a] = -row[a]
        for row in u:
            row[a] = -row[a]

    for i in range(k):
        while True:
            nz = [j for j in range(i, n) if r[i][j]]
            if not nz:
                return None
            j0 = min(nz, key=lambda j: abs(r[i][j]))
            if j0 != i:
                swap(i, j0)
            done = True
            for j in range(i + 1, n):
                if r[i][j]:
                    colop(j, i, -(r[i][j] // r[i][i]))
                    if r[i][j]:
                        done = False
            if done:
                break
        if r[i][i] < 0:
            negate(i)
        if r[i][i] != 1:
            return None
    for i in range(k):
        for j in range(i):
            if r[i][j]:
                colop(j, i, -r[i][j])
    return u


class Fan:
    """A simplicial fan given by primitive rays and face-closed cones.

    Treat instances as immutable; the cone frames used for quotient
    coordinates are computed once here.
    """

    def __init__(self, rank: int, rays: Iterable[Sequence[int]], cones: Iterable[Iterable[int]]):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        for r in rays:
            if len(r) != rank:
                raise FanError(f"ray {r} does not live in Z^{rank}")
            if not is_primitive(r):
                raise FanError(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise FanError("duplicate rays")
        closed: set[Cone] = {()}
        for c in cones:
            c = tuple(sorted(set(int(i) for i in c)))
            if any(i < 0 or i >= len(rays) for i in c):
                raise FanError(f"cone {c} references an unknown ray")
            for k in range(len(c) + 1):
                closed.update(itertools.combinations(c, k))
        ordered = tuple(sorted(closed, key=lambda c: (len(c), c)))
        self.rank = int(rank)
        self.rays: tuple[IntVector, ...] = rays
        self.cones: tuple[Cone, ...] = ordered
        self._ray_index = {r: i for i, r in enumerate(rays)}
        self._cone_set = frozenset(ordered)
        self._frames = {}
        for c in ordered:
            vecs = [rays[i] for i in c]
            if vecs and linalg.rank(linalg.to_matrix(vecs)) != len(vecs):
                raise FanError(f"cone {c} is not simplicial")
            self._frames[c] = _cone_frame(vecs, self.rank)

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return self.rank == other.rank and self.rays == other.rays and self._cone_set == other._cone_set

    def __hash__(self):
        return hash((self.rank, self.rays, self._cone_set))

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={list(self.rays)}, maximal={self.maximal_cones()})"

    # -- queries ----------------------------------------------------------------
    def ray_index(self, v: Sequence[int]) -> int | None:
        return self._ray_index.get(tuple(v))

    def has_cone(self, cone: Iterable[int]) -> bool:
        return tuple(sorted(cone)) in self._cone_set

    def maximal_cones(self) -> list[Cone]:
        return [c for c in self.cones if not any(set(c) < set(d) for d in self.cones)]

    def cone_rays(self, cone: Cone) -> list[IntVector]:
        return [self.rays[i] for i in cone]

    def is_smooth_cone(self, cone: Cone) -> bool:
        return _unimodular_completion(self.cone_rays(cone), self.rank) is not None

    def is_smooth(self) -> bool:
        return all(self.is_smooth_cone(c) for c in self.maximal_cones())

    def reduce(self, cone: Cone, v: Sequence) -> tuple[Fraction, ...]:
        """Canonical representative of ``v`` modulo span(cone).

        Uses the complement of standard basis vectors fixed per cone at
        construction; the result is zero outside the complement coordinates.
        """
        proj = self._frames[tuple(cone)][1]
        return tuple(linalg.matvec(proj, v))

    def complement_coords(self, cone: Cone) -> tuple[int, ...]:
        return self._frames[tuple(cone)][2]

    def cone_coefficients(self, cone: Cone, v: Sequence) -> tuple[list[Fraction], list[Fraction]]:
        """Split v = sum a_i ray_i + sum b_j e_{c_j} for the cone's frame."""
        inv, _, comp = self._frames[tuple(cone)]
        coeffs = linalg.matvec(inv, v)
        k = len(cone)
        return coeffs[:k], coeffs[k:]

    def map_cone(self, a: LatticeMap, cone: Cone) -> Cone:
        out = []
        for i in cone:
            j = self.ray_index(a.apply(self.rays[i]))
            if j is None:
                raise FanError(f"image of ray {self.rays[i]} is not a ray of the fan")
            out.append(j)
        image = tuple(sorted(out))
        if image not in self._cone_set:
            raise FanError(f"image of cone {cone} is not a cone of the fan")
        return image

    def covers_sample(self, radius: int = 3) -> bool:
        """Check that every integer point of a box lies in some cone (rank <= 3)."""
        if self.rank > 3:
            raise FanError("support sampling is only provided for rank <= 3")
        for v in itertools.product(range(-radius, radius + 1), repeat=self.rank):
            try:
                cone_of_point(v, self)
            except PointNotFound:
                return False
        return True


def _cone_frame(vecs: list[IntVector], n: int):
    """(inverse of [rays | complement], projector modulo span, complement coords)."""
    red, pivots = linalg.rref(linalg.to_matrix(vecs)) if vecs else ([], [])
    comp = tuple(j for j in range(n) if j not in pivots)
    cols = [list(v) for v in vecs] + [[int(i == j) for i in range(n)] for j in comp]
    basis = linalg.transpose(linalg.to_matrix(cols))
    inv = linalg.inverse(basis)
    k = len(vecs)
    proj = linalg.zeros(n, n)
    for idx, j in enumerate(comp):
        proj[j] = list(inv[k + idx])
    return inv, proj, comp


def projective_fan(n: int) -> Fan:
    """Fan of P^n: rays e_1..e_n and -(e_1 + ... + e_n)."""
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(n, rays, cones)


def zero_fan(rank: int = 0) -> Fan:
    return Fan(rank, [], [()])


def is_fan_automorphism(a: LatticeMap, fan: Fan) -> bool:
    if a.rank != fan.rank:
        raise FanError("matrix size does not match the fan rank")
    if not a.is_unimodular():
        raise FanError(f"matrix {a.matrix} is not unimodular")
    images = []
    for r in fan.rays:
        j = fan.ray_index(a.apply(r))
        if j is None:
            return False
        images.append(j)
    if len(set(images)) != len(images):
        return False
    return all(fan.has_cone(images[i] for i in c) for c in fan.cones)


def dual_semigroup_generators(fan: Fan, cone: Cone) -> list[IntVector]:
    """Generators of the dual-cone lattice semigroup of a smooth cone.

    For a k-dimensional smooth cone these are the k dual-basis vectors of
    a Z-basis extending its rays, and plus/minus the remaining n - k.
    """
    rays = fan.cone_rays(tuple(cone))
    u = _unimodular_completion(rays, fan.rank)
    if u is None:
        raise UnsupportedCone(f"cone {tuple(cone)} is not smooth")
    cols = [tuple(u[i][j] for i in range(fan.rank)) for j in range(fan.rank)]
    k = len(rays)
    gens = cols[:k]
    for c in cols[k:]:
        gens.append(c)
        gens.append(tuple(-x for x in c))
    return gens


def cone_of_point(v: Sequence, fan: Fan) -> Cone:
    """The cone containing ``v`` in its relative interior."""
    v = tuple(Fraction(x) for x in v)
    if not any(v):
        return ()
    for c in fan.cones:
        if not c:
            continue
        a, b = fan.cone_coefficients(c, v)
        if not any(b) and all(x > 0 for x in a):
            return c
    raise PointNotFound(f"{tuple(str(x) for x in v)} is outside the support of the fan")


def product_fan(f1: Fan, f2: Fan) -> Fan:
    n1, n2 = f1.rank, f2.rank
    rays = [tuple(r) + (0,) * n2 for r in f1.rays] + [(0,) * n1 + tuple(r) for r in f2.rays]
    off = len(f1.rays)
    cones = [
        tuple(c1) + tuple(off + j for j in c2)
        for c1 in f1.maximal_cones()
        for c2 in f2.maximal_cones()
    ]
    return Fan(n1 + n2, rays, cones)


def power_fan(fan: Fan, m: int) -> Fan:
    out = zero_fan(0)
    for _ in range(m):
        out = product_fan(out, fan)
    return out
