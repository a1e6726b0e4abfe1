"""End-to-end acceptance checks, one test per criterion, all in exact arithmetic.

Each test prints a single PASS/FAIL line; the same lines are repeated in
the pytest terminal summary.
"""
import itertools
import random
import time
from fractions import Fraction

from acceptance_log import criterion
from strategies import permutation_order, rand_fraction, rand_series, ray_permutation_matrix

from galtrop import linalg
from galtrop.catalog import (
    ROTATION,
    brauer_severi_sextic,
    naive_p1_embedding,
    p1_embedding,
    p1_orbit,
    rotation_twist,
    untwisted_line_embedding,
)
from galtrop.exactnum import INF, PuiseuxSeries, galois_twist
from galtrop.extended import TropPoint, act_on_trop_point, segre_exponents, tropical_monomial_map
from galtrop.galois import TwistedLaurentPolynomial, act_on_torus_point, make_twist
from galtrop.homology import (
    chain_complex,
    chain_maps,
    fixed_dimension,
    homology_dims,
    induced_action,
    multiplicative_order,
)
from galtrop.toric import LatticeMap, is_fan_automorphism, projective_fan
from galtrop.trop import (
    argmin_multiplicity,
    check_complex_equivariance,
    close_in_toric_surface,
    equivariantize_embedding,
    groebner_cell,
    is_consistent_equivariantization,
    orbit_image,
    support_contains,
    trop_curve_2d,
    trop_point,
)

P2 = projective_fan(2)


def _timed(limit: float, start: float):
    took = time.perf_counter() - start
    assert took < limit, f"took {took:.2f}s, budget {limit}s"


def test_criterion_1_genus_ten_pipeline():
    with criterion(1, "genus-10 pipeline"):
        start = time.perf_counter()
        twist = rotation_twist()
        cx = close_in_toric_surface(trop_curve_2d(brauer_severi_sextic()), P2)
        assert cx.betti_1() == 10
        assert check_complex_equivariance(cx, twist)
        dims = homology_dims(cx)
        assert (dims["H00"], dims["H01"], dims["H10"], dims["H11"]) == (1, 10, 10, 1)
        mats, _ = induced_action(cx, twist, 0, 1)
        m = mats[twist.generators()[0]]
        assert len(m) == 10
        assert multiplicative_order(m) == 3
        assert sum(m[i][i] for i in range(10)) == 1
        assert fixed_dimension(m) == 4
        _timed(10, start)


def test_criterion_2_p1_orbit_separation():
    with criterion(2, "P^1 orbit separation"):
        start = time.perf_counter()
        emb = p1_embedding()
        res = orbit_image(p1_orbit(), emb)
        vals = [[c.val() for c in emb.evaluate(x)] for x in p1_orbit()]
        half = Fraction(1, 2)
        assert vals == [[INF, half, 0], [half, INF, 0]]
        assert res.injective
        assert res.action_compatible
        g = emb.target.generators()[0]
        assert act_on_trop_point(emb.target, g, res.images[0]) == res.images[1]
        assert act_on_trop_point(emb.target, g, res.images[1]) == res.images[0]

        naive = naive_p1_embedding()
        collapsed = orbit_image(p1_orbit(), naive)
        assert [p.coords for p in collapsed.images] == [(half,), (half,)]
        assert not collapsed.injective
        _timed(1, start)


def test_criterion_3_fan_action():
    with criterion(3, "fan action on P^2"):
        start = time.perf_counter()
        assert is_fan_automorphism(ROTATION, P2)
        maximal = P2.maximal_cones()
        images = {c: P2.map_cone(ROTATION, c) for c in maximal}
        assert sorted(images.values()) == sorted(maximal)
        c0 = maximal[0]
        orbit = [c0, images[c0], images[images[c0]]]
        assert len(set(orbit)) == 3 and images[orbit[2]] == c0

        twist = rotation_twist()
        g = twist.generators()[0]
        strata = [TropPoint.make(P2, c, (0, 0)) for c in maximal]
        moved = {p: act_on_trop_point(twist, g, p) for p in strata}
        assert set(moved.values()) == set(strata)
        p0 = strata[0]
        cycle = [p0, moved[p0], moved[moved[p0]]]
        assert len(set(cycle)) == 3 and moved[cycle[2]] == p0
        _timed(1, start)


# -- criterion 4 ----------------------------------------------------------------

def _property_a(rng):
    count = 0
    for _ in range(1000):
        n = rng.choice([1, 2, 3, 4, 6, 12])
        f, g = rand_series(rng, n), rand_series(rng, n)
        assert (f * g).val() == f.val() + g.val()
        k = rng.randrange(n)
        assert galois_twist(k, f).val() == f.val()
        assert galois_twist(k, g).val() == g.val()
        count += 1
    return count


def _random_twists(rng, count):
    out = []
    seen = set()
    while len(out) < count:
        n = rng.choice([2, 3])
        perm = list(range(n + 1))
        rng.shuffle(perm)
        if perm == sorted(perm) or (n, tuple(perm)) in seen:
            continue
        seen.add((n, tuple(perm)))
        m = permutation_order(perm)
        s = rng.choice([1, 2])
        level = m * s
        residue = s * rng.randrange(m)
        twist = make_twist(projective_fan(n), [ray_permutation_matrix(n, perm)], [m], [residue], level)
        out.append((n, perm, twist))
    return out


def _property_b(rng):
    """trop(g x) = A_g trop(x), against the homogeneous-coordinate oracle.

    With X_n = 1 and X_i = x_i, the point g x has homogeneous coordinates
    X'_{perm(rho)} = sigma(X_rho), hence valuations W'_{perm(rho)} = W_rho.
    """
    checked = 0
    for n, perm, twist in _random_twists(rng, 6):
        g = twist.generators()[0]
        a = twist.matrix(g)
        needs_inverse = {j for j in range(n) if any(a.matrix[i][j] < 0 for i in range(n))}
        for _ in range(90):
            x = tuple(
                rand_series(rng, twist.puiseux_level, 1 if j in needs_inverse else None) for j in range(n)
            )
            w = trop_point(x)
            gx = act_on_torus_point(twist, g, x)
            assert trop_point(gx) == tuple(a.apply(w))
            big_w = list(w) + [Fraction(0)]
            moved = [None] * (n + 1)
            for rho in range(n + 1):
                moved[perm[rho]] = big_w[rho]
            assert trop_point(gx) == tuple(moved[i] - moved[n] for i in range(n))
            checked += 1
    return checked


def _random_curve(rng):
    k = rng.randint(2, 12)
    support = set()
    while len(support) < k:
        support.add((rng.randint(-3, 3), rng.randint(-3, 3)))
    terms = {u: PuiseuxSeries.monomial(rand_fraction(rng, -4, 4, 2)) for u in sorted(support)}
    return TwistedLaurentPolynomial(2, terms)


GRID = [(Fraction(i, 4), Fraction(j, 4)) for i in range(-20, 21) for j in range(-20, 21)]


def _property_cd(rng):
    curves = 0
    for _ in range(50):
        f = _random_curve(rng)
        cx = trop_curve_2d(f)
        assert cx.is_balanced(), f
        on_curve = support_contains(cx, GRID)
        oracle = [m >= 2 for m in argmin_multiplicity(f, GRID)]
        assert on_curve == oracle, f
        curves += 1
    return curves


def _property_e(rng):
    f = brauer_severi_sextic()
    a = ROTATION
    a_inv_t = a.inverse().transpose()
    cx = trop_curve_2d(f)
    samples = [p.coords for p in cx.vertices]
    samples += [
        tuple((x + y) / 2 for x, y in zip(cx.vertices[e.ends[0]].coords, cx.vertices[e.ends[1]].coords))
        for e in cx.edges
    ]
    while len(samples) < 240:
        samples.append((rand_fraction(rng, -6, 6, 3), rand_fraction(rng, -6, 6, 3)))
    multi = 0
    for v in samples:
        cell = groebner_cell(f, v)
        moved = groebner_cell(f, a.apply(v))
        assert sorted(a_inv_t.apply(u) for u in cell) == moved
        multi += len(cell) > 1
    assert multi >= 80
    return len(samples)


def _property_f():
    twist = rotation_twist()
    group = twist.group
    cx = close_in_toric_surface(trop_curve_2d(brauer_severi_sextic()), P2)
    for p in (0, 1):
        cc = chain_complex(cx, p)
        d = cc.boundary
        maps = {g: chain_maps(cx, twist, g, p, cc) for g in range(len(group))}
        for g, (phi0, phi1) in maps.items():
            assert linalg.matmul(d, phi1) == linalg.matmul(phi0, d)
        chars = {}
        for q in (0, 1):
            mats, chars[q] = induced_action(cx, twist, p, q, elements=range(len(group)))
            dim = len(mats[0])
            assert mats[0] == linalg.identity(dim)
            for g, h in itertools.product(range(len(group)), repeat=2):
                # right action: matrix(gh) = matrix(h) matrix(g)
                assert mats[group.mul(g, h)] == linalg.matmul(mats[h], mats[g])
            for g in range(len(group)):
                assert group.order(g) % multiplicative_order(mats[g]) == 0
        # Hopf trace formula ties the characters to the chain level
        for g, (phi0, phi1) in maps.items():
            tr0 = sum(phi0[i][i] for i in range(len(phi0)))
            tr1 = sum(phi1[i][i] for i in range(len(phi1)))
            assert tr0 - tr1 == chars[0][g] - chars[1][g]
    return True


def test_criterion_4_property_suites():
    with criterion(4, "property suites"):
        start = time.perf_counter()
        rng = random.Random(20240611)
        assert _property_a(rng) >= 1000
        assert _property_b(rng) >= 500
        assert _property_cd(rng) >= 50
        assert _property_e(rng) >= 200
        assert _property_f()
        _timed(120, start)


def test_criterion_5_equivariantization():
    with criterion(5, "equivariantization and Segre map"):
        start = time.perf_counter()
        half = PuiseuxSeries.monomial("1/2", 1, 2)
        emb = untwisted_line_embedding(-half)
        out = equivariantize_embedding(emb, 2)
        x = TwistedLaurentPolynomial.variable(1, 0, 2)
        assert list(out.coordinates) == [x - TwistedLaurentPolynomial.constant(1, half),
                                         x + TwistedLaurentPolynomial.constant(1, half)]
        swap = out.target.matrix(out.target.generators()[0])
        assert swap == LatticeMap(((0, 1), (1, 0)))
        assert out.target.residue(out.target.generators()[0]) == 1
        assert is_consistent_equivariantization(out)

        rng = random.Random(7)
        for dims in ([1, 1], [2, 1], [1, 1, 1], [2, 2]):
            rows = segre_exponents(dims)
            n = sum(dims)
            for _ in range(25):
                xs = [rand_series(rng, 2) for _ in range(n)]
                p = TropPoint.interior([c.val() for c in xs])
                expected = []
                for u in rows:
                    prod = PuiseuxSeries.constant(1)
                    for c, e in zip(xs, u):
                        if e:
                            prod = prod * c ** e
                    expected.append(prod.val())
                assert list(tropical_monomial_map(rows, p)) == expected
                assert list(tropical_monomial_map(rows, p)) == linalg.matvec(linalg.to_matrix(rows), p.coords)
        _timed(1, start)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
