import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from galtrop import _kernels

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")

small = st.integers(-20, 20)
points2 = st.lists(st.tuples(small, small), min_size=1, max_size=9, unique=True)


def both(fn, *args):
    with _kernels.use_backend("numba"):
        a = fn(*args)
    with _kernels.use_backend("numpy"):
        b = fn(*args)
    return a, b


@given(points2, st.data())
def test_lower_facets_backends_agree(pts, data):
    hts = data.draw(st.lists(st.integers(-50, 50), min_size=len(pts), max_size=len(pts)))
    (t1, k1, o1), (t2, k2, o2) = both(_kernels.lower_facets, [list(p) for p in pts], hts)
    assert np.array_equal(t1, t2)
    assert np.array_equal(k1, k2)
    assert np.array_equal(o1[k1], o2[k2])


@given(points2, st.lists(st.tuples(small, small), min_size=1, max_size=30), st.data())
def test_argmin_backends_agree(exps, grid, data):
    consts = data.draw(st.lists(st.integers(-50, 50), min_size=len(exps), max_size=len(exps)))
    (m1, c1), (m2, c2) = both(_kernels.argmin_counts, [list(e) for e in exps], consts, [list(g) for g in grid])
    assert list(m1) == list(m2) and list(c1) == list(c2)
    for g, m, c in zip(grid, m1, c1):
        vals = [k + e[0] * g[0] + e[1] * g[1] for e, k in zip(exps, consts)]
        assert m == min(vals) and c == vals.count(min(vals))


@given(st.lists(st.tuples(small, small, small, small, st.booleans()), min_size=1, max_size=8),
       st.lists(st.tuples(small, small), min_size=1, max_size=30))
def test_on_segments_backends_agree(segs, pts):
    segs = [s for s in segs if s[2] or s[3]]
    if not segs:
        return
    starts = [[s[0], s[1]] for s in segs]
    dirs = [[s[2], s[3]] for s in segs]
    flags = [s[4] for s in segs]
    a, b = both(_kernels.on_segments, starts, dirs, flags, [list(p) for p in pts])
    assert list(a) == list(b)


def test_huge_values_use_python_ints():
    big = 10**30
    mins, counts = _kernels.argmin_counts([[1, 0], [0, 1]], [big, big], [[0, 0], [1, 0]])
    assert list(mins) == [big, big] and list(counts) == [2, 1]
    pts = [[0, 0], [1, 0], [0, 1], [1, 1]]
    triples, keep, _ = _kernels.lower_facets(pts, [0, big, big, 0])
    kept = {tuple(r) for r, k in zip(triples, keep) if k}
    assert kept == {(0, 1, 3), (0, 2, 3)}


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("GALTROP_KERNELS", "numpy")
    assert _kernels._initial_backend() == "numpy"
    monkeypatch.setenv("GALTROP_KERNELS", "fortran")
    with pytest.raises(ValueError):
        _kernels._initial_backend()
    with _kernels.use_backend("numpy"):
        assert _kernels.backend() == "numpy"


def test_scaling_helpers():
    from fractions import Fraction

    assert _kernels.common_denominator([Fraction(1, 2), 3], [[Fraction(1, 3)]]) == 6
    assert _kernels.scaled([[Fraction(1, 2)], [2]], 4) == [[2], [8]]
    assert list(itertools.chain.from_iterable(_kernels.scaled([[1, 2]], 3))) == [3, 6]
