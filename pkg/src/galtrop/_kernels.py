"""Integer min-plus kernels with a numba path and a pure-numpy fallback.

Exact rational inputs are scaled to a common denominator before they get
here, so every kernel works on integers.  The backend is chosen by the
``GALTROP_KERNELS`` environment variable (``numba`` or ``numpy``); numba is
the default when importable.  Inputs whose magnitudes could overflow int64
are routed to the numpy path on object arrays (Python ints).
"""
from __future__ import annotations

import contextlib
import math
import os
from fractions import Fraction
from typing import Sequence

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_SAFE = 2**62


def _initial_backend() -> str:
    name = os.environ.get("GALTROP_KERNELS", "numba" if HAVE_NUMBA else "numpy").lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"GALTROP_KERNELS must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        name = "numpy"
    return name


_backend = _initial_backend()


def backend() -> str:
    return _backend


@contextlib.contextmanager
def use_backend(name: str):
    global _backend
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    old, _backend = _backend, name
    try:
        yield
    finally:
        _backend = old


def common_denominator(*groups: Sequence) -> int:
    """Least common denominator of all rationals in nested sequences."""
    den = 1
    for grp in groups:
        for x in np.ravel(np.asarray(grp, dtype=object)):
            den = math.lcm(den, Fraction(x).denominator)
    return den


def scaled(values: Sequence, den: int) -> list:
    """Nested lists of rationals multiplied by ``den`` (exact Python ints)."""
    if isinstance(values, (list, tuple)):
        return [scaled(v, den) for v in values]
    out = Fraction(values) * den
    assert out.denominator == 1
    return int(out)


def _as_int(arr, bound: int):
    """int64 array when ``bound`` is safe, else an object array of Python ints."""
    if bound < _SAFE:
        return np.asarray(arr, dtype=np.int64), True
    return np.asarray(arr, dtype=object), False


def _maxabs(arr) -> int:
    a = np.asarray(arr, dtype=object)
    return int(max((abs(int(x)) for x in a.ravel()), default=0))


# -- lower hull facets ----------------------------------------------------------

def _lower_facets_numpy(pts, hts, triples):
    i, j, k = triples[:, 0], triples[:, 1], triples[:, 2]
    ax, ay, ah = pts[j, 0] - pts[i, 0], pts[j, 1] - pts[i, 1], hts[j] - hts[i]
    bx, by, bh = pts[k, 0] - pts[i, 0], pts[k, 1] - pts[i, 1], hts[k] - hts[i]
    nx = ay * bh - ah * by
    ny = ah * bx - ax * bh
    nz = ax * by - ay * bx
    dx = pts[None, :, 0] - pts[i][:, None, 0]
    dy = pts[None, :, 1] - pts[i][:, None, 1]
    dh = hts[None, :] - hts[i][:, None]
    side = nx[:, None] * dx + ny[:, None] * dy + nz[:, None] * dh
    side = side * np.where(nz > 0, 1, -1)[:, None]
    keep = (nz != 0) & np.all(side >= 0, axis=1)
    onplane = side == 0
    return np.asarray(keep, dtype=bool), np.asarray(onplane, dtype=bool)


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _lower_facets_numba(pts, hts, triples):
        t = triples.shape[0]
        n = pts.shape[0]
        keep = np.zeros(t, dtype=np.bool_)
        onplane = np.zeros((t, n), dtype=np.bool_)
        for r in range(t):
            i, j, k = triples[r, 0], triples[r, 1], triples[r, 2]
            ax = pts[j, 0] - pts[i, 0]
            ay = pts[j, 1] - pts[i, 1]
            ah = hts[j] - hts[i]
            bx = pts[k, 0] - pts[i, 0]
            by = pts[k, 1] - pts[i, 1]
            bh = hts[k] - hts[i]
            nx = ay * bh - ah * by
            ny = ah * bx - ax * bh
            nz = ax * by - ay * bx
            if nz == 0:
                continue
            sgn = 1 if nz > 0 else -1
            ok = True
            for l in range(n):
                s = sgn * (nx * (pts[l, 0] - pts[i, 0]) + ny * (pts[l, 1] - pts[i, 1]) + nz * (hts[l] - hts[i]))
                if s < 0:
                    ok = False
                    break
                onplane[r, l] = s == 0
            keep[r] = ok
        return keep, onplane


def lower_facets(points: Sequence[Sequence[int]], heights_int: Sequence[int]):
    """For every non-collinear triple, whether its lifted plane supports the lower hull.

    Returns ``(triples, keep, onplane)`` where ``onplane[r]`` marks the points
    lying on the plane of triple ``r`` (valid only where ``keep[r]``).
    """
    n = len(points)
    triples = np.array(
        [(i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)], dtype=np.int64
    ).reshape(-1, 3)
    span = _maxabs(points) * 2 + 1
    hspan = _maxabs(heights_int) * 2 + 1
    bound = 8 * span * span * span * hspan
    pts, fast = _as_int(points, bound)
    hts, _ = _as_int(heights_int, bound)
    pts = pts.reshape(n, 2)
    if len(triples) == 0:
        return triples, np.zeros(0, dtype=bool), np.zeros((0, n), dtype=bool)
    if fast and _backend == "numba":
        keep, onplane = _lower_facets_numba(pts, hts, triples)
    else:
        keep, onplane = _lower_facets_numpy(pts, hts, triples)
    return triples, keep, onplane


# -- argmin multiplicity of a tropical polynomial --------------------------------

def _argmin_numpy(exps, consts, grid):
    vals = consts[None, :] + np.dot(grid, exps.T)
    mins = vals.min(axis=1)
    counts = (vals == mins[:, None]).sum(axis=1)
    return mins, np.asarray(counts, dtype=np.int64)


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _argmin_numba(exps, consts, grid):
        g = grid.shape[0]
        m = exps.shape[0]
        d = exps.shape[1]
        mins = np.empty(g, dtype=np.int64)
        counts = np.zeros(g, dtype=np.int64)
        for p in range(g):
            best = 0
            cnt = 0
            for i in range(m):
                v = consts[i]
                for a in range(d):
                    v += exps[i, a] * grid[p, a]
                if cnt == 0 or v < best:
                    best = v
                    cnt = 1
                elif v == best:
                    cnt += 1
            mins[p] = best
            counts[p] = cnt
        return mins, counts


def argmin_counts(exps_int, consts_int, grid_int):
    """Minimum of consts_i + <exps_i, v> over i, and how many i attain it, per grid row."""
    exps_o = np.asarray(exps_int, dtype=object)
    m = exps_o.shape[0]
    d = exps_o.shape[1] if exps_o.ndim == 2 else 0
    bound = (_maxabs(consts_int) + d * _maxabs(exps_int) * _maxabs(grid_int) + 1) * 2
    exps, fast = _as_int(exps_int, bound)
    consts, _ = _as_int(consts_int, bound)
    grid, _ = _as_int(grid_int, bound)
    exps = exps.reshape(m, d)
    grid = grid.reshape(-1, d)
    if fast and _backend == "numba":
        return _argmin_numba(exps, consts, grid)
    return _argmin_numpy(exps, consts, grid)


# -- membership of lattice points in segments and rays ---------------------------

def _on_segments_numpy(starts, dirs, is_ray, pts):
    px = pts[:, None, 0] - starts[None, :, 0]
    py = pts[:, None, 1] - starts[None, :, 1]
    cross = dirs[None, :, 0] * py - dirs[None, :, 1] * px
    dot = dirs[None, :, 0] * px + dirs[None, :, 1] * py
    norm = dirs[:, 0] * dirs[:, 0] + dirs[:, 1] * dirs[:, 1]
    inside = (cross == 0) & (dot >= 0) & (is_ray[None, :] | (dot <= norm[None, :]))
    return np.asarray(inside.any(axis=1), dtype=bool)


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _on_segments_numba(starts, dirs, is_ray, pts):
        g = pts.shape[0]
        e = starts.shape[0]
        out = np.zeros(g, dtype=np.bool_)
        for p in range(g):
            for s in range(e):
                px = pts[p, 0] - starts[s, 0]
                py = pts[p, 1] - starts[s, 1]
                if dirs[s, 0] * py - dirs[s, 1] * px != 0:
                    continue
                dot = dirs[s, 0] * px + dirs[s, 1] * py
                if dot < 0:
                    continue
                if is_ray[s] or dot <= dirs[s, 0] * dirs[s, 0] + dirs[s, 1] * dirs[s, 1]:
                    out[p] = True
                    break
        return out


def on_segments(starts_int, dirs_int, is_ray, pts_int):
    """Whether each point lies on some segment [s, s + d] (or ray s + R>=0 d).

    Directions must be nonzero.
    """
    e = len(starts_int)
    g = len(pts_int)
    if e == 0:
        return np.zeros(g, dtype=bool)
    span = max(_maxabs(starts_int), _maxabs(dirs_int), _maxabs(pts_int)) * 2 + 1
    bound = 4 * span * span
    starts, fast = _as_int(starts_int, bound)
    dirs, _ = _as_int(dirs_int, bound)
    pts, _ = _as_int(pts_int, bound)
    starts = starts.reshape(e, 2)
    dirs = dirs.reshape(e, 2)
    pts = pts.reshape(g, 2)
    flags = np.asarray(is_ray, dtype=np.bool_)
    if fast and _backend == "numba":
        return _on_segments_numba(starts, dirs, flags, pts)
    return _on_segments_numpy(starts, dirs, flags, pts)
