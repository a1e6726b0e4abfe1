"""Time the numba and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Run once per backend after a warm-up call, so JIT compilation is excluded.
"""
import argparse
import random
import time

from galtrop import _kernels
from galtrop.catalog import brauer_severi_sextic
from galtrop.trop import trop_curve_2d


def workloads(rng: random.Random):
    pts = sorted({(rng.randint(0, 12), rng.randint(0, 12)) for _ in range(40)})
    hts = [rng.randint(-10**6, 10**6) + 997 * (x * x + y * y) for x, y in pts]
    exps = [list(p) for p in pts]
    grid = [[x, y] for x in range(-300, 301, 3) for y in range(-300, 301, 3)]
    cx = trop_curve_2d(brauer_severi_sextic())
    starts, dirs, rays = [], [], []
    for e in cx.edges:
        a, b = cx.vertices[e.ends[0]].coords, cx.vertices[e.ends[1]].coords
        starts.append([int(12 * x) for x in a])
        dirs.append([int(12 * (y - x)) for x, y in zip(a, b)])
        rays.append(False)
    for r in cx.rays:
        starts.append([int(12 * x) for x in cx.vertices[r.vertex].coords])
        dirs.append(list(r.direction))
        rays.append(True)
    return {
        "lower_facets": (_kernels.lower_facets, (exps, hts)),
        "argmin_counts": (_kernels.argmin_counts, (exps, hts, grid)),
        "on_segments": (_kernels.on_segments, (starts, dirs, rays, grid)),
    }


def best_time(fn, args, repeat: int) -> float:
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    jobs = workloads(random.Random(args.seed))
    print(f"{'kernel':<16}{'numba (ms)':>12}{'numpy (ms)':>12}{'speedup':>10}")
    for name, (fn, fargs) in jobs.items():
        with _kernels.use_backend("numba"):
            fast = best_time(fn, fargs, args.repeat)
        with _kernels.use_backend("numpy"):
            slow = best_time(fn, fargs, args.repeat)
        print(f"{name:<16}{fast * 1e3:>12.2f}{slow * 1e3:>12.2f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
