"""Compare the compiled and pure-Python integer kernels.

    python benchmarks/bench_rref.py [--repeat 5]

Times row reduction and matrix products on their own, then a full
filtration, each through the dispatcher with one backend swapped in. An
int64 overflow in the extension falls back to Python there, and that cost
is included, as it would be in real use.
"""
import argparse
import random
import timeit

from hoinv import kernels
from hoinv.invariants import ActionSpec, invariants_filtration

try:
    from hoinv import _rref_ext
except ImportError:
    _rref_ext = None


def jordan(m):
    return [[int(i == j or j == i + 1) for j in range(m)] for i in range(m)]


def dense(rng, rows, cols, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def workloads(rng):
    small = dense(rng, 12, 12, 3)
    yield "rref  dense 12x12", lambda: kernels.rref_int(small, 12)
    wide = dense(rng, 30, 12, 3)
    yield "rref  dense 30x12", lambda: kernels.rref_int(wide, 12)
    sparse = [[rng.choice([0] * 30 + [1, -1]) for _ in range(200)] for _ in range(200)]
    yield "rref  sparse 200x200 (int64 overflow)", lambda: kernels.rref_int(sparse, 200)
    j = jordan(80)
    yield "matmul jordan 80", lambda: kernels.matmul_int(j, j, 80)


def with_backend(ext, fn):
    saved = kernels._ext
    kernels._ext = ext
    try:
        return fn()
    finally:
        kernels._ext = saved


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _rref_ext is None:
        print("compiled extension not built; only the Python backend is available")
    rows = []
    for name, job in workloads(random.Random(1)):
        py = best(lambda: with_backend(None, job), args.repeat)
        ext = best(lambda: with_backend(_rref_ext, job), args.repeat) if _rref_ext else float("nan")
        rows.append((name, py, ext))
    for m in (50,):
        a = ActionSpec.build({"t": jordan(m)})
        job = lambda: invariants_filtration(a, 60)
        py = best(lambda: with_backend(None, job), args.repeat)
        ext = best(lambda: with_backend(_rref_ext, job), args.repeat) if _rref_ext else float("nan")
        rows.append((f"filtration jordan d={m}, Q=60", py, ext))
    for m in (30, 60):
        a = ActionSpec.build({"t": jordan(m), "u": [[int(i == j) + int(j == i + 2) for j in range(m)] for i in range(m)]})
        job = lambda: invariants_filtration(a, m)
        py = best(lambda: with_backend(None, job), args.repeat)
        ext = best(lambda: with_backend(_rref_ext, job), args.repeat) if _rref_ext else float("nan")
        rows.append((f"filtration 2 gens, d={m}", py, ext))
    print(f"{'workload':40} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    for name, py, ext in rows:
        print(f"{name:40} {py * 1e3:12.2f} {ext * 1e3:12.2f} {py / ext:8.1f}x")


if __name__ == "__main__":
    main()
