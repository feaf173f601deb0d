"""Compare the compiled and pure-Python kernels.

Run with ``python3 benchmarks/bench_kernels.py``. Each kernel is timed with
``timeit`` on the basilica tables and on the level-n Schreier graph, and the
outputs of both backends are checked to agree before any timing is reported.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from selfsim import kernels
from selfsim.examples import build


def bench(label: str, fn, repeat: int) -> float:
    best = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"  {label:<8} {best * 1e3:10.3f} ms")
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--levels", type=int, nargs="+", default=[8, 10, 12, 14])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled kernels not built; timing the fallback only")
    a = build("basilica").automaton

    for n in args.levels:
        print(f"level_tables, basilica, n={n}")
        results = {b: kernels.level_tables(a.sigma, a.tau, n, backend=b) for b in backends}
        perm, _ = results["python"]
        for b in backends[1:]:
            assert all(np.array_equal(x, y) for x, y in zip(results[b], results["python"]))
        times = {b: bench(b, lambda b=b: kernels.level_tables(a.sigma, a.tau, n, backend=b), args.repeat)
                 for b in backends}

        src = np.repeat(np.arange(perm.shape[1], dtype=np.int64), perm.shape[0])
        dst = perm.T.reshape(-1).astype(np.int64)
        print(f"components, {perm.shape[1]} vertices, {len(src)} edges")
        labels = {b: kernels.components(perm.shape[1], src, dst, backend=b) for b in backends}
        for b in backends[1:]:
            assert np.array_equal(labels[b], labels["python"])
        ctimes = {b: bench(b, lambda b=b: kernels.components(perm.shape[1], src, dst, backend=b), args.repeat)
                  for b in backends}
        if "cython" in times:
            print(f"  speedup  level_tables x{times['python'] / times['cython']:.1f}, "
                  f"components x{ctimes['python'] / ctimes['cython']:.1f}")


if __name__ == "__main__":
    main()
