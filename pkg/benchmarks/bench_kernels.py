"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends are timed on the same inputs and checked for bit-identical
output before any timing is reported.
"""

import argparse
import timeit

import numpy as np

from permsaddle import _backend, _rng

CASES = [
    ("mc_statistics N=15, 200k", "mc_statistics", 15, 200_000),
    ("mc_statistics N=50, 100k", "mc_statistics", 50, 100_000),
    ("all_statistics N=8", "all_statistics", 8, None),
    ("all_statistics N=10", "all_statistics", 10, None),
]


def call(kern, fn, n, count):
    a = np.arange(1.0, n + 1)
    if fn == "mc_statistics":
        return kern.mc_statistics(a, a, _rng.derive_key(1), 0, count)
    return kern.all_statistics(a, a)


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = _backend.available_backends()
    if len(backends) < 2:
        print("compiled extension not built; timing the Python fallback only")
    names = sorted(backends)
    print(f"{'case':<28}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn, n, count in CASES:
        outs = [call(backends[b], fn, n, count) for b in names]
        assert all(np.array_equal(o, outs[0]) for o in outs[1:]), f"{label}: backends disagree"
        times = [min(timeit.repeat(lambda b=b: call(backends[b], fn, n, count), number=1, repeat=args.repeat)) for b in names]
        row = f"{label:<28}" + "".join(f"{t:>11.4f}s" for t in times)
        if len(names) > 1:
            row += f"{times[names.index('python')] / times[names.index('cython')]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
