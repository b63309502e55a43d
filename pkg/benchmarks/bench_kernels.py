"""Compare the compiled kernel lane against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5]

Times the three kernel entry points on representative problem sizes and
prints per-call medians for both lanes plus the speedup ratio.
"""

import argparse
import timeit

import numpy as np

from panelcd.kernels import numpy_impl

try:
    from panelcd.kernels import _fast
except ImportError:
    _fast = None


def bench(label, fn_fast, fn_pure, args, repeat, number):
    pure = min(timeit.repeat(lambda: fn_pure(*args), repeat=repeat, number=number))
    line = f"{label:<44s} pure={pure / number * 1e3:8.3f} ms"
    if fn_fast is not None:
        fast = min(
            timeit.repeat(lambda: fn_fast(*args), repeat=repeat, number=number)
        )
        line += (
            f"  compiled={fast / number * 1e3:8.3f} ms"
            f"  speedup={pure / fast:5.2f}x"
        )
    print(line)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)

    if _fast is None:
        print("compiled extension not available; timing the fallback only")

    for n in (50, 100, 200, 500):
        corr = np.corrcoef(rng.standard_normal((n, 2 * n)))
        bench(
            f"trace_powers n={n}",
            _fast.trace_powers if _fast else None,
            numpy_impl.trace_powers,
            (corr,),
            args.repeat,
            20,
        )
        bench(
            f"offdiag_sums n={n}",
            _fast.offdiag_sums if _fast else None,
            numpy_impl.offdiag_sums,
            (corr,),
            args.repeat,
            20,
        )

    for n, k, T in ((50, 2, 100), (100, 2, 100), (100, 4, 100), (200, 2, 50)):
        designs = rng.standard_normal((n, k, T))
        grams = np.einsum("rat,rbt->rab", designs, designs)
        inv = np.linalg.inv(grams)
        bench(
            f"pair_projector_traces n={n} k={k} T={T}",
            _fast.pair_projector_traces if _fast else None,
            numpy_impl.pair_projector_traces,
            (designs, inv),
            args.repeat,
            3,
        )


if __name__ == "__main__":
    main()
