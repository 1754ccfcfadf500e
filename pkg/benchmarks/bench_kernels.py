"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--atoms 200]

Prints one line per kernel with the best-of-repeat wall time for each
backend and the speed-up. Without a compiled extension only the fallback
is timed.
"""

import argparse
import timeit

import numpy as np

from spincat import dynamics as dy
from spincat import kernels


def cases(n_atoms):
    diag, lo, up = dy.diagonal_coefficients(n_atoms, 1.0, 0)
    y0 = np.zeros((1, n_atoms + 1))
    y0[0, 0] = y0[0, -1] = 0.5
    t_out = np.linspace(0.0, 2.0 / n_atoms, 11)
    x = np.cos(np.linspace(0.01, np.pi - 0.01, 400))
    coeffs = np.random.default_rng(0).normal(size=n_atoms + 1)
    j = n_atoms / 2
    return {
        "dopri_tridiag": lambda mod: mod.dopri_tridiag(
            diag, lo, up, y0, 0.0, t_out, 1e-10, 1e-12, 1e-4, 10**7),
        "threej_recursion": lambda mod: mod.threej_recursion(j, j, j - 1.0, -j, 0.0),
        "legendre_table": lambda mod: mod.legendre_table(3, n_atoms, x),
        "legendre_sum": lambda mod: mod.legendre_sum(coeffs, 0, x),
    }


def best_time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10**5:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--atoms", type=int, default=200)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    print(f"N = {args.atoms}, backends: {', '.join(backends)}")
    print(f"{'kernel':<18}" + "".join(f"{b:>14}" for b in backends) + ("   speed-up" if len(backends) > 1 else ""))
    for name, call in cases(args.atoms).items():
        times = [best_time(lambda mod=kernels.backend_module(b): call(mod), args.repeat) for b in backends]
        line = f"{name:<18}" + "".join(f"{t * 1e3:>11.3f} ms" for t in times)
        if len(times) > 1:
            line += f"   {times[0] / times[1]:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
