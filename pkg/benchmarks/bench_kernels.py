"""Compiled vs pure-Python kernel timings.

    python benchmarks/bench_kernels.py [--repeat 5] [--k-max 40]

Times the AIM recurrence at 256 bits and one outward+inward Numerov sweep,
checks both backends give the same numbers, and prints a speedup table.
"""

import argparse
import timeit

import gmpy2
import numpy as np

from gaussaim import kernels
from gaussaim._pykernels import _format
from gaussaim.aim import build_seed, evaluation_point
from gaussaim.models import AimConfig, PotentialModel


def aim_case(k_max, precision):
    pot = PotentialModel()
    seed = build_seed(pot, 0, AimConfig(precision_bits=precision))
    s0 = seed.s0(-341.9)
    lam = {e: _format(c) for e, c in seed.lambda0.terms.items()}
    s = {e: _format(c) for e, c in s0.terms.items()}
    x0 = _format(evaluation_point(0, 10, precision))
    return lambda mod: mod.aim_values(lam, s, k_max, x0, precision)


def numerov_case(h):
    r = np.arange(int(round(10 / h)) + 1) * h
    g = PotentialModel().potential(r) + 341.9
    mid = len(g) // 25  # near the ground-state turning point

    def run(mod):
        out = mod.numerov_outward(g, h, 1, 0.0, h, mid)
        inn = mod.numerov_inward(g, h, 1.0, float(np.exp(np.sqrt(g[-1]) * h)), mid)
        return out, inn
    return run


def best(fn, mod, repeat):
    return min(timeit.repeat(lambda: fn(mod), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--k-max", type=int, default=40)
    ap.add_argument("--precision", type=int, default=256)
    ap.add_argument("--h", type=float, default=1e-3)
    args = ap.parse_args()

    if kernels.compiled_kernels is None:
        raise SystemExit("compiled extension not importable; build it with pip install -e .")
    py, cx = kernels.python_kernels, kernels.compiled_kernels

    cases = [(f"aim_values k={args.k_max} {args.precision}-bit", aim_case(args.k_max, args.precision)),
             (f"numerov sweep h={args.h:g}", numerov_case(args.h))]
    print(f"{'kernel':<32} {'python [ms]':>12} {'compiled [ms]':>14} {'speedup':>8}")
    for name, fn in cases:
        a, b = fn(py), fn(cx)
        if name.startswith("aim"):
            prec = args.precision
            same = all(abs(gmpy2.mpfr(u, prec, 16) - gmpy2.mpfr(v, prec, 16))
                       <= gmpy2.mpfr(2) ** (30 - prec) * (1 + abs(gmpy2.mpfr(v, prec, 16)))
                       for u, v in zip(a[0] + a[1], b[0] + b[1]))
        else:
            same = all(np.allclose(x[:3], y[:3], rtol=1e-12) and x[3] == y[3] for x, y in zip(a, b))
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        tp, tc = best(fn, py, args.repeat), best(fn, cx, args.repeat)
        print(f"{name:<32} {1e3 * tp:12.2f} {1e3 * tc:14.2f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
