"""Compare the Cython and pure-Python valuation kernels.

Usage: python3 benchmarks/bench_kernels.py [--vars 8 12 16 20] [--formulas 20] [--repeat 3]

Each run compiles random formulas over ``k`` variables, conjoins each with its
own negation so satisfiability has to scan the whole table, and times
``is_sat`` and ``truth_table`` on both backends.  Results are checked to agree.
"""

from __future__ import annotations

import argparse
import random
import sys
import timeit

from pomsetsem import formula as fm
from pomsetsem._kernels import _pykernel

try:
    from pomsetsem._kernels import _ckernel
except ImportError:
    _ckernel = None


def random_formula(rng: random.Random, nvars: int, depth: int) -> fm.Formula:
    if depth == 0 or rng.random() < 0.2:
        return fm.Var(rng.randrange(nvars))
    roll = rng.random()
    if roll < 0.2:
        return fm.Not(random_formula(rng, nvars, depth - 1))
    left = random_formula(rng, nvars, depth - 1)
    right = random_formula(rng, nvars, depth - 1)
    return fm.And(left, right) if roll < 0.6 else fm.Or(left, right)


def workload(nvars: int, count: int, seed: int) -> list:
    rng = random.Random(seed)
    order = {j: j for j in range(nvars)}
    progs = []
    for _ in range(count):
        f = random_formula(rng, nvars, 6)
        unsat = fm.And(f, fm.Not(f))
        progs.append(fm.compile_program(unsat, order))
    return progs


def time_backend(kernel, progs, nvars, repeat) -> tuple:
    sat = min(timeit.repeat(lambda: [kernel.is_sat(p, nvars) for p in progs], number=1, repeat=repeat))
    table = min(timeit.repeat(lambda: [kernel.truth_table(p, nvars) for p in progs], number=1, repeat=repeat))
    return sat, table


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--vars", type=int, nargs="+", default=[8, 12, 16, 20])
    parser.add_argument("--formulas", type=int, default=20)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _ckernel is None:
        print("Cython kernel not built; run `pip install -e . --no-build-isolation` first")
        return 1

    print("%5s  %12s %12s %8s  %12s %12s %8s" % (
        "vars", "py is_sat", "cy is_sat", "speedup", "py table", "cy table", "speedup"))
    for k in args.vars:
        progs = workload(k, args.formulas, args.seed)
        for p in progs:
            assert _pykernel.is_sat(p, k) == _ckernel.is_sat(p, k)
            assert _pykernel.truth_table(p, k) == _ckernel.truth_table(p, k)
        py_sat, py_tab = time_backend(_pykernel, progs, k, args.repeat)
        cy_sat, cy_tab = time_backend(_ckernel, progs, k, args.repeat)
        print("%5d  %11.4fs %11.4fs %7.1fx  %11.4fs %11.4fs %7.1fx" % (
            k, py_sat, cy_sat, py_sat / cy_sat, py_tab, cy_tab, py_tab / cy_tab))
    return 0


if __name__ == "__main__":
    sys.exit(main())
