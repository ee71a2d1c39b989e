"""Both valuation kernels against a direct evaluation of every valuation."""

import os
import random
import subprocess
import sys

import pytest

from pomsetsem import _kernels, formula as fm
from pomsetsem._kernels import _pykernel

try:
    from pomsetsem._kernels import _ckernel
except ImportError:
    _ckernel = None

BACKENDS = [pytest.param(_pykernel, id="python")]
if _ckernel is not None:
    BACKENDS.append(pytest.param(_ckernel, id="cython"))


def random_formula(rng, nvars, depth):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.05:
            return fm.TRUE
        if r < 0.1:
            return fm.FALSE
        return fm.Var(rng.randrange(nvars))
    r = rng.random()
    if r < 0.25:
        return fm.Not(random_formula(rng, nvars, depth - 1))
    a, b = random_formula(rng, nvars, depth - 1), random_formula(rng, nvars, depth - 1)
    return fm.And(a, b) if r < 0.6 else fm.Or(a, b)


def table_by_hand(f, nvars):
    out = 0
    for i in range(1 << nvars):
        val = {j: bool((i >> j) & 1) for j in range(nvars)}
        if fm.evaluate(f, val):
            out |= 1 << i
    return out


@pytest.mark.parametrize("kernel", BACKENDS)
@pytest.mark.parametrize("nvars", [0, 1, 3, 6, 7, 9])
def test_truth_table_matches_direct_evaluation(kernel, nvars):
    rng = random.Random(nvars)
    order = {j: j for j in range(nvars)}
    for _ in range(60):
        f = random_formula(rng, max(nvars, 1), 5) if nvars else rng.choice([fm.TRUE, fm.FALSE])
        if fm.free_vars(f) - set(range(nvars)):
            continue
        prog = fm.compile_program(f, order)
        want = table_by_hand(f, nvars)
        assert kernel.truth_table(prog, nvars) == want
        assert kernel.is_sat(prog, nvars) == bool(want)


@pytest.mark.skipif(_ckernel is None, reason="compiled kernel not built")
def test_backends_agree_on_wide_formulas():
    rng = random.Random(1)
    for nvars in (15, 16, 17):
        order = {j: j for j in range(nvars)}
        for _ in range(10):
            f = random_formula(rng, nvars, 7)
            for g in (f, fm.And(f, fm.Not(f))):
                prog = fm.compile_program(g, order)
                assert _ckernel.truth_table(prog, nvars) == _pykernel.truth_table(prog, nvars)
                assert _ckernel.is_sat(prog, nvars) == _pykernel.is_sat(prog, nvars)


@pytest.mark.parametrize("kernel", BACKENDS)
def test_malformed_program_rejected(kernel):
    with pytest.raises(ValueError):
        kernel.truth_table([_pykernel.OP_AND], 1)


def test_backend_is_reported():
    assert _kernels.BACKEND in ("cython", "python")
    if _ckernel is not None:
        assert _kernels.BACKEND == "cython"


def test_environment_forces_python_backend():
    env = dict(os.environ, POMSETSEM_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import pomsetsem._kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_only_the_last_valuation_satisfies():
    # the single satisfying valuation is the last one scanned
    for nvars in (5, 10, 17):
        everything = fm.conj(*(fm.Var(j) for j in range(nvars)), fm.Or(fm.Var(0), fm.FALSE))
        order = {j: j for j in range(nvars)}
        prog = fm.compile_program(everything, order)
        for kernel in (_pykernel, _ckernel):
            if kernel is None:
                continue
            assert kernel.is_sat(prog, nvars)
            assert kernel.truth_table(prog, nvars) == 1 << ((1 << nvars) - 1)
