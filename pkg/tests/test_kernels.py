import os
import subprocess
import sys

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from oracle import to_sym

from abmod import _kernels_py as pyk
from abmod.coefficients import ZERO, gq

try:
    from abmod import _ckernels as ck
except ImportError:
    ck = None

scalars = st.builds(lambda p, q, r: gq(p, r) / q, st.integers(-6, 6), st.integers(1, 4), st.integers(-2, 2))


def sparse_rows(draw_rows, ncols):
    return [{c: v for c, v in enumerate(row) if v} for row in draw_rows]


matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.one_of(st.just(ZERO), scalars), min_size=n, max_size=n), min_size=1, max_size=6))


@settings(max_examples=40)
@given(matrices)
def test_nullspace_against_sympy(rows):
    ncols = len(rows[0])
    ker = pyk.nullspace(sparse_rows(rows, ncols), ncols)
    A = sp.Matrix([[to_sym(x) for x in row] for row in rows])
    assert len(ker) == ncols - A.rank()
    for v in ker:
        x = sp.Matrix([to_sym(v.get(c, ZERO)) for c in range(ncols)])
        assert (A * x).applyfunc(sp.expand) == sp.zeros(len(rows), 1)


@settings(max_examples=40)
@given(st.lists(scalars, min_size=4, max_size=4), st.lists(scalars, min_size=4, max_size=4))
def test_series_kernels_against_sympy(a, c):
    b = sp.Symbol("b")
    pa = sum(to_sym(x) * b ** i for i, x in enumerate(a))
    pc = sum(to_sym(x) * b ** i for i, x in enumerate(c))
    prod = sp.Poly(sp.expand(pa * pc), b)
    got = pyk.cauchy_product(a, c, 4)
    assert [to_sym(x) for x in got] == [sp.expand(prod.coeff_monomial(b ** i)) for i in range(4)]
    if a[0]:
        inv = pyk.series_reciprocal(a, 4)
        check = pyk.cauchy_product(a, inv, 4)
        assert [to_sym(x) for x in check] == [1, 0, 0, 0]


@pytest.mark.skipif(ck is None, reason="compiled kernels not built")
@settings(max_examples=40)
@given(matrices, st.lists(scalars, min_size=5, max_size=5), st.lists(scalars, min_size=5, max_size=5))
def test_backends_agree(rows, a, c):
    ncols = len(rows[0])
    srows = sparse_rows(rows, ncols)
    assert ck.rref(srows, ncols) == pyk.rref(srows, ncols)
    assert ck.nullspace(srows, ncols) == pyk.nullspace(srows, ncols)
    assert ck.cauchy_product(a, c, 5) == pyk.cauchy_product(a, c, 5)
    if a[0]:
        assert ck.series_reciprocal(a, 5) == pyk.series_reciprocal(a, 5)


def backend_with(env):
    code = "from abmod import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={**os.environ, **env},
                         capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_pure_python_switch():
    assert backend_with({"ABMOD_PURE_PYTHON": "1"}) == "python"
    assert backend_with({"ABMOD_PURE_PYTHON": "0"}) == ("cython" if ck is not None else "python")
