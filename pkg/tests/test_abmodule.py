import random

import pytest
import sympy as sp
from corpus import corpus, random_unit_matrix
from hypothesis import given
from hypothesis import strategies as st
from oracle import b, from_sym, mat_truncate, matrix, poly, to_sym

from abmod import (
    DirectSum,
    E,
    Ealpha,
    Elog,
    Epair,
    F,
    J,
    Rank3Example,
    apply_a,
    change_basis,
    construct_standard,
    direct_sum,
    dual,
    is_simple_pole,
    make_module,
    quotient_by_line,
    saturate,
    spectrum,
    submodule_module,
    twist,
)
from abmod import linalg as la
from abmod.abmodule import b_times
from abmod.coefficients import ONE, ZERO, TruncSeries, gq
from abmod.errors import (
    BadParameter,
    NonSplitSpectrum,
    NotEigen,
    NotInvertible,
    NotPrimitive,
    NotSimplePole,
    ShapeMismatch,
)

N = 10
half = gq(1) / 2


def unit(p, i, n=N):
    return [TruncSeries.constant(ONE if j == i else ZERO, n) for j in range(p)]


def random_vector(rng, p, n=N):
    return [TruncSeries([gq(rng.randint(-3, 3), rng.randint(-1, 1)) for _ in range(4)], n) for _ in range(p)]


def sym_vec(x):
    return sp.Matrix([poly(s).as_expr() for s in x])


# -- constructors ------------------------------------------------------------------------


def test_make_module():
    lam = gq(3) / 4
    assert make_module([[TruncSeries.monomial(lam, 1, N)]], N).matrix == E(lam, N=N).matrix
    assert make_module([[0]], 5).matrix == E(0, N=5).matrix
    with pytest.raises(ShapeMismatch):
        make_module([[0, 0]], 5)


def test_family_relations():
    lam, n = gq(2) / 3, 2
    M = Elog(lam, n, N=N)
    # a.x = (lam+n) b x + b^(n+1) y, a.y = lam b y
    assert apply_a(M, unit(2, 0)) == [TruncSeries.monomial(lam + n, 1, N), TruncSeries.monomial(ONE, n + 1, N)]
    assert apply_a(M, unit(2, 1)) == [TruncSeries.zero(N), TruncSeries.monomial(lam, 1, N)]
    Jm = J(3, lam, N=N)
    assert apply_a(Jm, unit(3, 0)) == [TruncSeries.monomial(lam, 1, N), TruncSeries.constant(ONE, N),
                                      TruncSeries.zero(N)]
    Fm = F(3, 0, half, N=N)
    assert apply_a(Fm, unit(3, 2)) == [TruncSeries.monomial(gq(1) / 8, 3, N), TruncSeries.zero(N),
                                      TruncSeries.monomial(gq(2), 1, N)]
    Pm = Epair(3, half, N=N)
    assert apply_a(Pm, unit(2, 1)) == [TruncSeries.constant(ONE, N), TruncSeries.monomial(gq(2), 1, N)]
    assert construct_standard("Ealpha", 3, 2, 5, N=N).matrix == Ealpha(3, 2, 5, N=N).matrix


@pytest.mark.parametrize("family,params", [
    ("Ealpha", (1, 0, 1)), ("Ealpha", (1, 1, 0)), ("J", (0, 1)), ("F", (3, 0, 0)), ("Elog", (0, -1)),
    ("Nope", ()),
])
def test_bad_parameters(family, params):
    with pytest.raises(BadParameter):
        construct_standard(family, *params, N=N)


# -- the a-action ----------------------------------------------------------------------------


def test_apply_a_examples():
    lam = gq(5) / 2
    assert apply_a(E(lam, N=N), unit(1, 0)) == [TruncSeries.monomial(lam, 1, N)]
    be = [TruncSeries.monomial(ONE, 1, N)]
    assert apply_a(E(lam, N=N), be) == [TruncSeries.monomial(lam + 1, 2, N)]
    R = Rank3Example(N=N)
    assert apply_a(R, unit(3, 0)) == unit(3, 1)


@given(st.integers(0, 9), st.integers(0, 10 ** 6))
def test_apply_a_matches_oracle(idx, seed):
    M = corpus(N)[idx]
    x = random_vector(random.Random(seed), M.rank)
    expected = matrix(M.matrix).T * sym_vec(x) + b ** 2 * sym_vec(x).diff(b)
    got = apply_a(M, x)
    for g, e in zip(got, expected):
        assert [to_sym(c) for c in g.coeffs] == [sp.expand(e).coeff(b, k) for k in range(g.order)]


@given(st.integers(0, 9), st.integers(0, 10 ** 6))
def test_commutation_relation(idx, seed):
    M = corpus(N)[idx]
    x = random_vector(random.Random(seed), M.rank)
    lhs = [u - v for u, v in zip(apply_a(M, b_times(x)), b_times(apply_a(M, x)))]
    rhs = b_times(x, 2)
    assert all(u.agrees_with(v, N) for u, v in zip(lhs, rhs))


# -- base change -----------------------------------------------------------------------------


def test_change_basis_examples():
    M = Epair(2, half, N=N)
    assert change_basis(M, la.smat_identity(2, N)).matrix == M.matrix
    assert change_basis(M, la.smat_scale(la.smat_identity(2, N), gq(3))).matrix == M.matrix
    lam, a1 = gq(1) / 3, gq(2)
    Mf = change_basis(E(lam, N=N), [[TruncSeries([ONE, a1], N)]])
    expected = TruncSeries.monomial(lam, 1, N) + TruncSeries.monomial(a1, 2, N) * TruncSeries([ONE, a1], N).inverse()
    assert Mf.matrix[0][0] == expected
    with pytest.raises(NotInvertible):
        change_basis(M, [[TruncSeries.monomial(ONE, 1, N), TruncSeries.zero(N)],
                         [TruncSeries.zero(N), TruncSeries.constant(ONE, N)]])


@given(st.integers(0, 9), st.integers(0, 10 ** 6))
def test_change_basis_matches_oracle(idx, seed):
    M = corpus(N)[idx]
    Q = random_unit_matrix(random.Random(seed), M.rank, N)
    Mf = change_basis(M, Q)
    # oracle without inversion: M_f Q = Q M + b^2 Q'
    Qs = matrix(Q)
    lhs = mat_truncate(matrix(Mf.matrix) * Qs, N)
    rhs = mat_truncate(Qs * matrix(M.matrix) + b ** 2 * Qs.diff(b), N)
    assert (lhs - rhs).applyfunc(sp.expand) == sp.zeros(M.rank, M.rank)
    back = change_basis(Mf, la.smat_inverse(Q))
    assert la.smat_equal(back.matrix, M.matrix, N)


# -- dual, twist, sums -------------------------------------------------------------------------


def test_dual_examples():
    assert dual(E(half, N=N)).matrix == E(-half, N=N).matrix
    for M in corpus(N):
        assert dual(dual(M)).matrix == M.matrix


def test_twist_examples():
    mu, lam = gq(1) / 3, gq(-2)
    assert twist(E(mu, N=N), lam).matrix == E(lam + mu, N=N).matrix
    M = Epair(2, 0, N=N)
    assert twist(M, 0).matrix == M.matrix
    assert dual(twist(M, lam)).matrix == twist(dual(M), -lam).matrix


def test_direct_sum_examples():
    S = direct_sum(E(half, N=N), E(3, N=N))
    assert S.rank == 2 and S.matrix[1][1] == TruncSeries.monomial(gq(3), 1, N)
    assert S.matrix[0][1].is_zero()
    assert direct_sum(Epair(1, 2, N=N), Rank3Example(N=N)).rank == 5
    assert spectrum(direct_sum(E(0, N=N), E(1, N=N))) == [0, 1]
    assert dual(direct_sum(Epair(1, 2, N=N), E(half, N=N))).matrix == \
        direct_sum(dual(Epair(1, 2, N=N)), dual(E(half, N=N))).matrix


def test_simple_pole():
    assert is_simple_pole(E(3, N=N))
    assert not is_simple_pole(Rank3Example(N=N))
    assert not is_simple_pole(Epair(2, 5, N=N))
    for M in corpus(N):
        assert is_simple_pole(dual(M)) == is_simple_pole(M)


# -- spectrum --------------------------------------------------------------------------------


def test_spectrum_examples():
    lam = gq(1) / 3
    assert spectrum(Elog(lam, 2, N=N)) == [lam, lam + 2]
    assert spectrum(E(lam, N=N)) == [lam]
    with pytest.raises(NotSimplePole):
        spectrum(Rank3Example(N=N))
    with pytest.raises(NonSplitSpectrum):
        # b^-1 a has characteristic polynomial x^2 - 2
        spectrum(make_module([[0, "b"], ["2*b", 0]], 4))


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=3),
       st.integers(0, 10 ** 6))
def test_spectrum_matches_sympy(eigs, seed):
    # conjugate a triangular matrix with known diagonal by a random unimodular constant matrix
    vals = [gq(a, c) / d for a, c, d in eigs]
    p = len(vals)
    rng = random.Random(seed)
    T = [[vals[i] if i == j else (gq(rng.randint(-2, 2)) if j > i else ZERO) for j in range(p)] for i in range(p)]
    Q = random_unit_matrix(rng, p, 1, degree=1)
    Q0 = [[s.coeffs[0] for s in row] for row in Q]
    C = la.mat_mul(la.mat_mul(Q0, T), la.inverse(Q0))
    M = make_module([[TruncSeries.monomial(c, 1, 4) for c in row] for row in C], 4)
    oracle = sp.Matrix([[to_sym(c) for c in row] for row in C]).eigenvals()
    expected = sorted((from_sym(v) for v, m in oracle.items() for _ in range(m)), key=lambda z: (z.re, z.im))
    assert spectrum(M).as_list() == expected
    assert spectrum(dual(M)) == [-v for v in expected]
    assert spectrum(twist(M, half)) == [v + half for v in expected]


# -- quotients and submodules ------------------------------------------------------------------


def test_quotient_examples():
    lam, mu = gq(3), half
    Q = quotient_by_line(Epair(lam, mu, N=N), unit(2, 0), mu)
    assert Q.matrix[0][0] == TruncSeries.monomial(lam - 1, 1, Q.known_order)
    Q = quotient_by_line(J(3, mu, N=N), unit(3, 2))
    assert Q.matrix == J(2, mu, N=Q.known_order).matrix
    Q = quotient_by_line(direct_sum(E(lam, N=N), E(mu, N=N)), unit(2, 0))
    assert Q.matrix == E(mu, N=Q.known_order).matrix


def test_quotient_errors():
    M = Epair(3, half, N=N)
    with pytest.raises(NotPrimitive):
        quotient_by_line(M, [TruncSeries.monomial(ONE, 1, N), TruncSeries.zero(N)])
    with pytest.raises(NotEigen):
        quotient_by_line(M, unit(2, 1), 0)


def test_submodule_module():
    R = Rank3Example(N=N)
    Es = saturate(R).module
    assert is_simple_pole(Es)
    assert spectrum(Es) == [-1, -1, 0]
    from abmod.lattice import Lattice

    assert submodule_module(R, Lattice.standard(3, N)).matrix == R.matrix
