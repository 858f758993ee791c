"""Independent reference computations in sympy over Q(i)."""

from fractions import Fraction

import sympy as sp

from abmod.coefficients import GaussianRational, TruncSeries

b = sp.Symbol("b")
QQI = sp.QQ_I


def to_sym(c):
    return sp.Rational(int(c.re.numerator), int(c.re.denominator)) + sp.I * sp.Rational(
        int(c.im.numerator), int(c.im.denominator))


def from_sym(x):
    e = QQI.from_sympy(sp.expand(x))
    return GaussianRational(Fraction(int(e.x.numerator), int(e.x.denominator)),
                            Fraction(int(e.y.numerator), int(e.y.denominator)))


def poly(S):
    """Polynomial in b carrying the known coefficients of S."""
    return sp.Poly([to_sym(c) for c in reversed(S.coeffs)], b, domain=QQI)


def series(P, order):
    """Coefficients of the polynomial P mod b^order as a TruncSeries."""
    if not isinstance(P, sp.Poly):
        P = sp.Poly(sp.expand(P), b, domain=QQI)
    return TruncSeries([from_sym(P.coeff_monomial(b ** k)) for k in range(order)], order)


def matrix(M):
    """Sympy matrix of polynomial expressions for a series matrix."""
    return sp.Matrix([[poly(x).as_expr() for x in row] for row in M])


def truncate(expr, order):
    P = sp.Poly(sp.expand(expr), b, domain=QQI)
    return sum((P.coeff_monomial(b ** k) * b ** k for k in range(order)), sp.Integer(0))


def mat_truncate(A, order):
    return A.applyfunc(lambda x: truncate(x, order))
