"""Exact scalars in Q(i) and power series in ``b`` known modulo ``b**N``.

Rationals are ``gmpy2.mpq`` when gmpy2 is importable and
``fractions.Fraction`` otherwise; both normalise to lowest terms with a
positive denominator.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InsufficientPrecision, NotAUnit, ParseError

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 ships with the environment
    Q = Fraction

_ZERO = Q(0)
_ONE = Q(1)
_RATIONAL_TYPES = (int, Fraction, type(_ZERO))


def _rat(x):
    if isinstance(x, str):
        x = Fraction(x.strip())
    return Q(x.numerator, x.denominator) if isinstance(x, Fraction) else Q(x)


def _fmt_rat(q):
    q = Fraction(int(q.numerator), int(q.denominator))
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + _rat(im)
        elif isinstance(re, complex):
            re, im = Fraction(re.real), Fraction(re.imag) + Fraction(im)
        object.__setattr__(self, "re", _rat(re))
        object.__setattr__(self, "im", _rat(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        return cls(x)

    @classmethod
    def parse(cls, text):
        """Parse ``"3"``, ``"-1/2"``, ``"2i"``, ``"(1/2+3/4i)"`` or ``"1/2-3/4i"``."""
        s = text.strip().replace(" ", "")
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        if not s:
            raise ParseError(f"empty scalar {text!r}")
        try:
            if s.endswith("i"):
                body = s[:-1]
                cut = max(body.rfind("+"), body.rfind("-"))
                real, imag = (body[:cut], body[cut:]) if cut > 0 else ("", body)
                if imag in ("", "+", "-"):
                    imag += "1"
                re_part, im_part = Fraction(real or 0), Fraction(imag)
            else:
                re_part, im_part = Fraction(s), Fraction(0)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed scalar {text!r}: {exc}") from None
        return cls(re_part, im_part)

    def __str__(self):
        if self.im == 0:
            return _fmt_rat(self.re)
        im = _fmt_rat(self.im)
        sign = "" if im.startswith("-") else "+"
        return f"({_fmt_rat(self.re)}{sign}{im}i)"

    def __repr__(self):
        return f"GaussianRational({self})"

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RATIONAL_TYPES):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(Fraction(int(self.re.numerator), int(self.re.denominator)))
        return hash((int(self.re.numerator), int(self.re.denominator),
                     int(self.im.numerator), int(self.im.denominator)))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __neg__(self):
        return _gr(-self.re, -self.im)

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, _RATIONAL_TYPES):
                return _gr(self.re + _rat(other), self.im)
            return NotImplemented
        return _gr(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, _RATIONAL_TYPES):
                return _gr(self.re - _rat(other), self.im)
            return NotImplemented
        return _gr(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, _RATIONAL_TYPES):
                r = _rat(other)
                return _gr(self.re * r, self.im * r)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if b == 0:
            return _gr(a * c, a * d)
        if d == 0:
            return _gr(a * c, b * c)
        return _gr(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self):
        a, b = self.re, self.im
        if b == 0:
            if a == 0:
                raise ZeroDivisionError("inverse of zero in Q(i)")
            return _gr(1 / a, _ZERO)
        n = a * a + b * b
        return _gr(a / n, -b / n)

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        return _gr(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self):
        return self.im == 0

    @property
    def is_integer(self):
        """True for rational integers (not merely Gaussian integers)."""
        return self.im == 0 and self.re.denominator == 1

    def to_int(self):
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return int(self.re)

    def to_complex(self):
        return complex(float(self.re), float(self.im))


def _gr(re, im):
    g = object.__new__(GaussianRational)
    object.__setattr__(g, "re", re)
    object.__setattr__(g, "im", im)
    return g


ZERO = _gr(_ZERO, _ZERO)
ONE = _gr(_ONE, _ZERO)
I = _gr(_ZERO, _ONE)


def gq(x=0, im=0):
    """Shorthand constructor accepting ints, Fractions, strings or GaussianRationals."""
    if im == 0:
        return GaussianRational.coerce(x)
    return GaussianRational.coerce(x) + GaussianRational(0, im)


def same_class(x, y):
    """``x - y`` is a rational integer."""
    return (x - y).is_integer


# -- truncated series ---------------------------------------------------------


class AtLeast(int):
    """Valuation sentinel: every stored coefficient vanishes, so val >= this."""

    def __repr__(self):
        return f"AtLeast({int(self)})"


class TruncSeries:
    """``sum(coeffs[k] * b**k)`` known modulo ``b**order``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        cs = [GaussianRational.coerce(c) for c in coeffs]
        if order is None:
            order = len(cs)
        if order < 1:
            raise ValueError("known order must be >= 1")
        if len(cs) < order:
            cs.extend([ZERO] * (order - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs[:order]))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    @classmethod
    def _make(cls, coeffs, order):
        s = object.__new__(cls)
        object.__setattr__(s, "coeffs", tuple(coeffs))
        object.__setattr__(s, "order", order)
        return s

    @classmethod
    def zero(cls, order):
        return cls._make((ZERO,) * order, order)

    @classmethod
    def constant(cls, c, order):
        return cls._make((GaussianRational.coerce(c),) + (ZERO,) * (order - 1), order)

    @classmethod
    def monomial(cls, c, k, order):
        """``c * b**k`` modulo ``b**order``."""
        cs = [ZERO] * order
        if k < order:
            cs[k] = GaussianRational.coerce(c)
        return cls._make(cs, order)

    def __getitem__(self, k):
        return self.coeffs[k] if k < self.order else None

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"TruncSeries({format_series(self)}, mod b^{self.order})"

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def agrees_with(self, other, order=None):
        """Coefficientwise equality up to ``order`` (default: common known order)."""
        n = min(self.order, other.order) if order is None else order
        if n > self.order or n > other.order:
            return False
        return self.coeffs[:n] == other.coeffs[:n]

    def is_zero(self):
        return not any(self.coeffs)

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot raise the known order by truncation")
        return TruncSeries._make(self.coeffs[:order], order)

    def extend(self, order):
        """Pad with zeros: only sound when the series is an exact polynomial."""
        if order <= self.order:
            return self.truncate(order)
        return TruncSeries._make(self.coeffs + (ZERO,) * (order - self.order), order)

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            return series_add(self, other)
        return series_add(self, TruncSeries.constant(other, self.order))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._make([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.constant(other, self.order)
        return series_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, other)
        c = GaussianRational.coerce(other)
        return TruncSeries._make([x * c for x in self.coeffs], self.order)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by ``b**k`` (k >= 0): the known order grows by k."""
        if k == 0:
            return self
        return TruncSeries._make((ZERO,) * k + self.coeffs, self.order + k)

    def divide_by_b(self, k):
        """Exact division by ``b**k``; the low coefficients must vanish."""
        if k == 0:
            return self
        if k >= self.order:
            raise ValueError("division consumes all known coefficients")
        if any(self.coeffs[:k]):
            raise ValueError(f"series not divisible by b^{k}")
        return TruncSeries._make(self.coeffs[k:], self.order - k)

    def valuation(self):
        return series_valuation(self)

    def derivative(self):
        return series_derivative(self)

    def inverse(self):
        return series_invert(self)

    def evaluate_leading(self):
        return self.coeffs[0]

    def polynomial_degree(self):
        for k in range(self.order - 1, -1, -1):
            if self.coeffs[k]:
                return k
        return -1


def series_add(S, T):
    n = min(S.order, T.order)
    a, b = S.coeffs, T.coeffs
    return TruncSeries._make([a[k] + b[k] for k in range(n)], n)


def series_mul(S, T):
    from .kernels import cauchy_product

    n = min(S.order, T.order)
    return TruncSeries._make(cauchy_product(S.coeffs, T.coeffs, n), n)


def series_invert(S):
    from .kernels import series_reciprocal

    if not S.coeffs[0]:
        raise NotAUnit("constant term vanishes")
    return TruncSeries._make(series_reciprocal(S.coeffs, S.order), S.order)


def series_derivative(S):
    if S.order < 2:
        raise InsufficientPrecision("derivative of a series known only mod b", needed=2)
    return TruncSeries._make([S.coeffs[k] * k for k in range(1, S.order)], S.order - 1)


def series_valuation(S):
    for k, c in enumerate(S.coeffs):
        if c:
            return k
    return AtLeast(S.order)


# -- series strings -----------------------------------------------------------


def format_series(S):
    """Canonical ``coeff*b^k`` sum; the known order is not part of the string."""
    out = []
    for k, c in enumerate(S.coeffs):
        if not c:
            continue
        neg = c.is_real and c.re < 0
        text = f"{-c if neg else c}*b^{k}"
        if out:
            out.append(f" - {text}" if neg else f" + {text}")
        else:
            out.append(f"-{text}" if neg else text)
    return "".join(out) if out else "0"


_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<coef>\([^()]*\)|\d+(?:/\d+)?i?|i)\s*(?:\*\s*)?)?"
    r"(?P<b>b(?:\s*\^\s*(?P<pow>\d+))?)?\s*"
)


def parse_series(text, order):
    """Parse the series-string grammar into a :class:`TruncSeries` mod ``b**order``.

    Terms beyond ``order`` are dropped; coefficients are exact.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty series string")
    coeffs = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos or (m.group("coef") is None and m.group("b") is None):
            raise ParseError(f"cannot parse series {text!r} at offset {pos}", 1, pos + 1)
        if not first and m.group("sign") is None:
            raise ParseError(f"missing operator in series {text!r} at offset {pos}", 1, pos + 1)
        first = False
        coef = GaussianRational.parse(m.group("coef")) if m.group("coef") else ONE
        if m.group("sign") == "-":
            coef = -coef
        if m.group("b") is None:
            k = 0
        else:
            k = int(m.group("pow")) if m.group("pow") else 1
        coeffs[k] = coeffs.get(k, ZERO) + coef
        pos = m.end()
    cs = [ZERO] * order
    for k, c in coeffs.items():
        if k < order:
            cs[k] = cs[k] + c
    return TruncSeries._make(cs, order)
