"""Exact linear algebra over Q(i) and over truncated series matrices.

Scalar matrices are lists of rows of :class:`GaussianRational`; series
matrices are lists of rows of :class:`TruncSeries`.
"""

from __future__ import annotations

from math import lcm

import mpmath

from .coefficients import ONE, ZERO, GaussianRational, TruncSeries, gq
from .errors import NonSplitSpectrum, NotInvertible
from .kernels import nullspace, rref

# -- scalar matrices ------------------------------------------------------------


def zeros(n, m):
    return [[ZERO] * m for _ in range(n)]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(m):
            acc = ZERO
            for k, x in enumerate(row):
                if x:
                    y = B[k][j]
                    if y:
                        acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def mat_add(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    c = gq(c)
    return [[x * c for x in row] for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def mat_vec(A, v):
    return [sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in A]


def _sparse(rows):
    return [{j: x for j, x in enumerate(row) if x} for row in rows]


def rank(A):
    if not A:
        return 0
    basis, _ = rref(_sparse(A), len(A[0]))
    return len(basis)


def kernel(A, ncols=None):
    """Basis of the right kernel ``{x : A x = 0}`` as dense vectors."""
    n = len(A[0]) if A else ncols
    vecs = nullspace(_sparse(A), n)
    return [[v.get(j, ZERO) for j in range(n)] for v in vecs]


def row_space_basis(vectors):
    """Reduced echelon basis of the span of ``vectors``."""
    if not vectors:
        return []
    n = len(vectors[0])
    basis, pivots = rref(_sparse(vectors), n)
    return [[basis[c].get(j, ZERO) for j in range(n)] for c in pivots]


def solve(A, b):
    """One solution of ``A x = b`` or ``None`` when inconsistent."""
    n = len(A[0])
    rows = []
    for row, bi in zip(A, b):
        r = {j: x for j, x in enumerate(row) if x}
        if bi:
            r[n] = bi
        rows.append(r)
    basis, pivots = rref(rows, n + 1)
    if n in basis:
        return None
    x = [ZERO] * n
    for c in pivots:
        x[c] = basis[c].get(n, ZERO)
    return x


def det(A):
    n = len(A)
    M = [list(row) for row in A]
    d = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        p = M[c][c]
        d = d * p
        inv = p.inverse()
        for r in range(c + 1, n):
            f = M[r][c]
            if f:
                f = f * inv
                rowc = M[c]
                M[r] = [x - f * y if y else x for x, y in zip(M[r], rowc)]
    return d


def inverse(A):
    n = len(A)
    rows = [{**{j: x for j, x in enumerate(row) if x}, n + i: ONE} for i, row in enumerate(A)]
    basis, pivots = rref(rows, 2 * n)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("singular matrix")
    return [[basis[i].get(n + j, ZERO) for j in range(n)] for i in range(n)]


def trace(A):
    return sum((A[i][i] for i in range(len(A))), ZERO)


# -- polynomials (coefficient lists, lowest degree first) -----------------------


def poly_trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_eval(p, x):
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_divmod(p, d):
    p, d = poly_trim(p), poly_trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(d):
        return [], p
    q = [ZERO] * (len(p) - len(d) + 1)
    inv = d[-1].inverse()
    for k in range(len(q) - 1, -1, -1):
        f = p[k + len(d) - 1] * inv
        if f:
            q[k] = f
            for i, c in enumerate(d):
                p[k + i] = p[k + i] - f * c
    return poly_trim(q), poly_trim(p[: len(d) - 1])


def poly_gcd(a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a]


def poly_derivative(p):
    return [c * k for k, c in enumerate(p)][1:]


def charpoly(A):
    """Monic characteristic polynomial ``det(x I - A)`` (Faddeev-LeVerrier)."""
    n = len(A)
    coeffs = [ZERO] * n + [ONE]
    Mk = zeros(n, n)
    c = ONE
    for k in range(1, n + 1):
        Mk = mat_mul(A, Mk)
        for i in range(n):
            Mk[i][i] = Mk[i][i] + c
        AM = mat_mul(A, Mk)
        c = -trace(AM) / k
        coeffs[n - k] = c
    return coeffs


def _to_mpc(c):
    re = mpmath.mpf(int(c.re.numerator)) / int(c.re.denominator)
    im = mpmath.mpf(int(c.im.numerator)) / int(c.im.denominator)
    return mpmath.mpc(re, im)


def _gaussian_round(z):
    return GaussianRational(int(mpmath.nint(z.real)), int(mpmath.nint(z.imag)))


def _simple_roots(g):
    """Roots in Q(i) of a squarefree polynomial; raises when one is missing."""
    deg = len(g) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [-g[0] / g[1]]
    den = 1
    for c in g:
        den = lcm(den, int(c.re.denominator), int(c.im.denominator))
    G = [c * den for c in g]
    lead = G[-1]
    roots = []
    for dps in (60, 200):
        with mpmath.workdps(dps):
            coeffs = [_to_mpc(c) for c in reversed(G)]
            try:
                approx = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
            except mpmath.libmp.NoConvergence:
                continue
            lead_c = _to_mpc(lead)
            roots = []
            for z in approx:
                # lead * root is an algebraic integer of Q(i), hence in Z[i]
                cand = _gaussian_round(lead_c * z) / lead
                if poly_eval(G, cand):
                    break
                if cand not in roots:
                    roots.append(cand)
            if len(roots) == deg:
                return roots
    raise NonSplitSpectrum("characteristic polynomial does not split over Q(i)")


def poly_roots(p):
    """Multiset of roots in Q(i), as ``[(root, multiplicity), ...]``."""
    p = poly_trim(p)
    if len(p) <= 1:
        return []
    g = poly_gcd(p, poly_derivative(p))
    squarefree, _ = poly_divmod(p, g) if len(g) > 1 else (p, None)
    squarefree = poly_trim(squarefree)
    out = []
    for r in _simple_roots(squarefree):
        m, q = 0, p
        while True:
            quo, rem = poly_divmod(q, [-r, ONE])
            if rem:
                break
            m, q = m + 1, quo
        out.append((r, m))
    return out


# -- series matrices ------------------------------------------------------------


def smat_order(A):
    return min(x.order for row in A for x in row)


def smat_identity(n, order):
    return [[TruncSeries.constant(ONE if i == j else ZERO, order) for j in range(n)] for i in range(n)]


def smat_zero(n, m, order):
    return [[TruncSeries.zero(order) for _ in range(m)] for _ in range(n)]


def smat_mul(A, B):
    m = len(B[0])
    order = min(smat_order(A), smat_order(B))
    out = []
    for row in A:
        new = []
        for j in range(m):
            acc = TruncSeries.zero(order)
            for k, x in enumerate(row):
                y = B[k][j]
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
                elif x.order < acc.order or y.order < acc.order:
                    acc = acc.truncate(min(x.order, y.order, acc.order))
            new.append(acc)
        out.append(new)
    return out


def smat_add(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def smat_sub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def smat_scale(A, c):
    return [[x * c for x in row] for row in A]


def smat_transpose(A):
    return [list(col) for col in zip(*A)]


def smat_map(A, f):
    return [[f(x) for x in row] for row in A]


def smat_truncate(A, order):
    return [[x.truncate(order) for x in row] for row in A]


def smat_shift(A, k):
    return [[x.shift(k) for x in row] for row in A]


def smat_coeff(A, k):
    """Coefficient matrix of ``b**k``."""
    return [[x.coeffs[k] for x in row] for row in A]


def smat_from_coeffs(mats, order):
    n, m = len(mats[0]), len(mats[0][0])
    return [[TruncSeries([mats[k][i][j] if k < len(mats) else ZERO for k in range(order)], order)
             for j in range(m)] for i in range(n)]


def smat_inverse(Qm):
    """Inverse of a series matrix whose constant term is invertible."""
    order = smat_order(Qm)
    try:
        X0 = inverse(smat_coeff(Qm, 0))
    except NotInvertible:
        raise NotInvertible("constant term of the base change is singular") from None
    coeffs = [smat_coeff(Qm, k) for k in range(order)]
    X = [X0]
    for n in range(1, order):
        acc = zeros(len(X0), len(X0))
        for i in range(1, n + 1):
            if any(any(row) for row in coeffs[i]):
                acc = mat_add(acc, mat_mul(coeffs[i], X[n - i]))
        X.append(mat_scale(mat_mul(X0, acc), -1))
    return smat_from_coeffs(X, order)


def smat_equal(A, B, order=None):
    return all(x.agrees_with(y, order) for ra, rb in zip(A, B) for x, y in zip(ra, rb))
