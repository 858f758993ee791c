"""The (a,b)-module type: presentation, a-action, base change and examples.

A module of rank p is given by a square matrix ``M`` of truncated series with
the row convention ``a.e_j = sum_h M[j][h] e_h``.  Coordinates of an element
``x = sum_j S_j e_j`` are the column of the ``S_j``; since ``a S(b) = S(b) a +
b^2 S'(b)``, the a-action on coordinates is ``M^T S + b^2 S'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg as la
from .coefficients import ONE, ZERO, GaussianRational, TruncSeries, gq, parse_series
from .errors import (
    BadParameter,
    InsufficientPrecision,
    NotEigen,
    NotPrimitive,
    NotSimplePole,
    NotStable,
    ShapeMismatch,
)


def series(x, order):
    """Coerce a scalar, coefficient list, string or series to a series mod ``b**order``."""
    if isinstance(x, TruncSeries):
        if x.order < order:
            raise InsufficientPrecision(f"entry known only mod b^{x.order}", needed=order)
        return x.truncate(order)
    if isinstance(x, str):
        return parse_series(x, order)
    if isinstance(x, (list, tuple)):
        return TruncSeries(list(x)[:order], order)
    return TruncSeries.constant(gq(x), order)


def _key(c):
    return (c.re, c.im)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset, stored as sorted ``(value, multiplicity)`` pairs."""

    eigenvalues: tuple

    @classmethod
    def from_pairs(cls, pairs):
        merged = {}
        for v, m in pairs:
            merged[v] = merged.get(v, 0) + m
        return cls(tuple(sorted(merged.items(), key=lambda vm: _key(vm[0]))))

    def as_list(self):
        """Eigenvalues repeated according to multiplicity, in sorted order."""
        return [v for v, m in self.eigenvalues for _ in range(m)]

    def values(self):
        return [v for v, _ in self.eigenvalues]

    def multiplicity(self, v):
        return dict(self.eigenvalues).get(gq(v), 0)

    def __len__(self):
        return sum(m for _, m in self.eigenvalues)

    def __eq__(self, other):
        if isinstance(other, Spectrum):
            return self.eigenvalues == other.eigenvalues
        return sorted(map(gq, other), key=_key) == self.as_list()

    def __hash__(self):
        return hash(self.eigenvalues)

    def __str__(self):
        return "{" + ", ".join(str(v) for v in self.as_list()) + "}"


@dataclass(frozen=True)
class AbModule:
    rank: int
    matrix: tuple
    known_order: int
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(row) for row in self.matrix))

    @property
    def M(self):
        return [list(row) for row in self.matrix]

    def coefficient(self, k):
        """Scalar matrix of the ``b**k`` coefficient of M."""
        return la.smat_coeff(self.matrix, k)

    def truncated(self, order):
        if order > self.known_order:
            raise InsufficientPrecision("cannot raise the known order", needed=order)
        return AbModule(self.rank, la.smat_truncate(self.matrix, order), order, self.label)

    def with_label(self, label):
        return AbModule(self.rank, self.matrix, self.known_order, label)

    def __repr__(self):
        lab = f" {self.label}" if self.label else ""
        return f"<AbModule{lab} rank={self.rank} mod b^{self.known_order}>"


def make_module(M, N, label=""):
    """Validate a square series matrix and wrap it as a module known mod ``b**N``."""
    if N < 1:
        raise BadParameter("known order must be >= 1")
    rows = list(M)
    p = len(rows)
    if p == 0 or any(len(row) != p for row in rows):
        raise ShapeMismatch("presentation matrix must be square and non-empty")
    mat = [[series(x, N) for x in row] for row in rows]
    return AbModule(p, mat, N, label)


# -- standard examples ------------------------------------------------------------


def default_order(rank):
    return 2 * rank + 6


def _mono(c, k, N):
    return TruncSeries.monomial(gq(c), k, N)


def _zero_matrix(p, N):
    return [[TruncSeries.zero(N) for _ in range(p)] for _ in range(p)]


def E(lam, N=None):
    N = N or default_order(1)
    lam = gq(lam)
    return AbModule(1, [[_mono(lam, 1, N)]], N, f"E({lam})")


def Elog(lam, n, N=None):
    """Simple-pole module with basis (x, y): a.x = (lam+n)b.x + b^(n+1).y, a.y = lam.b.y."""
    if not isinstance(n, int) or n < 0:
        raise BadParameter("n must be a non-negative integer")
    N = N or default_order(2) + n
    lam = gq(lam)
    M = _zero_matrix(2, N)
    M[0][0] = _mono(lam + n, 1, N)
    M[0][1] = _mono(1, n + 1, N)
    M[1][1] = _mono(lam, 1, N)
    return AbModule(2, M, N, f"Elog({lam},{n})")


def Epair(lam, mu, N=None):
    """Basis (y, t): a.y = mu.b.y and a.t = y + (lam-1).b.t."""
    N = N or default_order(2)
    lam, mu = gq(lam), gq(mu)
    M = _zero_matrix(2, N)
    M[0][0] = _mono(mu, 1, N)
    M[1][0] = _mono(1, 0, N)
    M[1][1] = _mono(lam - 1, 1, N)
    return AbModule(2, M, N, f"Epair({lam},{mu})")


def Ealpha(lam, n, alpha, N=None):
    """Basis (y, t): a.y = (lam-n).b.y and a.t = y + (lam-1).b.t + alpha.b^n.y."""
    if not isinstance(n, int) or n < 1:
        raise BadParameter("n must be a positive integer")
    alpha = gq(alpha)
    if not alpha:
        raise BadParameter("alpha must be non-zero")
    N = N or default_order(2) + n
    lam = gq(lam)
    M = _zero_matrix(2, N)
    M[0][0] = _mono(lam - n, 1, N)
    M[1][0] = TruncSeries([ONE] + [ZERO] * (n - 1) + [alpha], N) if n < N else _mono(1, 0, N)
    M[1][1] = _mono(lam - 1, 1, N)
    return AbModule(2, M, N, f"Ealpha({lam},{n},{alpha})")


def J(k, lam, N=None):
    """a.e_j = (lam+j-1).b.e_j + e_(j+1), with e_(k+1) = 0."""
    if not isinstance(k, int) or k < 1:
        raise BadParameter("k must be a positive integer")
    N = N or default_order(k)
    lam = gq(lam)
    M = _zero_matrix(k, N)
    for j in range(k):
        M[j][j] = _mono(lam + j, 1, N)
        if j + 1 < k:
            M[j][j + 1] = _mono(1, 0, N)
    return AbModule(k, M, N, f"J({k},{lam})")


def F(k, lam, rho, N=None):
    """J(k, lam) deformed by a.e_k += rho^k.b^k.e_1; agrees with J(k, lam) mod b^k."""
    rho = gq(rho)
    if not rho:
        raise BadParameter("rho must be non-zero")
    if not isinstance(k, int) or k < 2:
        raise BadParameter("k must be an integer >= 2")
    N = N or default_order(k)
    base = J(k, lam, N)
    M = base.M
    M[k - 1][0] = _mono(rho ** k, k, N)
    return AbModule(k, M, N, f"F({k},{gq(lam)},{rho})")


def Rank3Example(N=None):
    """a.e1 = e2, a.e2 = b.e3, a.e3 = 0."""
    N = N or default_order(3)
    M = _zero_matrix(3, N)
    M[0][1] = _mono(1, 0, N)
    M[1][2] = _mono(1, 1, N)
    return AbModule(3, M, N, "Rank3Example")


def direct_sum(E1, E2):
    N = min(E1.known_order, E2.known_order)
    p, q = E1.rank, E2.rank
    M = _zero_matrix(p + q, N)
    for i in range(p):
        for j in range(p):
            M[i][j] = E1.matrix[i][j].truncate(N)
    for i in range(q):
        for j in range(q):
            M[p + i][p + j] = E2.matrix[i][j].truncate(N)
    label = f"{E1.label}+{E2.label}" if E1.label and E2.label else ""
    return AbModule(p + q, M, N, label)


def DirectSum(modules):
    modules = list(modules)
    if not modules:
        raise BadParameter("direct sum of an empty list")
    out = modules[0]
    for m in modules[1:]:
        out = direct_sum(out, m)
    return out.with_label("DirectSum(" + ",".join(m.label for m in modules) + ")")


_FAMILIES = {
    "E": E,
    "Elog": Elog,
    "Epair": Epair,
    "Ealpha": Ealpha,
    "J": J,
    "F": F,
    "Rank3Example": Rank3Example,
}


def construct_standard(family, *params, N=None):
    """Build a named example family, e.g. ``construct_standard("Epair", 2, 0)``.

    ``DirectSum`` takes a list of modules or of ``(family, *params)`` tuples.
    """
    if family == "DirectSum":
        (parts,) = params
        mods = [p if isinstance(p, AbModule) else construct_standard(*p, N=N) for p in parts]
        return DirectSum(mods)
    try:
        ctor = _FAMILIES[family]
    except KeyError:
        raise BadParameter(f"unknown family {family!r}") from None
    try:
        return ctor(*params, N=N)
    except TypeError as exc:
        raise BadParameter(f"bad parameters for {family}: {exc}") from None


# -- operations -------------------------------------------------------------------


def apply_a(E, x):
    """Coordinates of ``a.x``: ``M^T x + b^2 x'``."""
    p = E.rank
    if len(x) != p:
        raise ShapeMismatch("vector length differs from the rank")
    M = E.matrix
    out = []
    for h in range(p):
        acc = None
        for j in range(p):
            m = M[j][h]
            term = m * x[j] if not m.is_zero() else TruncSeries.zero(min(m.order, x[j].order))
            acc = term if acc is None else acc + term
        xh = x[h]
        if xh.order >= 2:
            acc = acc + xh.derivative().shift(2)
        else:
            acc = acc.truncate(min(acc.order, 2))
        out.append(acc)
    return out


def b_times(x, k=1):
    return [s.shift(k) for s in x]


def change_basis(E, Qm):
    """Presentation in the basis ``f = Q.e``: ``(Q M + b^2 Q') Q^-1``."""
    p = E.rank
    N = E.known_order
    Qm = [[series(x, N) if not isinstance(x, TruncSeries) else x.truncate(min(x.order, N)) for x in row]
          for row in Qm]
    if len(Qm) != p or any(len(row) != p for row in Qm):
        raise ShapeMismatch("base change must be square of the module's rank")
    Qinv = la.smat_inverse(Qm)
    dQ = [[(x.derivative().shift(2) if x.order >= 2 else TruncSeries.zero(x.order + 1)) for x in row]
          for row in Qm]
    num = la.smat_add(la.smat_mul(Qm, E.matrix), dQ)
    Mf = la.smat_mul(num, Qinv)
    order = la.smat_order(Mf)
    return AbModule(p, la.smat_truncate(Mf, order), order, E.label)


def _negate_b(s):
    return TruncSeries._make([c if k % 2 == 0 else -c for k, c in enumerate(s.coeffs)], s.order)


def dual(E):
    """Dual module: matrix ``M(-b)`` transposed."""
    M = la.smat_transpose(E.matrix)
    label = f"dual({E.label})" if E.label else ""
    return AbModule(E.rank, [[_negate_b(x) for x in row] for row in M], E.known_order, label)


def twist(E, m):
    """``b^m E``: the a-action shifted by ``m.b``."""
    m = gq(m)
    M = E.M
    for i in range(E.rank):
        M[i][i] = M[i][i] + TruncSeries.monomial(m, 1, E.known_order)
    label = f"twist({E.label},{m})" if E.label else ""
    return AbModule(E.rank, M, E.known_order, label)


def is_simple_pole(E):
    return not any(x.coeffs[0] for row in E.matrix for x in row)


def residue_matrix(E):
    """The matrix C of ``b^-1 a`` on ``E/bE`` (row convention)."""
    if not is_simple_pole(E):
        raise NotSimplePole("a.E is not contained in b.E")
    if E.known_order < 2:
        raise InsufficientPrecision("need the b-linear coefficient", needed=2)
    return E.coefficient(1)


def spectrum(E):
    C = residue_matrix(E)
    return Spectrum.from_pairs(la.poly_roots(la.charpoly(C)))


def quotient_by_line(E, x, lam=None):
    """Quotient ``E / C[[b]] x`` for a primitive eigenvector ``a.x = lam.b.x``."""
    p = E.rank
    x = [series(s, min(E.known_order, s.order if isinstance(s, TruncSeries) else E.known_order))
         for s in x]
    j = next((i for i in range(p) if x[i].coeffs[0]), None)
    if j is None:
        raise NotPrimitive("vector lies in b.E")
    ax = apply_a(E, x)
    if lam is None:
        lam = ax[j].coeffs[1] / x[j].coeffs[0] if ax[j].order > 1 else ZERO
    lam = gq(lam)
    for s, t in zip(ax, x):
        n = min(s.order, t.order + 1)
        if not s.agrees_with(t.shift(1) * lam, n):
            raise NotEigen(f"a.x differs from {lam}.b.x")
    N = min(E.known_order, min(s.order for s in x))
    Qm = [[TruncSeries.constant(ONE if r == c else ZERO, N) for c in range(p)] for r in range(p)]
    Qm[j] = [s.truncate(N) for s in x]
    F_ = change_basis(E.truncated(N), Qm)
    M = F_.M
    keep = [i for i in range(p) if i != j]
    if p == 1:
        raise BadParameter("cannot take the quotient of a rank-1 module by a line")
    rows = [[M[r][c] for c in keep] for r in keep]
    return AbModule(p - 1, rows, F_.known_order, "")


def submodule_module(E, L):
    """Presentation of an a-stable lattice ``L`` in its canonical basis."""
    from .lattice import coordinates

    if L.ambient_rank != E.rank:
        raise ShapeMismatch("lattice and module ranks differ")
    N = E.known_order
    m = L.shift
    rows = []
    for B in L.basis:
        Bn = [s.extend(N) if s.order < N else s.truncate(N) for s in B]
        aB = apply_a(E, Bn)
        R = [s - t.shift(1) * m if m else s for s, t in zip(aB, Bn)]
        q = coordinates(L, R)
        if q is None:
            raise NotStable("lattice is not stable under a")
        rows.append(q)
    order = min(s.order for row in rows for s in row)
    return AbModule(E.rank, [[s.truncate(order) for s in row] for row in rows], order, "")


__all__ = [
    "AbModule",
    "Spectrum",
    "GaussianRational",
    "make_module",
    "construct_standard",
    "E",
    "Elog",
    "Epair",
    "Ealpha",
    "J",
    "F",
    "Rank3Example",
    "DirectSum",
    "apply_a",
    "b_times",
    "change_basis",
    "dual",
    "twist",
    "direct_sum",
    "is_simple_pole",
    "residue_matrix",
    "spectrum",
    "quotient_by_line",
    "submodule_module",
    "series",
    "default_order",
]
