"""Structure theory: eigenvectors, normal lines, Jordan-Hoelder, Ext, rank-2 classes."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg as la
from .abmodule import (
    AbModule,
    Elog,
    Ealpha,
    Epair,
    E as E_rank1,
    apply_a,
    change_basis,
    direct_sum,
    dual,
    quotient_by_line,
    residue_matrix,
    spectrum,
)
from .coefficients import ONE, ZERO, TruncSeries, gq, same_class
from .errors import (
    BoundNotInteger,
    CrossCheckFailed,
    InsufficientPrecision,
    NotMinimalExponent,
    NotRegular,
    NotStabilized,
    ShapeMismatch,
)
from .invariants import biggest_simple_pole, index_delta, saturate
from .jets import determination_bound, jet_isomorphism, rank1_normal_form
from .kernels import rref

# -- eigenvectors ------------------------------------------------------------------


def _eigen_recursion(E, lam, x0, start, xs=None):
    """Continue ``(a - lam.b) x = 0`` degree by degree from ``start`` on.

    Degree k solves ``(C^T + k - lam) x_k = -sum_{i>=2} M_i^T x_(k+1-i)``.
    """
    p = E.rank
    N = E.known_order
    Ms = [la.transpose(E.coefficient(i)) for i in range(N)]
    xs = list(xs) if xs is not None else [x0]
    Ct = Ms[1]
    for k in range(start, N - 1):
        rhs = [ZERO] * p
        for i in range(2, k + 2):
            if k + 1 - i < len(xs):
                v = la.mat_vec(Ms[i], xs[k + 1 - i])
                rhs = [r - c for r, c in zip(rhs, v)]
        A = [[Ct[r][c] + ((k - lam) if r == c else ZERO) for c in range(p)] for r in range(p)]
        sol = la.solve(A, rhs)
        if sol is None:
            raise NotMinimalExponent(f"resonance at degree {k} for exponent {lam}")
        if k < len(xs):
            xs[k] = sol
        else:
            xs.append(sol)
    return [TruncSeries([xs[k][j] for k in range(N - 1)], N - 1) for j in range(p)]


def solve_eigenvector(E, lam):
    """Basis of solutions of ``a.x = lam.b.x`` modulo ``b^(N-1)``."""
    lam = gq(lam)
    C = residue_matrix(E)
    if E.known_order < 3:
        raise InsufficientPrecision("eigenvector solving needs the module mod b^3", needed=3)
    spec = spectrum(E)
    for mu in spec.values():
        d = lam - mu
        if d.is_integer and d.to_int() >= 1:
            raise NotMinimalExponent(f"{mu} = {lam} - {d} is also an exponent")
    Ct = la.transpose(C)
    shifted = [[Ct[r][c] - (lam if r == c else ZERO) for c in range(E.rank)] for r in range(E.rank)]
    out = []
    for x0 in la.row_space_basis(la.kernel(shifted)):
        out.append(_eigen_recursion(E, lam, x0, 1))
    return out


def refine_eigenvector(E, lam, y, kappa):
    """Correct an approximate eigenvector above degree ``kappa``.

    ``y`` must satisfy ``(a - lam.b) y = 0`` modulo ``b^(kappa+2)`` and no
    exponent may lie in ``lam - kappa - 1 - N``; the result agrees with y
    modulo ``b^(kappa+1)``.
    """
    lam = gq(lam)
    residue_matrix(E)
    xs = [[s.coeffs[k] if k < s.order else ZERO for s in y] for k in range(kappa + 1)]
    return _eigen_recursion(E, lam, xs[0], kappa + 1, xs)


# -- normal lines and Jordan-Hoelder -----------------------------------------------------


def _class_minimal(values):
    mins = []
    for v in values:
        if not any(same_class(v, w) and (w - v).re < 0 for w in values):
            mins.append(v)
    return sorted(mins, key=lambda z: (z.re, z.im))


def find_normal_line(E):
    """An exponent and a primitive eigenvector generating a normal rank-1 submodule."""
    Lb, Eb = biggest_simple_pole(E, cross_check=False)
    mu = _class_minimal(spectrum(Eb).values())[0]
    z = solve_eigenvector(Eb, mu)[0]
    N = min(s.order for s in z)
    x = [TruncSeries.zero(N) for _ in range(E.rank)]
    for q, v in zip(z, Lb.basis):
        for j, s in enumerate(v):
            if not s.is_zero():
                x[j] = x[j] + q * s.extend(max(s.order, N))
    val = min(s.valuation() for s in x)
    if val >= N - 1:
        raise InsufficientPrecision("eigenvector vanishes to the known order", needed=2 * N)
    x = [s.divide_by_b(val) if val else s for s in x]
    return mu - val, x


@dataclass(frozen=True)
class JHSequence:
    exponents: tuple
    witnesses: tuple = field(default=(), compare=False)

    def total(self):
        return sum(self.exponents, ZERO)


def jordan_holder(E):
    """Exponents of a Jordan-Hoelder sequence built from successive normal lines."""
    exps, wits = [], []
    cur = E
    while True:
        lam, x = find_normal_line(cur)
        exps.append(lam)
        wits.append(x)
        if cur.rank == 1:
            break
        cur = quotient_by_line(cur, x, lam)
        need = 2 * cur.rank + 2
        if cur.known_order < need:
            raise InsufficientPrecision("quotients consumed the available precision",
                                        needed=E.known_order + need - cur.known_order)
    return JHSequence(tuple(exps), tuple(wits))


# -- Hom and Ext ------------------------------------------------------------------------


def _lambda_rows(E, F, T):
    """Sparse matrix of ``Lambda(P) = M_E P - P M_F - b^2 P'`` on P mod b^T."""
    from .jets import intertwiner_rows

    if E.rank != F.rank:
        return _lambda_rows_rect(E, F, T)
    A = [E.coefficient(k) for k in range(T)]
    B = [F.coefficient(k) for k in range(T)]
    return intertwiner_rows(A, B, E.rank, T), E.rank * E.rank * T


def _lambda_rows_rect(E, F, T):
    p, q = E.rank, F.rank
    A = [E.coefficient(k) for k in range(T)]
    B = [F.coefficient(k) for k in range(T)]

    def var(k, i, j):
        return (k * p + i) * q + j

    rows = []
    for t in range(T):
        for i in range(p):
            for j in range(q):
                row = {}
                for s in range(t + 1):
                    k = t - s
                    for h in range(p):
                        c = A[s][i][h]
                        if c:
                            v = var(k, h, j)
                            row[v] = row.get(v, ZERO) + c
                    for h in range(q):
                        c = B[s][h][j]
                        if c:
                            v = var(k, i, h)
                            row[v] = row.get(v, ZERO) - c
                if t >= 2:
                    v = var(t - 1, i, j)
                    row[v] = row.get(v, ZERO) - (t - 1)
                rows.append({v: c for v, c in row.items() if c})
    return rows, p * q * T


def _rank(rows, n):
    rows = [r for r in rows if r]
    if not rows:
        return 0
    basis, _ = rref(rows, n)
    return len(basis)


def _ext_at(E, F, T):
    """(dim ker, dim coker) of Lambda truncated at T; ker projected from 2T."""
    rows, n = _lambda_rows(E, F, T)
    ext1 = n - _rank(rows, n)
    rows2, n2 = _lambda_rows(E, F, 2 * T)
    from .kernels import nullspace

    ker = nullspace([r for r in rows2 if r], n2)
    proj = [{v: c for v, c in vec.items() if v < n} for vec in ker]
    ext0 = _rank(proj, n)
    return ext0, ext1


def _exponents(E):
    try:
        vals = spectrum(saturate(E).module).values() + spectrum(biggest_simple_pole(E).module).values()
    except (NotRegular, InsufficientPrecision):
        return []
    return vals


def ext_start(E, F):
    """Heuristic first truncation for the Ext computation."""
    gap = 0
    for x in _exponents(E):
        for y in _exponents(F):
            if same_class(x, y):
                gap = max(gap, abs((x - y).to_int()))
    try:
        dd = index_delta(E) + index_delta(F)
    except (NotRegular, InsufficientPrecision):
        dd = E.rank + F.rank
    return gap + dd + 3


def ext_dims(E, F, T=None, retries=4):
    """``(dim Hom_(a,b)(E, F), dim Ext^1(E, F))`` via the operator Lambda."""
    T = T or ext_start(E, F)
    avail = min(E.known_order, F.known_order)
    for _ in range(retries + 1):
        if 2 * (T + 1) > avail:
            raise InsufficientPrecision("Ext stabilization needs more known coefficients",
                                        needed=2 * (T + 1))
        a = _ext_at(E, F, T)
        b = _ext_at(E, F, T + 1)
        if a == b:
            return a
        T *= 2
    raise NotStabilized(f"Ext dimensions did not stabilize up to truncation {T}")


def coker_a_plus(E, lam, T):
    """``dim E / ((a + lam.b) E + b^T E)``."""
    p = E.rank
    Et = E.truncated(T)
    rows = []
    for h in range(p):
        for k in range(T):
            x = [TruncSeries.monomial(ONE if j == h else ZERO, k, T) for j in range(p)]
            y = apply_a(Et, x)
            y = [s.truncate(min(s.order, T)) + t.shift(1).truncate(T) * lam for s, t in zip(y, x)]
            rows.append({j * T + d: s.coeffs[d] for j, s in enumerate(y) for d in range(min(T, s.order))
                         if s.coeffs[d]})
    return p * T - _rank(rows, p * T)


def ext1_via_dual(E, lam, T=None, retries=4):
    """``dim Ext^1(E, E_lam)`` as the cokernel of ``a + lam.b`` on the dual module."""
    lam = gq(lam)
    Ed = dual(E)
    T = T or ext_start(E, E_rank1(lam, N=max(E.known_order, 8)))
    for _ in range(retries + 1):
        if T + 1 > Ed.known_order:
            raise InsufficientPrecision("dual cokernel needs more known coefficients", needed=T + 1)
        a, b = coker_a_plus(Ed, lam, T), coker_a_plus(Ed, lam, T + 1)
        if a == b:
            return a
        T *= 2
    raise NotStabilized("cokernel of a + lam.b did not stabilize")


# -- cokernel bound ------------------------------------------------------------------


def _image_contains_powers(E, lam, T):
    """Smallest N <= T with ``b^N E`` inside ``(a - lam.b) E + b^T E``."""
    p = E.rank
    Et = E.truncated(T)
    rows = []
    for h in range(p):
        for k in range(T):
            x = [TruncSeries.monomial(ONE if j == h else ZERO, k, T) for j in range(p)]
            y = apply_a(Et, x)
            y = [s.truncate(min(s.order, T)) - t.shift(1).truncate(T) * lam for s, t in zip(y, x)]
            rows.append({j * T + d: s.coeffs[d] for j, s in enumerate(y) for d in range(min(T, s.order))
                         if s.coeffs[d]})
    base = _rank(rows, p * T)
    best = T
    for n in range(T - 1, -1, -1):
        extra = [{j * T + d: ONE} for j in range(p) for d in range(n, T)]
        if _rank(rows + extra, p * T) == base:
            best = n
        else:
            break
    return best


def cokernel_bound_truncation(E, lam):
    """Truncation making the b-power test exact: the sufficiency lemma's bound."""
    lam = gq(lam)
    lows = [v for v in spectrum(biggest_simple_pole(E).module).values() if same_class(v, lam)]
    delta = index_delta(E)
    if not lows:
        return delta + 2, None
    lo = min(lows, key=lambda z: z.re)
    diff = lam - lo
    if not diff.is_integer:
        raise BoundNotInteger(f"{lam} - {lo} is not an integer")
    return max(0, diff.to_int() + 1) + delta + 2, lo


def cokernel_b_bound(E, lam):
    """Smallest N with ``b^N E`` inside ``(a - lam.b) E``."""
    T, _ = cokernel_bound_truncation(E, lam)
    if T > E.known_order:
        raise InsufficientPrecision("cokernel bound needs more known coefficients", needed=T)
    return _image_contains_powers(E, gq(lam), T)


# -- rank two classification -------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationRank2:
    variant: str  # "Sum", "Log", "Pair" or "Alpha"
    params: tuple
    verified_order: int = 0

    def construct(self, N=None):
        if self.variant == "Sum":
            lam, mu = self.params
            return direct_sum(E_rank1(lam, N=N), E_rank1(mu, N=N)).with_label(
                f"DirectSum(E({lam}),E({mu}))")
        if self.variant == "Log":
            return Elog(*self.params, N=N)
        if self.variant == "Pair":
            return Epair(*self.params, N=N)
        return Ealpha(*self.params, N=N)

    def as_dict(self):
        names = {"Sum": ("lambda", "mu"), "Log": ("lambda", "n"), "Pair": ("lambda", "mu"),
                 "Alpha": ("lambda", "n", "alpha")}[self.variant]
        return {"variant": self.variant,
                **{k: (v if isinstance(v, int) else str(v)) for k, v in zip(names, self.params)}}


def _series_list(s, n):
    return [s.coeffs[k] if k < s.order else ZERO for k in range(n)]


def _normal_form_rank2(E):
    """Normal form data from a normal line y and a complement t."""
    nu, y = find_normal_line(E)
    j = next(i for i in range(2) if y[i].coeffs[0])
    N = min(E.known_order, min(s.order for s in y))
    other = 1 - j
    t = [TruncSeries.constant(ONE if i == other else ZERO, N) for i in range(2)]
    Q = [[s.truncate(N) for s in y], t]
    F = change_basis(E.truncated(N), Q)
    u, v = F.matrix[1][0], F.matrix[1][1]
    if not v.coeffs[0] == ZERO:
        raise NotRegular("quotient by the normal line has no simple pole")
    # straighten the quotient: t -> w.t makes v = kappa.b
    quot = AbModule(1, [[v]], v.order)
    kappa, w = rank1_normal_form(quot)
    n = min(u.order, w.order)
    u = u.truncate(n) * w.truncate(n)
    return nu, kappa, u, n


def classify_rank2(E, verify=True, seed=0):
    """Which of the four rank-2 normal forms E is isomorphic to."""
    if E.rank != 2:
        raise ShapeMismatch("rank-2 module expected")
    nu, kappa, u, order = _normal_form_rank2(E)
    d = kappa - nu
    if not u.coeffs[0]:
        # simple pole: the resonant coefficient sits at b^(kappa-nu+1)
        res = None
        if d.is_integer and d.to_int() >= 0 and d.to_int() + 1 < order:
            res = u.coeffs[d.to_int() + 1]
        elif d.is_integer and d.to_int() >= 0:
            raise InsufficientPrecision("resonant coefficient beyond the known order",
                                        needed=d.to_int() + 2)
        if res:
            out = ClassificationRank2("Log", (nu, d.to_int()))
        else:
            out = ClassificationRank2("Sum", tuple(sorted((nu, kappa), key=lambda z: (z.re, z.im))))
    else:
        u0 = u.coeffs[0]
        lam = kappa + 1
        n = d + 1
        res = ZERO
        if n.is_integer and n.to_int() >= 1:
            k = n.to_int()
            if k >= order:
                raise InsufficientPrecision("resonant coefficient beyond the known order", needed=k + 1)
            res = u.coeffs[k]
        if res:
            out = ClassificationRank2("Alpha", (lam, n.to_int(), res / u0))
        else:
            out = ClassificationRank2("Pair", (lam, nu))
    if verify:
        N0 = determination_bound(E)
        model = out.construct(N=max(E.known_order, N0 + 1))
        if N0 > E.known_order:
            raise InsufficientPrecision("round-trip check needs the module to its bound", needed=N0)
        r = jet_isomorphism(model, E, N0, seed=seed)
        if not r.is_iso:
            raise CrossCheckFailed(f"classification {out.variant}{out.params} fails the round trip")
        out = ClassificationRank2(out.variant, out.params, N0)
    return out


__all__ = [
    "solve_eigenvector",
    "refine_eigenvector",
    "find_normal_line",
    "JHSequence",
    "jordan_holder",
    "ext_dims",
    "ext1_via_dual",
    "cokernel_b_bound",
    "ClassificationRank2",
    "classify_rank2",
]
