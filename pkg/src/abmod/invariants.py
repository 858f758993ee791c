"""Regularity invariants: saturation, regularity order, index, E^b, widths, alpha.

Lattices live in ``E[1/b]`` with coordinates relative to the module's basis.
The operator ``b^-1 a`` acts on a vector ``y`` of shift ``m`` (representing
``b^-m y``) by ``b^-(m+1) (a.y - m.b.y)``, so one saturation step raises the
shift by one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import linalg as la
from .abmodule import (
    AbModule,
    apply_a,
    dual,
    is_simple_pole,
    spectrum,
    submodule_module,
)
from .coefficients import ONE, ZERO, TruncSeries, same_class
from .errors import CrossCheckFailed, InsufficientPrecision, NotRegular
from .lattice import Lattice, contains, echelonize, index_dim, lattice_equal


def required_order(E):
    return 2 * E.rank + 2


def _check_precision(E):
    need = required_order(E)
    if E.known_order < need:
        raise InsufficientPrecision(
            f"invariants need the module mod b^{need}, have b^{E.known_order}", needed=need
        )


def _fit(v, N):
    return [s.extend(N) if s.order < N else s.truncate(N) for s in v]


def _b_inverse_a(E, y, m):
    """Coordinates (at shift m+1) of ``b^-1 a`` applied to the shift-m vector y."""
    ay = apply_a(E, y)
    return [s - t.shift(1) * m if m else s for s, t in zip(ay, y)]


class Saturation(NamedTuple):
    lattice: Lattice
    module: AbModule
    steps: int


_SAT_CACHE = {}


def saturate(E):
    """``E^#``: the smallest lattice containing E and stable under ``b^-1 a``."""
    key = (E.rank, E.matrix, E.known_order)
    if key in _SAT_CACHE:
        return _SAT_CACHE[key]
    _check_precision(E)
    N = E.known_order
    p = E.rank
    phi = Lattice.standard(p, N)
    steps = None
    for k in range(p):
        m = phi.shift
        new = [_b_inverse_a(E, _fit(v, N), m) for v in phi.basis]
        old = phi.rescaled(m + 1).generators(N + m + 1)
        grown = echelonize(old + [_fit(v, N + m + 1) for v in new], p, m + 1, N)
        if lattice_equal(grown, phi):
            steps = k
            break
        phi = grown
    if steps is None:
        raise NotRegular(f"saturation chain did not stabilize within {p} steps")
    out = Saturation(phi, submodule_module(E, phi), steps)
    _SAT_CACHE[key] = out
    return out


def regularity_order(E):
    """Smallest k with ``a^(k+1) E`` inside ``sum_j a^j b^(k-j+1) E``."""
    _check_precision(E)
    N = E.known_order
    p = E.rank
    units = [[TruncSeries.constant(ONE if i == h else ZERO, N) for i in range(p)] for h in range(p)]
    for k in range(p):
        gens = []
        for h in range(p):
            for j in range(k + 1):
                v = [s.shift(k - j + 1).truncate(N) for s in units[h]]
                for _ in range(j):
                    v = apply_a(E, v)
                gens.append(v)
        psi = echelonize(gens, p, 0, N)
        ok = True
        for h in range(p):
            v = units[h]
            for _ in range(k + 1):
                v = apply_a(E, v)
            if not contains(psi, v):
                ok = False
                break
        if ok:
            return k
    raise NotRegular(f"no regularity order below the rank {p}")


def index_delta(E):
    """Smallest m with ``E^#`` inside ``b^-m E``."""
    return saturate(E).lattice.minimal_shift()


@dataclass(frozen=True)
class RegularityReport:
    order: int
    saturation_steps: int
    agree: bool


def regularity_report(E):
    """Regularity order next to the saturation step count; a mismatch is data, not an error."""
    k = regularity_order(E)
    s = saturate(E).steps
    return RegularityReport(k, s, k == s)


# -- biggest simple-pole submodule ------------------------------------------------


def _negate_b(s):
    return TruncSeries._make([c if k % 2 == 0 else -c for k, c in enumerate(s.coeffs)], s.order)


def _adjugate(A, order):
    """Adjugate of a polynomial matrix via memoized Laplace expansion."""
    p = len(A)
    memo = {}

    def minor(rows, cols):
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if not rows:
            return TruncSeries.constant(ONE, order)
        r = rows[0]
        acc = TruncSeries.zero(order)
        for idx, c in enumerate(cols):
            x = A[r][c]
            if x.is_zero():
                continue
            sub = minor(rows[1:], cols[:idx] + cols[idx + 1:])
            term = x * sub
            acc = acc - term if idx % 2 else acc + term
        memo[key] = acc
        return acc

    full = tuple(range(p))
    adj = [[None] * p for _ in range(p)]
    for i in range(p):
        for j in range(p):
            # adj[i][j] = (-1)^(i+j) det(A without row j, column i)
            d = minor(tuple(r for r in full if r != j), tuple(c for c in full if c != i))
            adj[i][j] = -d if (i + j) % 2 else d
    return adj


def dual_lattice(L, N):
    """Lattice of x in ``E[1/b]`` pairing integrally with the lattice L of ``E*``.

    The pairing of ``b^-m c`` with x is ``sum_j c_j(-b) x_j`` up to a sign, so
    the dual lattice is spanned by the columns of ``b^m C(-b)^-1``, C having
    the basis vectors of L as rows.
    """
    p = L.ambient_rank
    m = L.shift
    sd = sum(L.degrees())
    W = sd + N + 1
    C = [[_negate_b(s.extend(W) if s.order < W else s.truncate(W)) for s in v] for v in L.basis]
    adj = _adjugate(C, W)
    e = m - sd
    shift = max(0, -e)
    lift = e + shift
    cols = [[adj[i][j].shift(lift).truncate(W) for i in range(p)] for j in range(p)]
    return echelonize(cols, p, shift, N)


def _jet_space(E, N):
    """Greatest subspace F of ``E / b^N E`` with ``a F`` inside ``b F``."""
    p = E.rank
    dim = p * N

    def idx(j, k):
        return j * N + k

    def a_vec(x):
        v = [TruncSeries([x[idx(j, k)] for k in range(N)], N) for j in range(p)]
        w = apply_a(E.truncated(N), v)
        out = [ZERO] * dim
        for j in range(p):
            for k in range(min(N, w[j].order)):
                out[idx(j, k)] = w[j].coeffs[k]
        return out

    def b_vec(x):
        out = [ZERO] * dim
        for j in range(p):
            for k in range(N - 1):
                out[idx(j, k + 1)] = x[idx(j, k)]
        return out

    F = la.identity(dim)
    while True:
        AF = [a_vec(x) for x in F]
        BF = [b_vec(x) for x in F]
        # solve sum c_i AF_i = sum d_i BF_i
        r = len(F)
        rows = [[AF[i][t] for i in range(r)] + [-BF[i][t] for i in range(r)] for t in range(dim)]
        ker = la.kernel(rows, 2 * r)
        new = [[sum((c[i] * F[i][t] for i in range(r) if c[i]), ZERO) for t in range(dim)] for c in ker]
        new = la.row_space_basis(new) if new else []
        if len(new) == r:
            return new
        F = new


def _lattice_jets(L, N):
    p = L.ambient_rank
    if L.shift:
        raise CrossCheckFailed("E^b must lie inside E")
    vecs = []
    for v in L.basis:
        for k in range(N):
            w = [ZERO] * (p * N)
            for j, s in enumerate(v):
                for t in range(N - k):
                    c = s.coeffs[t] if t < s.order else ZERO
                    if c:
                        w[j * N + t + k] = c
            vecs.append(w)
    return la.row_space_basis(vecs)


class SimplePolePart(NamedTuple):
    lattice: Lattice
    module: AbModule


def biggest_simple_pole(E, cross_check=True):
    """``E^b``, computed as the dual lattice of ``(E*)^#``."""
    _check_precision(E)
    N = E.known_order
    sat = saturate(dual(E))
    Lb = dual_lattice(sat.lattice, N)
    if Lb.minimal_shift() != 0:
        raise CrossCheckFailed("dual of (E*)^# is not inside E")
    if Lb.shift:
        Lb = echelonize([[s.divide_by_b(Lb.shift) if s.order > Lb.shift else s for s in v]
                         for v in Lb.generators()], E.rank, 0, N)
    mod = submodule_module(E, Lb)
    if not is_simple_pole(mod):
        raise CrossCheckFailed("E^b presentation lacks a simple pole")
    if cross_check:
        n = index_delta(E) + 1
        if n <= N:
            if _jet_space(E, n) != _lattice_jets(Lb, n):
                raise CrossCheckFailed("E^b differs from the jet fixed point")
    return SimplePolePart(Lb, mod)


# -- widths and alpha ---------------------------------------------------------------


@dataclass(frozen=True)
class ClassWidth:
    lambda_min: object
    lambda_max: object
    width: int


@dataclass(frozen=True)
class WidthReport:
    classes: tuple
    width: int

    def for_class(self, lam):
        for c in self.classes:
            if same_class(c.lambda_min, lam):
                return c
        return None


def _class_extrema(values, pick):
    groups = []
    for v in values:
        for g in groups:
            if same_class(g[0], v):
                g.append(v)
                break
        else:
            groups.append([v])
    return [pick(g, key=lambda z: z.re) for g in groups]


def widths(E):
    """Per Z-class extremal exponents: lambda_min from E^b, lambda_max from E^#."""
    low = _class_extrema(spectrum(biggest_simple_pole(E).module).values(), min)
    high = _class_extrema(spectrum(saturate(E).module).values(), max)
    classes = []
    for lo in low:
        hi = next((h for h in high if same_class(h, lo)), None)
        if hi is None:
            raise CrossCheckFailed("E^b and E^# spectra have different classes")
        classes.append(ClassWidth(lo, hi, (hi - lo).to_int()))
    classes.sort(key=lambda c: (c.lambda_min.re, c.lambda_min.im))
    return WidthReport(tuple(classes), max(c.width for c in classes))


def alpha_invariant(E):
    """``trace(b^-1 a on E^#/bE^#) + dim(E^#/E)``."""
    sat = saturate(E)
    C = sat.module.coefficient(1)
    return la.trace(C) + index_dim(sat.lattice, Lattice.standard(E.rank, E.known_order))
