"""Full-rank C[[b]]-lattices inside ``b**-m * E`` for a free reference module E.

A lattice is stored through its canonical echelon basis in ``b**m``-scaled
coordinates: basis vector ``i`` carries the monic pivot ``b**d_i`` in
coordinate ``c_i``, vanishes in the earlier pivot coordinates, and its entry
in every later pivot coordinate ``c_j`` is a polynomial of degree ``< d_j``.
All canonical entries are therefore exact polynomials.

Membership tests reduce the candidate modulo ``b**K`` first, where
``b**K * E`` is contained in the (scaled) lattice; only coefficients below
``b**K`` are ever consulted, so inputs need ``known order >= K``.
"""

from __future__ import annotations

from .coefficients import ONE, ZERO, AtLeast, TruncSeries, series_valuation
from .errors import InsufficientPrecision, NotASublattice, RankDeficient


def _exact(v, order):
    """Treat a polynomial vector as exact data up to ``order``."""
    return [x.extend(order) if x.order < order else x.truncate(order) for x in v]


class Lattice:
    """Canonical echelon basis of a full-rank lattice; see module docstring."""

    __slots__ = ("ambient_rank", "shift", "basis", "pivots", "known_order", "K")

    def __init__(self, ambient_rank, shift, basis, pivots, known_order):
        self.ambient_rank = ambient_rank
        self.shift = shift
        self.basis = [tuple(v) for v in basis]
        self.pivots = list(pivots)
        self.known_order = known_order
        self.K = self._saturation_exponent()

    # -- constructors ---------------------------------------------------------

    @classmethod
    def standard(cls, p, order, shift=0):
        """The reference module ``E`` itself viewed in ``b**-shift * E``."""
        basis = [[TruncSeries.monomial(ONE if i == j else ZERO, shift, order + shift) for j in range(p)]
                 for i in range(p)]
        return cls(p, shift, basis, [(i, shift) for i in range(p)], order)

    def __repr__(self):
        piv = ", ".join(f"e{c + 1}:b^{d - self.shift}" for c, d in self.pivots)
        return f"Lattice(rank={self.ambient_rank}, shift={self.shift}, pivots=[{piv}])"

    # -- structure --------------------------------------------------------------

    @property
    def work_order(self):
        return max(d for _, d in self.pivots) + self.known_order + 1

    def degrees(self):
        return [d for _, d in self.pivots]

    def _saturation_exponent(self):
        p = self.ambient_rank
        lo = max(d for _, d in self.pivots)
        hi = sum(d for _, d in self.pivots)
        for K in range(lo, hi + 1):
            if all(self._member_exact(_unit(p, c, K, K + 1)) for c in range(p)):
                return K
        return hi

    def _reduce(self, v):
        """Exact reduction of a polynomial vector: returns (member, coefficients)."""
        order = max(x.order for x in v)
        v = list(v)
        coeffs = []
        for (c, d), w in zip(self.pivots, self.basis):
            x = v[c]
            if any(x.coeffs[:d]):
                return False, None
            if d >= x.order:
                q = TruncSeries.zero(1)
                coeffs.append(q)
                v[c] = TruncSeries.zero(x.order)
                continue
            q = x.divide_by_b(d)
            coeffs.append(q)
            w = _exact(w, order)
            v = [a - q * bb if not bb.is_zero() else a for a, bb in zip(v, w)]
            v[c] = TruncSeries.zero(order)
        return all(x.is_zero() for x in v), coeffs

    def _member_exact(self, v):
        return self._reduce(v)[0]

    def rescaled(self, shift):
        """Same lattice expressed in ``b**-shift * E`` coordinates (shift >= self.shift)."""
        delta = shift - self.shift
        if delta < 0:
            raise ValueError("can only raise the shift")
        if delta == 0:
            return self
        basis = [[x.shift(delta) for x in v] for v in self.basis]
        return Lattice(self.ambient_rank, shift, basis, [(c, d + delta) for c, d in self.pivots],
                       self.known_order)

    def scaled_by_b(self, k):
        """The lattice ``b**k * L`` (k may be negative) with the same shift where possible."""
        if k >= 0:
            basis = [[x.shift(k) for x in v] for v in self.basis]
            return Lattice(self.ambient_rank, self.shift, basis,
                           [(c, d + k) for c, d in self.pivots], self.known_order)
        L = self.rescaled(self.shift - k) if min(self.degrees()) < -k else self
        basis = [[x.divide_by_b(-k) if x.order > -k else TruncSeries.zero(1) for x in v]
                 for v in L.basis]
        # entries are exact polynomials divisible by b**-k; pad back to a common order
        order = L.work_order
        basis = [_exact(v, order) for v in basis]
        return Lattice(self.ambient_rank, L.shift, basis, [(c, d + k) for c, d in L.pivots],
                       self.known_order)

    def minimal_shift(self):
        """Smallest m >= 0 with L inside ``b**-m * E``."""
        low = min(min((x.valuation() for x in v if not x.is_zero()), default=0) for v in self.basis)
        return max(0, self.shift - low)

    def generators(self, order=None):
        order = order or self.work_order
        return [_exact(v, order) for v in self.basis]

    def basis_in_ambient(self):
        """Basis as (exponent of b, vector) pairs, i.e. ``b**-shift * v``."""
        return [(-self.shift, v) for v in self.basis]

    def describe(self):
        """Human-readable basis, e.g. ``['e1', 'b^-1*e2']`` for diagonal lattices."""
        out = []
        for v in self.basis:
            terms = []
            for j, x in enumerate(v):
                for k, c in enumerate(x.coeffs):
                    if c:
                        e = k - self.shift
                        coef = "" if c == 1 else f"{c}*"
                        terms.append(f"{coef}{'' if e == 0 else f'b^{e}*'}e{j + 1}")
            out.append(" + ".join(terms))
        return out


def _unit(p, c, k, order):
    return [TruncSeries.monomial(ONE if j == c else ZERO, k, order) for j in range(p)]


# -- operations ---------------------------------------------------------------


def echelonize(generators, ambient_rank, shift=0, known_order=None):
    """Canonical echelon basis of the lattice spanned by ``generators``.

    ``generators`` are coordinate vectors (in ``b**shift``-scaled coordinates)
    of :class:`TruncSeries`.
    """
    p = ambient_rank
    work = [list(v) for v in generators]
    if known_order is None:
        known_order = min((x.order for v in work for x in v), default=1)
    used = set()
    pivots = []
    basis = []
    for _ in range(p):
        best = None
        for idx, v in enumerate(work):
            for c in range(p):
                if c in used:
                    continue
                val = series_valuation(v[c])
                if isinstance(val, AtLeast):
                    continue
                key = (val, c, idx)
                if best is None or key < best:
                    best = key
        if best is None:
            if work:
                raise InsufficientPrecision("no pivot found among truncated generators",
                                            needed=2 * known_order)
            raise RankDeficient(f"generators span rank {len(pivots)} < {p}")
        d, c, idx = best
        v = work.pop(idx)
        unit = v[c].divide_by_b(d)
        uinv = unit.inverse()
        v = [x * uinv for x in v]
        v[c] = TruncSeries.monomial(ONE, d, v[c].order + d)
        rest = []
        for w in work:
            x = w[c]
            if x.order <= d:
                if x.is_zero():
                    raise InsufficientPrecision("generator entry known below pivot valuation",
                                                needed=d + 1)
            q = x.divide_by_b(d)
            w = [a - q * bb if not bb.is_zero() else a for a, bb in zip(w, v)]
            w[c] = TruncSeries.zero(max(w[c].order, 1))
            rest.append(w)
        work = rest
        used.add(c)
        pivots.append((c, d))
        basis.append(v)
    # reduce entries in later pivot coordinates, last basis vector first
    degs = dict(pivots)
    exact_order = max(degs.values()) + 1
    for i in range(p - 1, -1, -1):
        v = basis[i]
        ci = pivots[i][0]
        for j in range(i + 1, p):
            cj, dj = pivots[j]
            x = v[cj]
            if x.order < dj:
                raise InsufficientPrecision("entry above a pivot is not resolved", needed=dj)
            r = TruncSeries(x.coeffs[:dj], max(dj, 1)) if dj > 0 else TruncSeries.zero(1)
            if x.order > dj:
                q = TruncSeries(x.coeffs[dj:], x.order - dj)
                w = basis[j]
                v = [a - q * bb if (not bb.is_zero() and k != cj) else a
                     for k, (a, bb) in enumerate(zip(v, w))]
            v[cj] = r
        # earlier pivot coordinates were zeroed during elimination
        for j in range(i):
            v[pivots[j][0]] = TruncSeries.zero(1)
        v[ci] = TruncSeries.monomial(ONE, pivots[i][1], pivots[i][1] + 1)
        basis[i] = v
    final_order = exact_order + known_order
    basis = [_exact([x if x.order >= 1 else TruncSeries.zero(1) for x in v], final_order) for v in basis]
    return Lattice(p, shift, basis, pivots, known_order)


def _common(L1, L2):
    m = max(L1.shift, L2.shift)
    return L1.rescaled(m), L2.rescaled(m)


def _prepare(L, v, shift):
    if shift is None:
        shift = L.shift
    if shift > L.shift:
        L = L.rescaled(shift)
    elif shift < L.shift:
        v = [x.shift(L.shift - shift) for x in v]
    return L, v


def contains(L, v, shift=None):
    """``v`` (in ``b**shift``-scaled coordinates, default ``L.shift``) lies in ``L``."""
    L, v = _prepare(L, v, shift)
    K = L.K
    low = min(x.order for x in v)
    if low < K:
        raise InsufficientPrecision("vector known too coarsely to test membership", needed=K)
    v = [TruncSeries(x.coeffs[:K], K).extend(K + 1) if K > 0 else TruncSeries.zero(1) for x in v]
    return L._member_exact(v)


def coordinates(L, v, shift=None):
    """Coefficients ``q`` with ``v = sum(q_i * basis_i)``, or ``None`` when ``v`` is not in ``L``.

    Coefficients are known modulo ``b**(N - K)`` where N is the known order of v.
    """
    L, v = _prepare(L, v, shift)
    N = min(x.order for x in v)
    if N - L.K < 1:
        raise InsufficientPrecision("vector known too coarsely for coordinates", needed=L.K + 1)
    ok, qs = L._reduce([x.extend(N + L.work_order) for x in v])
    if not ok:
        # the tail beyond N is unknown: reduce modulo b**K before deciding
        if not contains(L, v):
            return None
        raise InsufficientPrecision("ambiguous coordinates", needed=N + 1)
    out = []
    for q in qs:
        n = min(q.order, N - L.K)
        out.append(q.truncate(n) if n >= 1 else TruncSeries.zero(1))
    return out


def lattice_sum(L1, L2):
    A, B = _common(L1, L2)
    order = max(A.work_order, B.work_order)
    gens = A.generators(order) + B.generators(order)
    return echelonize(gens, A.ambient_rank, A.shift, min(L1.known_order, L2.known_order))


def lattice_equal(L1, L2):
    A, B = _common(L1, L2)
    if A.pivots != B.pivots:
        return False
    for v, w in zip(A.basis, B.basis):
        for x, y in zip(v, w):
            n = max(x.polynomial_degree(), y.polynomial_degree()) + 1
            if n and not (x.extend(max(n, x.order)).coeffs[:n] == y.extend(max(n, y.order)).coeffs[:n]):
                return False
    return True


def is_sublattice(small, big):
    A, B = _common(small, big)
    return all(B._member_exact(_exact(v, B.work_order + A.work_order)) for v in A.basis)


def index_dim(L_big, L_small):
    """``dim_C(L_big / L_small)``; the valuation of the transition determinant."""
    A, B = _common(L_big, L_small)
    if not is_sublattice(B, A):
        raise NotASublattice("second lattice is not contained in the first")
    return sum(B.degrees()) - sum(A.degrees())
