"""Finite jets ``E / b^N E``, the determination bound, and jet isomorphisms.

A C[[b]]-linear map ``phi(e_i) = sum_j P_ij e'_j`` commutes with ``a`` iff

    M_E P = P M_E' + b^2 P'

which is linear in the coefficients of P and graded by the b-degree.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import linalg as la
from .abmodule import change_basis, is_simple_pole
from .coefficients import ONE, ZERO, TruncSeries, gq
from .errors import (
    InsufficientPrecision,
    LiftNotFound,
    LiftNotUnique,
    NotSimplePole,
    ShapeMismatch,
)
from .kernels import nullspace, rref

D_EXACT = 6


@dataclass(frozen=True)
class Jet:
    rank: int
    order: int
    matrix: tuple

    def __eq__(self, other):
        return (isinstance(other, Jet) and self.rank == other.rank and self.order == other.order
                and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.rank, self.order, self.matrix))


def jet(E, N):
    if N > E.known_order:
        raise InsufficientPrecision(f"jet of order {N} from a module known mod b^{E.known_order}",
                                    needed=N)
    mat = tuple(tuple(x.truncate(N) for x in row) for row in E.matrix)
    return Jet(E.rank, N, mat)


def determination_bound(E):
    """``or(E) + L(E) + rank(E) + 1``."""
    from .invariants import regularity_order, widths

    return regularity_order(E) + widths(E).width + E.rank + 1


# -- the intertwining system ---------------------------------------------------------


def _coeff_mats(E, N):
    return [la.smat_coeff(E.matrix, k) for k in range(N)]


def _var(k, i, j, p):
    return (k * p + i) * p + j


def intertwiner_rows(A, B, p, N, lo=0):
    """Sparse equations ``(M_A P - P M_B - b^2 P')_t = 0`` for ``t < N``.

    ``A``/``B`` are lists of coefficient matrices; the returned rows use the
    variable numbering of :func:`_var` for degrees ``0..N-1``.  Equations of
    degree below ``lo`` are skipped.
    """
    rows = []
    for t in range(lo, N):
        for i in range(p):
            for j in range(p):
                row = {}
                for s in range(t + 1):
                    k = t - s
                    As, Bs = A[s], B[s]
                    # (A_s P_k)_ij = sum_h A_s[i][h] P_k[h][j]
                    for h in range(p):
                        c = As[i][h]
                        if c:
                            v = _var(k, h, j, p)
                            row[v] = row.get(v, ZERO) + c
                    # (P_k B_s)_ij = sum_h P_k[i][h] B_s[h][j]
                    for h in range(p):
                        c = Bs[h][j]
                        if c:
                            v = _var(k, i, h, p)
                            row[v] = row.get(v, ZERO) - c
                if t >= 2:
                    v = _var(t - 1, i, j, p)
                    row[v] = row.get(v, ZERO) - (t - 1)
                row = {v: c for v, c in row.items() if c}
                if row:
                    rows.append(row)
    return rows


def _vec_to_smat(vec, p, N):
    return [[TruncSeries([vec.get(_var(k, i, j, p), ZERO) for k in range(N)], N) for j in range(p)]
            for i in range(p)]


def intertwines(E, F, P, N):
    """Exact check of ``M_E P = P M_F + b^2 P'`` modulo ``b^N``."""
    Pn = la.smat_truncate(P, N)
    lhs = la.smat_mul(la.smat_truncate(E.matrix, N), Pn)
    rhs = la.smat_mul(Pn, la.smat_truncate(F.matrix, N))
    if N >= 2:
        dP = [[x.derivative().shift(2) for x in row] for row in Pn]
        rhs = la.smat_add(rhs, dP)
    return la.smat_equal(lhs, rhs, N)


@dataclass(frozen=True)
class JetIsoResult:
    status: str  # "Iso", "NotIso" or "UndecidedRandomized"
    P: object = None
    order: int = 0
    trials: int = 0
    certified: bool = True
    solution_dim: int = 0

    @property
    def is_iso(self):
        return self.status == "Iso"

    def __bool__(self):
        return self.is_iso


def jet_isomorphism(E, F, N, seed=0, trials=24, d_exact=D_EXACT):
    """Decide whether ``E/b^N E`` and ``F/b^N F`` are isomorphic."""
    if E.rank != F.rank:
        return JetIsoResult("NotIso", order=N)
    if N > E.known_order or N > F.known_order:
        raise InsufficientPrecision("jet order exceeds the known order",
                                    needed=N)
    p = E.rank
    A, B = _coeff_mats(E, N), _coeff_mats(F, N)
    if A == B:
        return JetIsoResult("Iso", la.smat_identity(p, N), N, solution_dim=-1)
    rows = intertwiner_rows(A, B, p, N)
    sols = nullspace(rows, N * p * p)
    # projections to P(0) and an independent subset of the solutions
    proj = [[[v.get(_var(0, i, j, p), ZERO) for j in range(p)] for i in range(p)] for v in sols]
    flat = [{i * p + j: m[i][j] for i in range(p) for j in range(p) if m[i][j]} for m in proj]
    chosen, seen = [], []
    for idx, f in enumerate(flat):
        if not f:
            continue
        basis, _ = rref(seen + [f], p * p)
        if len(basis) > len(chosen):
            chosen.append(idx)
            seen.append(f)
    d = len(chosen)
    if d == 0:
        return JetIsoResult("NotIso", order=N, solution_dim=0)

    def combo(cs):
        return [[sum((c * proj[k][i][j] for c, k in zip(cs, chosen) if c), ZERO) for j in range(p)]
                for i in range(p)]

    def witness(cs):
        vec = {}
        for c, k in zip(cs, chosen):
            if c:
                for var, x in sols[k].items():
                    vec[var] = vec.get(var, ZERO) + c * x
        return _vec_to_smat(vec, p, N)

    rng = random.Random(seed)
    for _ in range(trials):
        cs = [gq(rng.randint(-9, 9)) for _ in range(d)]
        if la.det(combo(cs)):
            return JetIsoResult("Iso", witness(cs), N, trials, solution_dim=d)
    if d <= d_exact:
        for cs in itertools.product(range(p + 1), repeat=d):
            cs = [gq(c) for c in cs]
            if la.det(combo(cs)):
                return JetIsoResult("Iso", witness(cs), N, trials, solution_dim=d)
        return JetIsoResult("NotIso", order=N, trials=trials, solution_dim=d)
    return JetIsoResult("UndecidedRandomized", order=N, trials=trials, certified=False, solution_dim=d)


# -- lifting ------------------------------------------------------------------------


@dataclass(frozen=True)
class Lift:
    P: list
    unique_order: int
    working_order: int
    agreement_order: int


def _constrained_solve(rows, P0, p, T, n):
    """Solve the intertwining rows with degrees ``< n`` pinned to ``P0``."""
    off = n * p * p
    nfree = (T - n) * p * p
    fixed = {}
    for k in range(n):
        for i in range(p):
            for j in range(p):
                fixed[_var(k, i, j, p)] = P0[i][j].coeffs[k]
    lin = []
    for row in rows:
        r = {}
        rhs = ZERO
        for v, c in row.items():
            if v < off:
                x = fixed[v]
                if x:
                    rhs = rhs - c * x
            else:
                r[v - off] = c
        if not r:
            if rhs:
                return None
            continue
        if rhs:
            r[nfree] = rhs
        lin.append(r)
    basis, pivots = rref(lin, nfree + 1)
    if nfree in basis:
        return None
    sol = {v: x for v, x in fixed.items() if x}
    for c in pivots:
        x = basis[c].get(nfree, ZERO)
        if x:
            sol[c + off] = x
    # degrees touched by a homogeneous solution are not determined
    hom = [{v: c for v, c in r.items() if v < nfree} for r in lin]
    lowest = T
    for vec in nullspace([r for r in hom if r], nfree):
        for var in vec:
            lowest = min(lowest, (var + off) // (p * p))
    return sol, lowest


def lift_jet_isomorphism(E, F, phi, N=None, target=None):
    """Extend a jet isomorphism ``phi`` (``JetIsoResult`` or matrix) to a full one.

    The intertwining system is solved modulo ``b^T``, T the common known
    order, with the coefficients of ``phi`` pinned in low degrees.  A jet
    isomorphism may carry free top-degree coefficients that no genuine
    isomorphism extends (``c.b^(N-1)`` for ``E_lambda``), so the pinned prefix
    is shortened until the system is consistent; ``agreement_order`` records
    how much of ``phi`` survives.  Truncation also leaves spurious freedom near
    degree T, so the result is cut to the prefix on which every homogeneous
    solution vanishes (``unique_order``).
    """
    P0 = phi.P if isinstance(phi, JetIsoResult) else phi
    if N is None:
        N = phi.order if isinstance(phi, JetIsoResult) else la.smat_order(P0)
    p = E.rank
    if F.rank != p or len(P0) != p:
        raise ShapeMismatch("ranks differ")
    if not la.det(la.smat_coeff(P0, 0)):
        raise LiftNotFound("the jet map is not invertible")
    T = min(E.known_order, F.known_order)
    if T <= N:
        raise InsufficientPrecision("lifting needs modules known beyond the jet order", needed=N + 1)
    rows = intertwiner_rows(_coeff_mats(E, T), _coeff_mats(F, T), p, T)
    for n in range(N, 0, -1):
        found = _constrained_solve(rows, P0, p, T, n)
        if found is not None:
            break
    else:
        raise LiftNotFound("no isomorphism extends the constant term of the jet")
    sol, unique = found
    if unique <= N:
        raise LiftNotUnique(f"lift is not unique beyond order {N}")
    if target is not None:
        if unique < target:
            raise LiftNotUnique(f"lift unique only modulo b^{unique}, wanted b^{target}")
        unique = target
    P = _vec_to_smat(sol, p, T)
    return Lift(la.smat_truncate(P, unique), unique, T, n)


# -- rank one ------------------------------------------------------------------------


def rank1_normal_form(E):
    """``(lambda, u)`` with ``change_basis(E, [[u]])`` equal to ``lambda.b``.

    For ``a.e = b S(b) e`` the unit u solves ``u'/u = (S(0) - S)/b``, which is
    the successive-correction scheme carried out degree by degree.
    """
    if E.rank != 1:
        raise ShapeMismatch("rank-one module expected")
    if not is_simple_pole(E):
        raise NotSimplePole("a.e is not in b.E")
    v = E.matrix[0][0]
    N = E.known_order
    if N < 2:
        raise InsufficientPrecision("need the b-linear coefficient", needed=2)
    S = v.coeffs[1:]
    lam = S[0]
    G = [-c for c in S[1:]]  # (S(0) - S) / b
    w = [ONE]
    for n in range(N - 1):
        acc = ZERO
        for i in range(n + 1):
            if i < len(w) and n - i < len(G) and G[n - i]:
                acc = acc + w[i] * G[n - i]
        w.append(acc / (n + 1))
    u = TruncSeries(w[:N], N)
    return lam, u


def normalize_rank1(E):
    """The module ``E_lambda`` straightened from a rank-one simple-pole E."""
    lam, u = rank1_normal_form(E)
    return lam, change_basis(E, [[u]])


__all__ = [
    "Jet",
    "JetIsoResult",
    "Lift",
    "jet",
    "determination_bound",
    "jet_isomorphism",
    "lift_jet_isomorphism",
    "rank1_normal_form",
    "normalize_rank1",
    "intertwines",
    "D_EXACT",
]


