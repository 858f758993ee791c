"""Inner loops: Cauchy products and sparse row reduction over Q(i).

This file is the pure-Python fallback and also the source compiled by Cython
into ``abmod._ckernels`` (see ``_ckernels.pyx``).  Keep it free of anything
Cython cannot compile.
"""

from abmod.coefficients import ONE, ZERO


def cauchy_product(a, b, n):
    out = []
    for k in range(n):
        acc = ZERO
        for i in range(k + 1):
            x = a[i]
            if x:
                y = b[k - i]
                if y:
                    acc = acc + x * y
        out.append(acc)
    return out


def series_reciprocal(a, n):
    inv0 = a[0].inverse()
    out = [inv0]
    for k in range(1, n):
        acc = ZERO
        for i in range(1, k + 1):
            x = a[i]
            if x:
                acc = acc + x * out[k - i]
        out.append(-(acc * inv0))
    return out


def rref(rows, ncols):
    """Reduced row echelon form of sparse rows (dicts column -> nonzero scalar).

    Returns ``(basis, pivots)`` where ``basis[c]`` is the reduced row whose
    pivot (normalised to one) sits in column ``c`` and ``pivots`` lists the
    pivot columns in increasing order.  Zero rows are dropped.
    """
    basis = {}
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            # eliminate known pivots lazily: pick smallest column
            c = min(r)
            if c in basis:
                f = r[c]
                prow = basis[c]
                for cc, vv in prow.items():
                    nv = r.get(cc, ZERO) - f * vv
                    if nv:
                        r[cc] = nv
                    else:
                        r.pop(cc, None)
                continue
            inv = r[c].inverse()
            r = {cc: vv * inv for cc, vv in r.items()}
            basis[c] = r
            break
    pivots = sorted(basis)
    # back substitution, highest pivot first
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        prow = basis[c]
        for j in range(i):
            d = pivots[j]
            other = basis[d]
            f = other.get(c)
            if f:
                for cc, vv in prow.items():
                    nv = other.get(cc, ZERO) - f * vv
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
    return basis, pivots


def nullspace(rows, ncols):
    """Basis (sparse dicts) of ``{x : row . x = 0 for every row}``."""
    basis, pivots = rref(rows, ncols)
    pivset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = {free: ONE}
        for c in pivots:
            f = basis[c].get(free)
            if f:
                v[c] = -f
        out.append(v)
    return out
