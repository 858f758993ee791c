"""Exact computations with regular (a,b)-modules.

An (a,b)-module is a free C[[b]]-module with an operator ``a`` satisfying
``ab - ba = b^2``.  This package works over the Gaussian rationals with
truncated b-adic series and implements saturation, the index and regularity
order, widths, Jordan-Hoelder exponents, Ext dimensions, and the decision and
lifting of isomorphisms from finite jets.
"""

from .abmodule import (
    AbModule,
    DirectSum,
    E,
    Ealpha,
    Elog,
    Epair,
    F,
    J,
    Rank3Example,
    Spectrum,
    apply_a,
    change_basis,
    construct_standard,
    direct_sum,
    dual,
    is_simple_pole,
    make_module,
    quotient_by_line,
    spectrum,
    submodule_module,
    twist,
)
from .coefficients import GaussianRational, TruncSeries, gq, parse_series, format_series
from .errors import AbModError
from .invariants import (
    alpha_invariant,
    biggest_simple_pole,
    index_delta,
    regularity_order,
    saturate,
    widths,
)
from .jets import (
    determination_bound,
    jet,
    jet_isomorphism,
    lift_jet_isomorphism,
    rank1_normal_form,
)
from .kernels import BACKEND
from .lattice import Lattice, contains, echelonize, index_dim, lattice_equal, lattice_sum
from .structure import (
    classify_rank2,
    cokernel_b_bound,
    ext1_via_dual,
    ext_dims,
    find_normal_line,
    jordan_holder,
    solve_eigenvector,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
