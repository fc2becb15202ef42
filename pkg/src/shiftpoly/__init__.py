"""Shift-operator calculus over prime fields."""

from .errors import *  # noqa: F401,F403
from .field import (
    EchelonBasis,
    FieldCtx,
    FpElem,
    FpMatrix,
    RrefResult,
    binom_mod_p,
    field_arith,
    is_prime,
    multi_binom,
    nullspace,
    rank,
    rref,
    solve,
)
from .poly import (
    DirectionalFrame,
    Poly,
    count_monomials,
    directional_hasse,
    divrem_univariate,
    evaluate,
    hasse_derivative,
    is_maximal_monomial,
    ordinary_derivative,
    poly_arith,
    shift_poly,
)
from .shiftop import (
    BoundExhausted,
    Degree,
    DeltaBasis,
    DerivExpansion,
    PointMultiset,
    ShiftCombo,
    affine_transform,
    annihilate_hyperplane,
    apply,
    certified_bounds,
    construct_1d,
    deg_lower_bound,
    deg_set,
    deg_upper_bound,
    degree_and_leading,
    delta_space,
    expand,
    multiply,
    reduce,
)

__version__ = "0.1.0"
