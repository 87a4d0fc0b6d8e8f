"""Twist functors and categorical entropy on the derived discrete algebras Lambda(p, q, r)."""

from .entropy import (
    EntropyReport,
    EntropySeries,
    closed_form_entropy,
    closed_form_poly_entropy,
    compare_report,
    estimate_entropy,
    estimate_entropy_support,
    estimate_poly_entropy,
    ext_distance,
    iterate_series,
)
from .exactla import QMatrix, nullspace, rank, solve
from .homotopy import (
    ChainMap,
    ProjComplex,
    cohomology_dims,
    cone,
    direct_sum,
    hom_basis_maps,
    hom_dim,
    is_isomorphic,
    minimize,
    module_complex,
    shift,
)
from .presentation import AlgebraData, GentlePresentation, ParameterError, build_lambda, compose, hom_basis
from .twist import (
    ExceptionalCycle,
    FunctorWord,
    apply_word,
    big_F,
    build_X,
    build_Y,
    inverse_twist,
    parse_word,
    twist,
    verify_exceptional,
)

__version__ = "0.1.0"
