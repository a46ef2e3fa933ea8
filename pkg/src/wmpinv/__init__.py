"""Weighted Moore-Penrose / generalized LM-inverses by column partitioning.

The package computes the weighted Moore-Penrose inverse of rectangular
matrices over exact rationals, float64, and univariate rational functions,
using two equivalent column-sweep recursions, plus an independent exact
oracle and text/CLI tooling around them.
"""

from .errors import (
    DegenerateDelta,
    DegenerateWeight,
    DimensionMismatch,
    DivisionByZero,
    IndexOutOfRange,
    ParseError,
    SingularMatrix,
    UnsupportedField,
    WeightNotSPD,
    WmpinvError,
)
from .fields import (
    FIELDS_BY_NAME,
    FLOAT64,
    RATFUN,
    RATIONAL,
    Field,
    Polynomial,
    RatFun,
    approx_zero,
    poly_gcd,
    ratfun_normalize,
)
from .matrix import (
    Matrix,
    SpdCertificate,
    border_column,
    conj_transpose,
    corner,
    fro_norm,
    gauss_inverse,
    hstack,
    is_spd,
    leading_principal,
    matmul,
    max_abs_gap,
    take_col,
    take_cols,
    vstack,
)
from .recursion import (
    BorderedInverseState,
    IterationScratch,
    RecursionConfig,
    WeightPartition,
    bordered_inverse,
    bordered_inverse_init,
    bordered_inverse_step,
    bordering,
    init_first_column,
    lm_udwadia,
    prefix_inverses,
    sweep_with_trace,
    udwadia_step,
    wang_step,
    wmp_wang,
)
from .verify import (
    EquivalenceReport,
    PenroseResiduals,
    equivalence_check,
    full_rank_factorize,
    penrose_residuals,
    residual_threshold,
    wmp_oracle,
)
from .matio import (
    GenSpec,
    format_ratfun,
    format_scalar,
    parse_matrix,
    parse_ratfun_expr,
    random_matrix,
    random_poly,
    random_spd,
    serialize_matrix,
)

__version__ = "0.1.0"
