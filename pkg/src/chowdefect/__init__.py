"""Finite-field rank certificates for secant varieties of Chow varieties.

The package verifies, over a small prime field, the base-case rank
statements behind the nondefectivity of secant varieties of Chow
varieties of cubics and of quaternary forms, and re-checks the
resulting certificates independently.
"""

from .finite_calculus import (
    NonIntegralValue,
    Quasipolynomial,
    StepDifference,
    backward_diff,
    binomial,
    make_proof_functions,
    newton_reconstruct,
    qp_eval,
)
from .gfpoly import (
    BudgetExceeded,
    DimensionMismatch,
    EmptyProduct,
    HomPoly,
    IndexOutOfRange,
    LinearForm,
    PrimeField,
    monomial_count,
    monomial_rank,
    monomial_unrank,
    mul_linear,
    naive_product_oracle,
    product_of_linear_forms,
)
from .gflinalg import DenseMatrix, dump_text, from_columns, load_text, rank_mod_p, row_select
from .chow import (
    ChowPoint,
    DomainError,
    SecantProblem,
    chow_quadric_dim,
    expdim_secant,
    tangent_columns,
    terracini_rank,
)
from .bolattice import (
    LatticeConfig,
    NegativeCount,
    PointPlan,
    Statement,
    VerificationOutcome,
    a_i,
    abundance,
    base_case_schedule,
    build_degree_induction,
    build_dimension_induction,
    cubics_config,
    induction_arithmetic_check,
    point_plan,
    quaternary_config,
    verify_statement,
)
from .certificate import Certificate, ParseError, emit_text, parse, reverify

__version__ = "0.1.0"
