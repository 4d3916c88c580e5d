"""High-precision checks of L(f, 1) for weight-3 Jacobi and Borwein theta products."""

from .catalog import CatalogEntry, RhsExpression, catalog, eval_expr, get_entry
from .errors import (
    DivergenceError,
    DomainError,
    PatternError,
    PrecisionError,
    TruncationError,
    UnsupportedEntryError,
    WrongFamilyError,
)
from .hyperg import (
    HypEvalReport,
    HypParams,
    Method,
    contiguous_check,
    cubic_transform_check,
    euler_integral_eval,
    gauss_sum,
    pfq_at_one,
    pfq_series,
    watson_sum,
)
from .lvalue import (
    LValueReport,
    PullbackResult,
    alpha_pullback,
    l1_mellin,
    rhs_eval,
    series_iv_oracle,
    verify_entry,
    verify_remark,
)
from .qseries import QExpansion, qs_add, qs_coeff, qs_mul, qs_pow, qs_scale_arg
from .special import (
    GammaBracket,
    PrecisionContext,
    default_context,
    gamma,
    gamma_bracket_eval,
    multiplication_check,
    pochhammer,
    reflection_check,
)
from .theta import (
    BORWEIN_A,
    BORWEIN_B,
    BORWEIN_C,
    JACOBI2,
    JACOBI3,
    JACOBI4,
    ThetaFactor,
    ThetaKind,
    ThetaProductForm,
    borwein_theta_qexp,
    form_numeric,
    form_qexp,
    jacobi_theta_qexp,
    theta_numeric,
)

__version__ = "0.1.0"
