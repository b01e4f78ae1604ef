"""Generalized inverses of even-order complex tensors under the Einstein product."""

from .core import (
    DenseTensor,
    GroupedShape,
    add,
    approx_eq,
    conj_transpose,
    einstein_product,
    frobenius_norm,
    identity,
    max_abs_diff,
    rel_residual,
    scale,
    sub,
    zeros,
)
from .errors import (
    EinverseError,
    FactorizationMismatch,
    NonFiniteEntry,
    NotSquare,
    NumericalFailure,
    ParseError,
    ShapeMismatch,
    Singular,
)
from .pinv import (
    PenroseReport,
    RankPolicy,
    SvdInfo,
    fold,
    mp_inverse,
    mp_inverse_info,
    ordinary_inverse,
    unfold,
    verify_penrose,
)
from .product import (
    Factorization,
    LawId,
    LawReport,
    b_tensor,
    c_tensor,
    check_b_c_cross,
    check_coincidence,
    check_y_decomposition,
    identity_factorization,
    mp_from_factorization,
    product_mp,
    product_mp_involution,
    triple_rol_check,
    two_factor_corollary,
    two_factor_mp,
    verify_product_penrose,
)
from .tensorfile import load_tensor, save_tensor

__version__ = "0.1.0"

__all__ = [
    "DenseTensor",
    "GroupedShape",
    "add",
    "approx_eq",
    "conj_transpose",
    "einstein_product",
    "frobenius_norm",
    "identity",
    "max_abs_diff",
    "rel_residual",
    "scale",
    "sub",
    "zeros",
    "EinverseError",
    "FactorizationMismatch",
    "NonFiniteEntry",
    "NotSquare",
    "NumericalFailure",
    "ParseError",
    "ShapeMismatch",
    "Singular",
    "PenroseReport",
    "RankPolicy",
    "SvdInfo",
    "fold",
    "mp_inverse",
    "mp_inverse_info",
    "ordinary_inverse",
    "unfold",
    "verify_penrose",
    "Factorization",
    "LawId",
    "LawReport",
    "b_tensor",
    "c_tensor",
    "check_b_c_cross",
    "check_coincidence",
    "check_y_decomposition",
    "identity_factorization",
    "mp_from_factorization",
    "product_mp",
    "product_mp_involution",
    "triple_rol_check",
    "two_factor_corollary",
    "two_factor_mp",
    "verify_product_penrose",
    "load_tensor",
    "save_tensor",
    "__version__",
]
