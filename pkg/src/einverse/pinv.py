"""Moore-Penrose inverse via unfolding + SVD, and Penrose-equation checks.

The unfolding sends a grouped tensor to the row_count x col_count matrix in
the canonical row-major order; it is a bijective algebra homomorphism, so a
tensor's Moore-Penrose inverse is the fold of its unfolding's pseudoinverse.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DenseTensor,
    GroupedShape,
    conj_transpose,
    einstein_product,
    rel_residual,
)
from .errors import NotSquare, NumericalFailure, ShapeMismatch, Singular


def unfold(a: DenseTensor) -> np.ndarray:
    """Matrix view of the tensor: rows = linearized row group, cols = col group."""
    return a.data.reshape(a.shape.row_count, a.shape.col_count)


def fold(matrix, shape: GroupedShape) -> DenseTensor:
    """Inverse of :func:`unfold` for the given grouped shape."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.shape != (shape.row_count, shape.col_count):
        raise ShapeMismatch(
            f"matrix {m.shape} does not fold into {shape} "
            f"({shape.row_count} x {shape.col_count})"
        )
    return DenseTensor(shape, m)


@dataclass(frozen=True)
class RankPolicy:
    """Rule for truncating singular values when forming a pseudoinverse.

    mode "relative": drop sigma <= value * sigma_max; value None means the
    standard max(rows, cols) * machine-epsilon cutoff.
    mode "absolute": drop sigma <= value.
    mode "fixed_rank": keep exactly the leading `value` singular values,
    for reproducing degenerate cases where noise might flip a rank decision.
    """

    mode: str = "relative"
    value: float | int | None = None

    def __post_init__(self):
        if self.mode not in ("relative", "absolute", "fixed_rank"):
            raise ValueError(f"unknown rank policy mode {self.mode!r}")
        if self.mode == "fixed_rank":
            if self.value is None or int(self.value) != self.value or self.value < 0:
                raise ValueError("fixed_rank needs a nonnegative integer value")
        elif self.value is not None and not self.value > 0:
            raise ValueError(f"{self.mode} threshold must be positive")


@dataclass(frozen=True)
class SvdInfo:
    """Spectrum diagnostics from one truncated-SVD pseudoinverse."""

    singular_values: tuple[float, ...]
    cutoff: float
    rank: int
    borderline: bool


def _svd(matrix: np.ndarray):
    try:
        return np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc


def _truncation(s: np.ndarray, shape: tuple[int, int], policy: RankPolicy):
    """Return (rank, cutoff, borderline) for the singular values `s`."""
    smax = float(s[0]) if s.size else 0.0
    if policy.mode == "fixed_rank":
        rank = min(int(policy.value), s.size)
        cutoff = float(s[rank]) if rank < s.size else 0.0
        borderline = bool(
            0 < rank < s.size and s[rank] > 0 and s[rank - 1] <= 10.0 * s[rank]
        )
        return rank, cutoff, borderline
    if policy.mode == "absolute":
        cutoff = float(policy.value)
    else:
        rel = policy.value if policy.value is not None else max(shape) * np.finfo(float).eps
        cutoff = float(rel) * smax
    rank = int(np.sum(s > cutoff))
    borderline = bool(cutoff > 0 and np.any((s >= cutoff / 10.0) & (s <= cutoff * 10.0)))
    return rank, cutoff, borderline


def _svd_pinv(matrix: np.ndarray, policy: RankPolicy):
    u, s, vh = _svd(matrix)
    rank, cutoff, borderline = _truncation(s, matrix.shape, policy)
    inv_s = np.zeros_like(s)
    inv_s[:rank] = 1.0 / s[:rank]
    pinv = (vh.conj().T * inv_s) @ u.conj().T
    info = SvdInfo(tuple(float(x) for x in s), cutoff, rank, borderline)
    return pinv, info


def mp_inverse_info(a: DenseTensor, policy: RankPolicy | None = None):
    """Moore-Penrose inverse plus the SVD diagnostics behind it."""
    policy = policy or RankPolicy()
    pinv, info = _svd_pinv(unfold(a), policy)
    return fold(pinv, a.shape.transposed), info


def mp_inverse(a: DenseTensor, policy: RankPolicy | None = None) -> DenseTensor:
    """The unique tensor X with A*X*A = A, X*A*X = X and A*X, X*A Hermitian.

    Computed as the fold of the truncated-SVD pseudoinverse of the unfolding.
    Defined for every tensor; the zero tensor maps to the zero tensor of the
    transposed shape.
    """
    return mp_inverse_info(a, policy)[0]


@dataclass(frozen=True)
class PenroseReport:
    """Relative residuals of the four defining pseudoinverse equations."""

    residual_1: float  # A*X*A vs A
    residual_2: float  # X*A*X vs X
    residual_3: float  # A*X vs its conjugate transpose
    residual_4: float  # X*A vs its conjugate transpose
    tolerance: float
    passed: bool

    @property
    def residuals(self) -> tuple[float, float, float, float]:
        return (self.residual_1, self.residual_2, self.residual_3, self.residual_4)


def verify_penrose(a: DenseTensor, x: DenseTensor, tol: float = 1e-10) -> PenroseReport:
    """Measure how well `x` satisfies the four defining equations for `a`."""
    if x.shape != a.shape.transposed:
        raise ShapeMismatch(
            f"candidate shape {x.shape} is not the transpose of {a.shape}"
        )
    ax = einstein_product(a, x)
    xa = einstein_product(x, a)
    r1 = rel_residual(einstein_product(ax, a), a)
    r2 = rel_residual(einstein_product(xa, x), x)
    r3 = rel_residual(conj_transpose(ax), ax)
    r4 = rel_residual(conj_transpose(xa), xa)
    passed = all(r <= tol for r in (r1, r2, r3, r4))
    return PenroseReport(r1, r2, r3, r4, tol, passed)


def ordinary_inverse(a: DenseTensor, policy: RankPolicy | None = None) -> DenseTensor:
    """Two-sided inverse for square grouped shapes.

    Raises Singular when the smallest singular value falls at or below the
    policy's truncation threshold.
    """
    if a.shape.row_dims != a.shape.col_dims:
        raise NotSquare(f"ordinary inverse needs row dims == col dims, got {a.shape}")
    policy = policy or RankPolicy()
    m = unfold(a)
    u, s, vh = _svd(m)
    rank, cutoff, _ = _truncation(s, m.shape, policy)
    if rank < m.shape[0]:
        raise Singular(
            f"unfolding is singular: rank {rank} < {m.shape[0]} "
            f"(smallest sigma {s[-1]:.3e}, cutoff {cutoff:.3e})"
        )
    inv = (vh.conj().T * (1.0 / s)) @ u.conj().T
    return fold(inv, a.shape.transposed)
