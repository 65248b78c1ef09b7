"""Tolerance-aware dense complex linear algebra on a single SVD backbone.

Every rank, kernel, span, and pseudoinverse decision in the package routes
through this module, so one relative threshold (``rank_rel_tol`` times the
largest singular value) governs them all.  Thresholds are relative throughout:
rescaling a matrix never changes a rank decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, KernelInclusionViolated

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "SVDResult",
    "as_matrix",
    "svd",
    "numerical_rank",
    "kernel_basis",
    "generalized_inverse",
    "image_projector",
    "kernel_inclusion_factor",
    "span_dimension",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Every numerical threshold used by the package, in one place.

    rank_rel_tol: singular values at or below ``rank_rel_tol * sigma_max``
        count as zero.
    residual_rel_tol: acceptable relative size of residuals (zero tests,
        reconstructions, projector leakage).
    convergence_tol: relative objective-stall threshold for iterative
        searches.
    max_iters: iteration cap for those searches.
    """

    rank_rel_tol: float = 1e-8
    residual_rel_tol: float = 1e-9
    convergence_tol: float = 1e-12
    max_iters: int = 500

    def __post_init__(self):
        for name in ("rank_rel_tol", "residual_rel_tol", "convergence_tol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise ValueError(f"{name} must be a strictly positive number")
        if not (isinstance(self.max_iters, int) and self.max_iters >= 1):
            raise ValueError("max_iters must be a positive integer")

    def scaled(self, factor):
        """Copy with rank_rel_tol multiplied by ``factor`` (stability probes)."""
        return ToleranceConfig(
            rank_rel_tol=self.rank_rel_tol * factor,
            residual_rel_tol=self.residual_rel_tol,
            convergence_tol=self.convergence_tol,
            max_iters=self.max_iters,
        )


DEFAULT_TOL = ToleranceConfig()


def as_matrix(entries) -> np.ndarray:
    """Coerce to a 2-d complex ndarray, rejecting non-finite entries."""
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class SVDResult:
    """Full singular value decomposition M = U @ diag(s) @ V^H.

    ``left_vectors`` and ``right_vectors`` have orthonormal columns
    (square unitary factors); ``singular_values`` is nonincreasing.
    """

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        rows = self.left_vectors.shape[0]
        cols = self.right_vectors.shape[0]
        sigma = np.zeros((rows, cols))
        k = self.singular_values.shape[0]
        sigma[:k, :k] = np.diag(self.singular_values)
        return self.left_vectors @ sigma @ self.right_vectors.conj().T


def svd(matrix) -> SVDResult:
    """Full SVD of a complex matrix."""
    m = as_matrix(matrix)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    return SVDResult(u, s, vh.conj().T)


def _rank_from_singular_values(s: np.ndarray, tol: ToleranceConfig) -> int:
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel_tol * s[0]))


def numerical_rank(matrix, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Count of singular values above the relative threshold."""
    m = as_matrix(matrix)
    s = np.linalg.svd(m, compute_uv=False)
    return _rank_from_singular_values(s, tol)


def kernel_basis(matrix, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the numerical kernel, as matrix columns.

    Always satisfies numerical_rank(M) + returned column count = cols(M).
    """
    m = as_matrix(matrix)
    result = svd(m)
    rank = _rank_from_singular_values(result.singular_values, tol)
    return result.right_vectors[:, rank:]


def generalized_inverse(matrix, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the shared rank cutoff."""
    m = as_matrix(matrix)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    rank = _rank_from_singular_values(s, tol)
    inv = np.zeros_like(s)
    inv[:rank] = 1.0 / s[:rank]
    return (vh.conj().T * inv) @ u.conj().T


def image_projector(matrix, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the column space at the working rank."""
    m = as_matrix(matrix)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    rank = _rank_from_singular_values(s, tol)
    u = u[:, :rank]
    return u @ u.conj().T


def kernel_inclusion_factor(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Solve A = X B given ker(B) subseteq ker(A).

    The precondition is verified on an orthonormal kernel basis of B; the
    worst offending vector is reported if it fails.  The factor is
    X = A B^+, which satisfies XB = A and rank(X) = rank(A) whenever the
    inclusion holds.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"A has shape {a.shape}, B has shape {b.shape}")
    sigma_a = float(np.linalg.norm(a, 2)) if a.size else 0.0
    kb = kernel_basis(b, tol)
    if kb.shape[1]:
        residuals = np.linalg.norm(a @ kb, axis=0)
        worst = int(np.argmax(residuals))
        if residuals[worst] > tol.residual_rel_tol * sigma_a:
            raise KernelInclusionViolated(
                "ker(B) is not contained in ker(A): worst kernel vector has "
                f"|A v| = {residuals[worst]:.3e} against allowance "
                f"{tol.residual_rel_tol * sigma_a:.3e}",
                worst_vector=kb[:, worst],
                worst_residual=float(residuals[worst]),
            )
    return a @ generalized_inverse(b, tol)


def span_dimension(vectors, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Dimension of the span of a collection of equal-length vectors.

    Accepts a sequence of 1-d arrays (or a 2-d array whose columns are the
    vectors).  Empty input has span dimension 0.
    """
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        matrix = vectors
    else:
        vectors = [np.asarray(v, dtype=complex).ravel() for v in vectors]
        if not vectors:
            return 0
        lengths = {v.shape[0] for v in vectors}
        if len(lengths) != 1:
            raise DimensionMismatch(f"vectors have mixed lengths {sorted(lengths)}")
        matrix = np.column_stack(vectors)
    return numerical_rank(matrix, tol)
