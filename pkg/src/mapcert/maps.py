"""Linear maps between matrix algebras, stored in block (Choi) form.

A map Phi from n x n to m x m complex matrices is represented by the nm x nm
block matrix C = sum_ij E_ij (x) Phi(E_ij), where E_ij are matrix units of the
input algebra.  This is the unnormalized convention: it differs from the
maximally-entangled-state convention by an overall factor of n.  The factor is
documented here once and is inert everywhere else in the package, because all
rank and span decisions downstream are scale-free.

Evaluation recovers the map as Phi(a) = Tr_in[C (a^T (x) 1_m)].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroMap, ZeroOperator
from .linalg import DEFAULT_TOL, ToleranceConfig, as_matrix

__all__ = [
    "MapOperator",
    "NormalForm",
    "PositivityReport",
    "hermitian_basis",
    "apply",
    "from_apply_table",
    "from_conjugation",
    "cp_map_from_kraus",
    "adjoint_map",
    "unital_normalization",
    "is_completely_positive",
    "is_positive_heuristic",
    "identity_map",
    "transpose_map",
    "trace_map",
    "dephasing_map",
]


@dataclass(frozen=True, eq=False)
class MapOperator:
    """A linear map between matrix algebras in block (Choi) form.

    Immutable value object: the stored block matrix is set read-only, so a
    MapOperator can be shared freely across threads.
    """

    dim_in: int
    dim_out: int
    choi: np.ndarray

    def __post_init__(self):
        n, m = self.dim_in, self.dim_out
        if not (isinstance(n, int) and isinstance(m, int) and n >= 1 and m >= 1):
            raise DimensionMismatch("dim_in and dim_out must be positive integers")
        choi = as_matrix(self.choi)
        if choi.shape != (n * m, n * m):
            raise DimensionMismatch(
                f"block matrix has shape {choi.shape}, expected {(n * m, n * m)}"
            )
        herm_gap = np.linalg.norm(choi - choi.conj().T)
        if herm_gap > DEFAULT_TOL.residual_rel_tol * max(np.linalg.norm(choi), herm_gap):
            raise ValueError("block matrix is not Hermitian within tolerance")
        choi = choi.copy()
        choi.setflags(write=False)
        object.__setattr__(self, "choi", choi)


@dataclass(frozen=True, eq=False)
class NormalForm:
    """Unital normal form Phi(a) = bridge^H Phi_1(a) bridge.

    ``unital_part`` maps into the image of Phi(1), represented concretely on
    C^image_dim; ``bridge`` is the image_dim x dim_out factor connecting it
    back to the original output space.
    """

    bridge: np.ndarray
    unital_part: MapOperator
    image_dim: int


@dataclass(frozen=True)
class PositivityReport:
    """Outcome of the sampling-plus-descent positivity heuristic."""

    passed: bool
    worst_value: float
    worst_vector: np.ndarray
    samples: int


def hermitian_basis(n: int) -> list[np.ndarray]:
    """Standard Hermitian basis of the n x n matrices (n^2 elements)."""
    basis = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[i, j] = s[j, i] = 1.0
            basis.append(s)
            t = np.zeros((n, n), dtype=complex)
            t[i, j] = -1.0j
            t[j, i] = 1.0j
            basis.append(t)
    return basis


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def choi_spectral_scale(phi: MapOperator) -> float:
    """Largest singular value of the block matrix; the reference scale."""
    return float(np.linalg.norm(phi.choi, 2))


def apply(phi: MapOperator, a) -> np.ndarray:
    """Evaluate Phi(a) = Tr_in[C (a^T (x) 1)] for an n x n argument a."""
    a = as_matrix(a)
    n, m = phi.dim_in, phi.dim_out
    if a.shape != (n, n):
        raise DimensionMismatch(f"argument has shape {a.shape}, expected {(n, n)}")
    blocks = phi.choi.reshape(n, m, n, m)
    return np.einsum("ikjl,ij->kl", blocks, a)


def from_apply_table(images) -> MapOperator:
    """Build a MapOperator from the n^2 images Phi(E_ij), row-major in (i, j)."""
    images = [as_matrix(img) for img in images]
    if not images:
        raise DimensionMismatch("empty image table")
    n = round(len(images) ** 0.5)
    if n * n != len(images):
        raise DimensionMismatch(f"image table has {len(images)} entries, not a square")
    m = images[0].shape[0]
    for img in images:
        if img.shape != (m, m):
            raise DimensionMismatch("image matrices must share one square shape")
    blocks = np.zeros((n, m, n, m), dtype=complex)
    for i in range(n):
        for j in range(n):
            blocks[i, :, j, :] = images[i * n + j]
    return MapOperator(n, m, blocks.reshape(n * m, n * m))


def from_conjugation(v, transposed: bool = False) -> MapOperator:
    """Conjugation map a -> V^H a V, or a -> V^H a^T V when transposed.

    V is n x m, mapping the n-dimensional input space of column vectors to
    the m-dimensional output space by conjugation.
    """
    v = as_matrix(v)
    if not np.any(v):
        raise ZeroOperator("conjugation by the zero operator is not a map")
    n, m = v.shape
    images = []
    for i in range(n):
        for j in range(n):
            if transposed:
                images.append(np.outer(v[j].conj(), v[i]))
            else:
                images.append(np.outer(v[i].conj(), v[j]))
    return from_apply_table(images)


def cp_map_from_kraus(kraus) -> MapOperator:
    """The completely positive map a -> sum_k K a K^H from m x n operators."""
    ops = [as_matrix(k) for k in kraus]
    if not ops:
        raise ValueError("at least one operator is required")
    m, n = ops[0].shape
    for k in ops[1:]:
        if k.shape != (m, n):
            raise DimensionMismatch("all operators must share one shape")
    images = []
    for i in range(n):
        for j in range(n):
            images.append(sum(np.outer(k[:, i], k[:, j].conj()) for k in ops))
    return from_apply_table(images)


def adjoint_map(phi: MapOperator) -> MapOperator:
    """Adjoint Phi* under the trace pairing Tr(b^H Phi(a)) = Tr(Phi*(b)^H a)."""
    n, m = phi.dim_in, phi.dim_out
    blocks = phi.choi.reshape(n, m, n, m)
    adj_blocks = blocks.transpose(1, 0, 3, 2).conj()
    return MapOperator(m, n, adj_blocks.reshape(n * m, n * m))


def unital_normalization(phi: MapOperator, tol: ToleranceConfig = DEFAULT_TOL) -> NormalForm:
    """Factor Phi through a unital map on the image of Phi(1).

    With A = Phi(1) and Q an orthonormal eigenbasis of its image, the unital
    part is Phi_1(a) = D^{-1/2} Q^H Phi(a) Q D^{-1/2} and the bridge is
    D^{1/2} Q^H, so that bridge^H Phi_1(a) bridge = Phi(a).  Meaningful for
    maps that are positive (the caller's obligation, checked heuristically
    elsewhere); a negative eigenvalue of A beyond tolerance is rejected.
    """
    n, m = phi.dim_in, phi.dim_out
    a = _hermitize(apply(phi, np.eye(n)))
    eigvals, eigvecs = np.linalg.eigh(a)
    top = float(eigvals[-1])
    if top <= 0 or not np.any(eigvals > tol.rank_rel_tol * max(abs(eigvals[0]), top)):
        raise ZeroMap("the map sends the identity to zero")
    if eigvals[0] < -tol.rank_rel_tol * top:
        raise ValueError("Phi(1) has a negative eigenvalue; map is not positive")
    keep = eigvals > tol.rank_rel_tol * top
    lam = eigvals[keep]
    q = eigvecs[:, keep]
    k = int(lam.shape[0])
    inv_sqrt = 1.0 / np.sqrt(lam)
    images = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            images.append((inv_sqrt[:, None] * (q.conj().T @ apply(phi, e) @ q)) * inv_sqrt[None, :])
    unital_part = from_apply_table(images)
    bridge = np.sqrt(lam)[:, None] * q.conj().T
    return NormalForm(bridge=bridge, unital_part=unital_part, image_dim=k)


def is_completely_positive(phi: MapOperator, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Positive semidefiniteness of the block matrix, relative threshold."""
    eigvals = np.linalg.eigvalsh(_hermitize(phi.choi))
    scale = float(np.max(np.abs(eigvals))) if eigvals.size else 0.0
    return bool(eigvals[0] >= -tol.rank_rel_tol * scale)


def is_positive_heuristic(
    phi: MapOperator,
    samples: int = 64,
    tol: ToleranceConfig = DEFAULT_TOL,
    seed: int = 0,
) -> PositivityReport:
    """Sampling-plus-descent check that Phi maps PSD matrices to PSD matrices.

    Minimizes the smallest eigenvalue of Phi(|y><y|) over random unit vectors
    y, then refines the worst sample by alternating eigenvector descent.  A
    certified "True" here is still heuristic: it can be fooled by maps whose
    negativity region is tiny, which is why certificates carry a conditional
    note.  The RNG seed is explicit so results are reproducible.
    """
    from .zeros import _alternating_descent  # deferred: zeros depends on maps

    if samples < 1:
        raise ValueError("samples must be at least 1")
    n = phi.dim_in
    rng = np.random.default_rng(seed)
    scale = choi_spectral_scale(phi)
    worst_value = np.inf
    worst_vector = None
    for _ in range(samples):
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        y /= np.linalg.norm(y)
        val = float(np.linalg.eigvalsh(_hermitize(apply(phi, np.outer(y, y.conj()))))[0])
        if val < worst_value:
            worst_value = val
            worst_vector = y
    adj = adjoint_map(phi)
    outcome = _alternating_descent(phi, adj, scale, tol, x0=worst_vector.conj())
    if outcome.value < worst_value:
        worst_value = float(outcome.value)
        worst_vector = outcome.x.conj()
    passed = worst_value >= -tol.residual_rel_tol * scale
    return PositivityReport(
        passed=passed,
        worst_value=worst_value,
        worst_vector=worst_vector,
        samples=samples,
    )


def identity_map(n: int) -> MapOperator:
    """Phi(a) = a on the n x n matrices."""
    return from_conjugation(np.eye(n))


def transpose_map(n: int) -> MapOperator:
    """Phi(a) = a^T on the n x n matrices."""
    return from_conjugation(np.eye(n), transposed=True)


def trace_map(n: int, m: int | None = None) -> MapOperator:
    """Phi(a) = Tr(a) 1_m, the completely depolarizing-to-identity map."""
    m = n if m is None else m
    images = []
    for i in range(n):
        for j in range(n):
            images.append((1.0 if i == j else 0.0) * np.eye(m, dtype=complex))
    return from_apply_table(images)


def dephasing_map(n: int) -> MapOperator:
    """Phi(a) = sum_i a_ii E_ii, the completely decohering map."""
    images = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            if i == j:
                e[i, i] = 1.0
            images.append(e)
    return from_apply_table(images)
