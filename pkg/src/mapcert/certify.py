"""Irreducibility machinery and sufficiency certificates.

Two certificates are issued, both one-sided: a full weak span certifies
optimality, and a full strong span plus irreducibility on the image
certifies exposedness.  When the test quantity falls short the verdict is
Inconclusive, never a refutation: the conditions are sufficient only, and
there are exposed maps (rank-deficient conjugations) that fail them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CrossCheckError, DimensionMismatch, EmptyZeroSet
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    image_projector,
    kernel_basis,
    numerical_rank,
    span_dimension,
)
from .maps import MapOperator, apply, hermitian_basis
from .zeros import ZeroSet, strong_span_dim, weak_span_dim

__all__ = [
    "OPTIMAL",
    "EXPOSED",
    "CERTIFIED",
    "INCONCLUSIVE",
    "Certificate",
    "FunctionalWitness",
    "IntertwinerSpace",
    "commutant_basis",
    "is_irreducible",
    "is_irreducible_on_image",
    "intertwiner_space",
    "certify_optimal",
    "certify_exposed",
    "exposedness_functional",
]

OPTIMAL = "Optimal"
EXPOSED = "Exposed"
CERTIFIED = "Certified"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Certificate:
    """Outcome of one sufficiency check.

    ``measured_dim`` / ``required_dim`` are the span dimension found and the
    dimension the condition demands; Certified requires exact equality (and,
    for the Exposed claim, irreducibility on the image).  The note records
    the standing caveats of the check, chiefly that positivity of the input
    is only ever verified heuristically.
    """

    claim: str
    verdict: str
    measured_dim: int
    required_dim: int
    irreducible_on_image: bool | None
    tolerances: ToleranceConfig
    conditional_note: str

    def __post_init__(self):
        if self.claim not in (OPTIMAL, EXPOSED):
            raise ValueError(f"unknown claim {self.claim!r}")
        if self.verdict not in (CERTIFIED, INCONCLUSIVE):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.measured_dim > self.required_dim:
            raise ValueError("measured dimension exceeds the required dimension")
        if self.verdict == CERTIFIED:
            if self.measured_dim != self.required_dim:
                raise ValueError("Certified verdict with a dimension shortfall")
            if self.claim == EXPOSED and not self.irreducible_on_image:
                raise ValueError("Certified Exposed verdict without irreducibility")

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED


@dataclass(frozen=True)
class FunctionalWitness:
    """Linear functional f(Psi) = sum_i <h_i| Psi(a_i) |h_i> over zero pairs.

    f vanishes on the map the pairs came from and is nonnegative on every
    positive map, so f = 0 is a supporting hyperplane through that map.
    """

    generators: list[tuple[np.ndarray, np.ndarray]]
    value_at: Callable[[MapOperator], float]


@dataclass(frozen=True)
class IntertwinerSpace:
    """Real-linear solution space of X Phi(a) = Phi(a) X^H over Hermitian a."""

    real_dimension: int
    basis: list[np.ndarray]


def commutant_basis(phi: MapOperator, tol: ToleranceConfig = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis of {X : [Phi(a), X] = 0 for all a}.

    Hermitian generators suffice since they span the domain.  The commutators
    stack into an n^2 m^2 by m^2 linear system whose numerical kernel is the
    commutant; it always contains the identity, so the result is nonempty.
    """
    m = phi.dim_out
    eye = np.eye(m, dtype=complex)
    blocks = []
    for b in hermitian_basis(phi.dim_in):
        g = apply(phi, b)
        # row-major vec: vec(GX - XG) = (G kron 1 - 1 kron G^T) vec(X)
        blocks.append(np.kron(g, eye) - np.kron(eye, g.T))
    cols = kernel_basis(np.vstack(blocks), tol)
    return [cols[:, k].reshape(m, m) for k in range(cols.shape[1])]


def is_irreducible(phi: MapOperator, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when only scalars commute with the image of the map."""
    return len(commutant_basis(phi, tol)) == 1


def is_irreducible_on_image(phi: MapOperator, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when the commutant compresses to scalars on Im Phi(1).

    For maps with full-rank unit image this coincides with is_irreducible;
    otherwise commutant elements are compressed by the projector onto the
    image of Phi(1) before the span test.
    """
    basis = commutant_basis(phi, tol)
    p = image_projector(apply(phi, np.eye(phi.dim_in, dtype=complex)), tol)
    compressed = [(p @ x @ p).ravel() for x in basis]
    return span_dimension(compressed, tol) == 1


def _real_kernel(system: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    # Float SVD: a complex SVD of a real-cast system may phase-rotate kernel
    # vectors, which would scramble the real/imaginary split downstream.
    u, s, vh = np.linalg.svd(np.asarray(system, dtype=float))
    if s.size == 0 or s[0] <= 0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol.rank_rel_tol * s[0]))
    return vh[rank:].T


def intertwiner_space(phi: MapOperator, tol: ToleranceConfig = DEFAULT_TOL) -> IntertwinerSpace:
    """Solve X Phi(a) = Phi(a) X^H for all Hermitian a.

    The conjugation on X makes the solution set a real vector space, not a
    complex one, so the system is linearized over real and imaginary parts
    separately and solved as a real kernel problem.  For any map whose
    commutant is trivial the answer is the real line through the identity.
    """
    m = phi.dim_out
    gens = [apply(phi, b) for b in hermitian_basis(phi.dim_in)]

    def defect_column(x):
        rows = []
        for g in gens:
            d = x @ g - g @ x.conj().T
            rows.append(d.real.ravel())
            rows.append(d.imag.ravel())
        return np.concatenate(rows)

    columns = []
    for part in (1.0, 1j):
        for i in range(m):
            for j in range(m):
                e = np.zeros((m, m), dtype=complex)
                e[i, j] = part
                columns.append(defect_column(e))
    null = _real_kernel(np.column_stack(columns), tol)
    mats = []
    for k in range(null.shape[1]):
        coeffs = null[:, k]
        mats.append((coeffs[: m * m] + 1j * coeffs[m * m :]).reshape(m, m))
    return IntertwinerSpace(real_dimension=len(mats), basis=mats)


def _check_compatible(phi: MapOperator, zs: ZeroSet):
    if (zs.dim_in, zs.dim_out) != (phi.dim_in, phi.dim_out):
        raise DimensionMismatch(
            f"zero set is {zs.dim_in}x{zs.dim_out}, map is {phi.dim_in}x{phi.dim_out}"
        )


_POSITIVITY_NOTE = (
    "sufficient condition only; positivity of the input map is assumed "
    "(verified heuristically at best, never proven)"
)


def certify_optimal(phi: MapOperator, zs: ZeroSet, tol: ToleranceConfig = DEFAULT_TOL) -> Certificate:
    """Certified when the weak vectors of the zero set span all of C^n (x) C^m.

    A shortfall yields Inconclusive: the map may still be optimal, the
    spanning condition is not necessary.
    """
    _check_compatible(phi, zs)
    measured = weak_span_dim(zs, tol)
    required = phi.dim_in * phi.dim_out
    verdict = CERTIFIED if measured == required else INCONCLUSIVE
    return Certificate(
        claim=OPTIMAL,
        verdict=verdict,
        measured_dim=measured,
        required_dim=required,
        irreducible_on_image=None,
        tolerances=tol,
        conditional_note=_POSITIVITY_NOTE,
    )


def certify_exposed(phi: MapOperator, zs: ZeroSet, tol: ToleranceConfig = DEFAULT_TOL) -> Certificate:
    """Certified when the strong span fills the kernel ceiling and the map is
    irreducible on its image.

    The ceiling is n^2 m - rank Phi(1): strong vectors always lie in the
    kernel of the operator a (x) h -> Phi(a) h, whose rank equals the rank of
    Phi(1).  A measured dimension above the ceiling is impossible for genuine
    zeros and raises CrossCheckError instead of certifying.
    """
    _check_compatible(phi, zs)
    n, m = phi.dim_in, phi.dim_out
    measured = strong_span_dim(zs, tol)
    unit_rank = numerical_rank(apply(phi, np.eye(n, dtype=complex)), tol)
    required = n * n * m - unit_rank
    if measured > required:
        raise CrossCheckError(
            f"strong span {measured} exceeds the kernel ceiling {required}; "
            "the zero set contains non-zeros or the rank tolerance is off"
        )
    irreducible = is_irreducible_on_image(phi, tol)
    verdict = CERTIFIED if (measured == required and irreducible) else INCONCLUSIVE
    note = _POSITIVITY_NOTE
    if unit_rank < m:
        note += (
            "; Phi(1) is rank deficient, so irreducibility was tested on the "
            "compression to its image"
        )
    return Certificate(
        claim=EXPOSED,
        verdict=verdict,
        measured_dim=measured,
        required_dim=required,
        irreducible_on_image=irreducible,
        tolerances=tol,
        conditional_note=note,
    )


def exposedness_functional(zs: ZeroSet) -> FunctionalWitness:
    """Supporting-hyperplane functional built from the zero pairs.

    Uses every kept pair (the admission rule already reduced them to a
    spanning subset).  value_at returns the real part of the sum; the
    imaginary part is eigensolver dust since each term is a quadratic form
    of a Hermitian matrix.
    """
    if not zs.pairs:
        raise EmptyZeroSet("cannot build a functional from an empty zero set")
    generators = [(np.outer(p.x.conj(), p.x), p.h) for p in zs.pairs]

    def value_at(psi: MapOperator) -> float:
        if (psi.dim_in, psi.dim_out) != (zs.dim_in, zs.dim_out):
            raise DimensionMismatch(
                f"functional is {zs.dim_in}x{zs.dim_out}, map is {psi.dim_in}x{psi.dim_out}"
            )
        total = 0.0
        for a, h in generators:
            total += float(np.real(h.conj() @ (apply(psi, a) @ h)))
        return total

    return FunctionalWitness(generators=generators, value_at=value_at)
