"""Covariance constraints as linear systems, and their joint nullspace.

A candidate Kraus family {A_1..A_K} is stored as one stacked vector of
length K*d^2 (row-major within each operator).  For every group generator g
the covariance condition

    D2(g)^dag A_k D1(g) = sum_l Omega(g)_{kl} A_l

is linear in that vector; its matrix is assembled here.  For the Lie case
the condition is the commutator analogue

    D1(T) A_k - A_k D2(T) = sum_l Omega(T)_{lk} A_l

for each algebra basis element T in (L+, L-, Lz).  Note the column-index
contraction on Omega in the Lie case: with the descending-m basis used by
the catalog this is exactly what makes ladder covariance reproduce the
standard spherical-tensor component relations.  Channels covariant for the
full (infinite) group follow by linearity/exponentiation, so the generator
systems are enough.

The joint nullspace over all generators is computed from one SVD of the
vertically stacked system; each basis vector reshapes back to a K-tuple of
d x d operators via :func:`vec_to_kraus`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, LengthMismatch
from .groups import Irrep
from .reps import Rep, RepLabel

DEFAULT_TOL_KERNEL = 1e-10


@dataclass(frozen=True)
class CovarianceSystem:
    """One (K d^2) x (K d^2) matrix per group generator."""

    matrices: tuple[np.ndarray, ...]
    K: int
    d: int


@dataclass(frozen=True)
class KernelFamily:
    """Orthonormal basis of the joint nullspace: a CP-map family.

    ``basis`` has shape (K*d^2, n_params); column j is the j-th basis vector.
    ``labels`` records the (D1, D2, Omega-index) triple the family belongs to.
    """

    basis: np.ndarray
    K: int
    d: int
    labels: tuple[RepLabel, RepLabel, int] | None = None

    @property
    def n_params(self) -> int:
        return self.basis.shape[1]

    def vector_at(self, coeffs: np.ndarray) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (self.n_params,):
            raise LengthMismatch(
                f"expected {self.n_params} coefficients, got shape {coeffs.shape}"
            )
        return self.basis @ coeffs

    def kraus_at(self, coeffs: np.ndarray) -> list[np.ndarray]:
        return vec_to_kraus(self.vector_at(coeffs), self.K, self.d)


def vec_to_kraus(v: np.ndarray, K: int, d: int) -> list[np.ndarray]:
    """Split a length-K*d^2 vector into K row-major d x d matrices."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != K * d * d:
        raise LengthMismatch(f"expected length {K * d * d}, got {v.size}")
    return [chunk.copy() for chunk in v.reshape(K, d, d)]


def kraus_to_vec(matrices) -> np.ndarray:
    """Inverse of :func:`vec_to_kraus` (row-major concatenation)."""
    return np.concatenate([np.asarray(m, dtype=complex).reshape(-1) for m in matrices])


def build_discrete_system(D1: Rep, D2: Rep, omega: Irrep) -> CovarianceSystem:
    """Linear system enforcing D2(g)^dag A_k D1(g) = sum_l Omega_kl(g) A_l."""
    if D1.dim != D2.dim:
        raise DimMismatch(f"input/output rep dims differ: {D1.dim} vs {D2.dim}")
    d, K = D1.dim, omega.dim
    mats = []
    for g1, g2, om in zip(
        D1.generator_matrices, D2.generator_matrices, omega.generator_matrices
    ):
        # Row-major vec turns X -> M X N into (M kron N^T) vec X, so the
        # conjugation block for each Kraus slot is D2^dag kron D1^T.
        block = np.kron(g2.conj().T, g1.T)
        mats.append(np.kron(np.eye(K), block) - np.kron(om, np.eye(d * d)))
    return CovarianceSystem(matrices=tuple(mats), K=K, d=d)


def build_lie_system(D1: Rep, D2: Rep, omega: Irrep) -> CovarianceSystem:
    """Linear system enforcing D1(T) A_k - A_k D2(T) = sum_l Omega(T)_lk A_l
    for each algebra basis element T."""
    if D1.dim != D2.dim:
        raise DimMismatch(f"input/output rep dims differ: {D1.dim} vs {D2.dim}")
    d, K = D1.dim, omega.dim
    mats = []
    for t1, t2, om in zip(
        D1.generator_matrices, D2.generator_matrices, omega.generator_matrices
    ):
        block = np.kron(t1, np.eye(d)) - np.kron(np.eye(d), t2.T)
        mats.append(np.kron(np.eye(K), block) - np.kron(om.T, np.eye(d * d)))
    return CovarianceSystem(matrices=tuple(mats), K=K, d=d)


def _gauge_fix_columns(basis: np.ndarray) -> np.ndarray:
    """Rotate each column's phase so its first significant entry is real > 0."""
    fixed = basis.copy()
    for j in range(fixed.shape[1]):
        col = fixed[:, j]
        mags = np.abs(col)
        top = mags.max()
        if top == 0.0:
            continue
        lead = int(np.argmax(mags > 1e-8 * top))
        phase = col[lead] / abs(col[lead])
        fixed[:, j] = col * np.conj(phase)
    return fixed


def joint_nullspace(
    system: CovarianceSystem,
    tol_kernel: float = DEFAULT_TOL_KERNEL,
    labels: tuple[RepLabel, RepLabel, int] | None = None,
) -> KernelFamily:
    """Orthonormal basis of the intersection of all generators' kernels.

    The per-generator systems are stacked vertically and factored once;
    singular values below ``tol_kernel`` times the largest count as zero.
    An empty basis is a valid result and means no covariant CP map exists
    for these labels.
    """
    n = system.K * system.d * system.d
    stacked = np.vstack(system.matrices)
    if not np.any(stacked):
        # Unconstrained family: every K-tuple of operators is covariant.
        basis = np.eye(n, dtype=complex)
    else:
        _, svals, vh = np.linalg.svd(stacked)
        rank = int(np.sum(svals > tol_kernel * svals[0]))
        basis = _gauge_fix_columns(vh[rank:].conj().T)
    return KernelFamily(basis=basis, K=system.K, d=system.d, labels=labels)


def covariance_residual(kraus, D1: Rep, D2: Rep, omega: Irrep, kind: str) -> float:
    """Worst-case Frobenius defect of the covariance relations for ``kraus``."""
    worst = 0.0
    gens = zip(D1.generator_matrices, D2.generator_matrices, omega.generator_matrices)
    for t1, t2, om in gens:
        for k in range(omega.dim):
            if kind == "discrete":
                lhs = t2.conj().T @ kraus[k] @ t1
                rhs = sum(om[k, l] * kraus[l] for l in range(omega.dim))
            else:
                lhs = t1 @ kraus[k] - kraus[k] @ t2
                rhs = sum(om[l, k] * kraus[l] for l in range(omega.dim))
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst
