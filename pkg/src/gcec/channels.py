"""Channel utilities: Kraus sets, Choi matrices, validation, transforms.

Conventions: operators act on a d-dimensional system; the Choi matrix is
C = (1/d) sum_k |a_k><a_k| with |a_k> the row-major vectorization of the
k-th Kraus operator, so C is trace-one PSD for a trace-preserving set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NotUnitary, SchemaError

KRAUS_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class KrausSet:
    """K complex d x d Kraus operators."""

    matrices: tuple[np.ndarray, ...]

    @property
    def K(self) -> int:
        return len(self.matrices)

    @property
    def d(self) -> int:
        return self.matrices[0].shape[0]

    @staticmethod
    def from_matrices(matrices) -> "KrausSet":
        mats = tuple(np.asarray(m, dtype=complex) for m in matrices)
        if not mats:
            raise DimMismatch("a Kraus set needs at least one operator")
        d = mats[0].shape[0]
        for m in mats:
            if m.shape != (d, d):
                raise DimMismatch(f"Kraus operators must all be {d}x{d}, got {m.shape}")
        return KrausSet(matrices=mats)

    def tp_residual(self) -> float:
        xi = sum(m.conj().T @ m for m in self.matrices)
        return float(np.linalg.norm(xi - np.eye(self.d)))


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    def check(self, tol: float = 1e-12) -> None:
        m = self.matrix
        if np.linalg.norm(m - m.conj().T) > tol:
            raise DimMismatch("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > tol:
            raise DimMismatch("density matrix trace is not 1")
        if np.linalg.eigvalsh(m)[0] < -tol:
            raise DimMismatch("density matrix has a negative eigenvalue")


@dataclass(frozen=True)
class ChoiMatrix:
    matrix: np.ndarray
    d: int


def apply(kraus: KrausSet, rho: DensityMatrix) -> DensityMatrix:
    """Channel action sum_k A_k rho A_k^dag."""
    if kraus.d != rho.d:
        raise DimMismatch(f"channel dim {kraus.d} != state dim {rho.d}")
    out = sum(m @ rho.matrix @ m.conj().T for m in kraus.matrices)
    return DensityMatrix(matrix=out)


def choi(kraus: KrausSet) -> ChoiMatrix:
    """Choi matrix (1/d) sum_k vec(A_k) vec(A_k)^dag with row-major vec."""
    d = kraus.d
    c = np.zeros((d * d, d * d), dtype=complex)
    for m in kraus.matrices:
        v = m.reshape(-1)
        c += np.outer(v, v.conj())
    return ChoiMatrix(matrix=c / d, d=d)


def choi_rank(kraus: KrausSet, tol: float = 1e-8) -> int:
    """Minimal number of Kraus operators: rank of the Choi matrix."""
    evals = np.linalg.eigvalsh(choi(kraus).matrix)
    top = evals[-1]
    if top <= 0.0:
        return 0
    return int(np.sum(evals > tol * top))


def conjugate(kraus: KrausSet, U: np.ndarray, V: np.ndarray, tol: float = 1e-10) -> KrausSet:
    """Unitary transport {A_k} -> {U A_k V} (channel-equivalence move)."""
    for name, mat in (("U", U), ("V", V)):
        mat = np.asarray(mat)
        if mat.shape != (kraus.d, kraus.d):
            raise DimMismatch(f"{name} must be {kraus.d}x{kraus.d}")
        if np.linalg.norm(mat.conj().T @ mat - np.eye(kraus.d)) > tol:
            raise NotUnitary(f"{name} is not unitary within {tol}")
    return KrausSet.from_matrices([U @ m @ V for m in kraus.matrices])


# ---------------------------------------------------------------------------
# JSON serialization: complex numbers as [re, im] pairs throughout
# ---------------------------------------------------------------------------


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_json(obj, shape: tuple[int, int] | None = None) -> np.ndarray:
    try:
        m = np.array([[complex(z[0], z[1]) for z in row] for row in obj])
    except (TypeError, IndexError, ValueError) as exc:
        raise SchemaError(f"malformed complex matrix: {exc}") from None
    if shape is not None and m.shape != shape:
        raise SchemaError(f"expected matrix shape {shape}, got {m.shape}")
    return m


def kraus_to_dict(kraus: KrausSet) -> dict:
    return {
        "d": kraus.d,
        "K": kraus.K,
        "kraus": [matrix_to_json(m) for m in kraus.matrices],
    }


def kraus_from_dict(obj) -> KrausSet:
    if not isinstance(obj, dict):
        raise SchemaError(f"expected a Kraus-set object, got {type(obj).__name__}")
    for key in ("d", "K", "kraus"):
        if key not in obj:
            raise SchemaError(f"Kraus-set object missing key {key!r}")
    d, K = obj["d"], obj["K"]
    if not (isinstance(d, int) and isinstance(K, int) and d >= 1 and K >= 1):
        raise SchemaError("Kraus-set 'd' and 'K' must be positive integers")
    if not isinstance(obj["kraus"], list) or len(obj["kraus"]) != K:
        raise SchemaError(f"expected {K} Kraus matrices")
    mats = [matrix_from_json(m, shape=(d, d)) for m in obj["kraus"]]
    return KrausSet.from_matrices(mats)
