import logging
from typing import Literal

import numpy as np
import numpy.typing as npt

from ..errors import NumericContractError, NumericFailure, SizeError
from .numerics import EIGEN_HERMITIAN_TOL, PSD_TOL

log = logging.getLogger(__name__)

EigenMethod = Literal["lapack", "jacobi"]

MAX_EIGEN_DIM = 64


def _check_hermitian(matrix: npt.ArrayLike) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NumericContractError(f"Expected a square matrix, got shape {m.shape}.")
    if m.shape[0] > MAX_EIGEN_DIM:
        raise SizeError(f"Eigensolves are limited to dimension {MAX_EIGEN_DIM}, got {m.shape[0]}.")
    deviation = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if deviation > EIGEN_HERMITIAN_TOL:
        raise NumericContractError(f"Matrix is not Hermitian, max |M - M^H| = {deviation:.3e}.")
    return 0.5 * (m + m.conj().T)


def jacobi_eigenvalues(matrix: npt.ArrayLike, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations."""
    a = _check_hermitian(matrix).copy()
    n = a.shape[0]
    scale = float(np.linalg.norm(a)) or 1.0
    # rounding keeps off-diagonal entries near n eps of the scale
    threshold = max(tol, n * float(np.finfo(np.float64).eps)) * scale
    off = 0.0
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude <= threshold / n:
                    continue
                phase = apq / magnitude
                a[:, q] *= np.conj(phase)
                a[q, :] *= phase
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * magnitude)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
    else:
        raise NumericFailure("Jacobi sweeps did not converge", off / scale)
    return np.sort(np.diag(a).real)[::-1]


def hermitian_eigenvalues(matrix: npt.ArrayLike, method: EigenMethod = "lapack") -> np.ndarray:
    """Eigenvalues of a small Hermitian matrix."""
    if method == "jacobi":
        return jacobi_eigenvalues(matrix)
    return np.linalg.eigvalsh(_check_hermitian(matrix))[::-1]


def clamp_nonnegative(values: npt.ArrayLike, floor: float = PSD_TOL) -> np.ndarray:
    """Zero out negative rounding noise before square roots."""
    out = np.asarray(values, dtype=np.float64)
    if out.size and float(np.min(out)) < -floor:
        log.warning("Clamping negative value %.3e beyond the noise floor %.1e.", float(np.min(out)), floor)
    return np.clip(out, 0.0, None)


def psd_factor(rho: npt.ArrayLike, cutoff: float = 1e-12) -> np.ndarray:
    """Columns spanning the support of a PSD matrix, scaled so that ``W @ W^H == rho``."""
    weights, vectors = np.linalg.eigh(np.asarray(rho, dtype=np.complex128))
    support = weights > cutoff
    return vectors[:, support] * np.sqrt(weights[support])


def psd_sqrt(rho: npt.ArrayLike) -> np.ndarray:
    """Principal square root of a PSD matrix."""
    weights, vectors = np.linalg.eigh(np.asarray(rho, dtype=np.complex128))
    roots = np.sqrt(clamp_nonnegative(weights))
    return (vectors * roots) @ vectors.conj().T
