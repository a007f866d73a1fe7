import logging

import numpy as np
from scipy.optimize import minimize

from ..core.linalg import psd_factor
from ..core.numerics import RANK_TOL
from ..core.operators import Parity, build_theta
from ..core.sampling import complex_gaussian, sample_rng
from ..core.states import DensityMatrix
from ..errors import SizeError, UnsupportedParityError, UnsupportedRankError
from ..tangles.models import RootPair

log = logging.getLogger(__name__)

MAX_ROOF_QUBITS = 4


def _average_two_term(pair: np.ndarray, theta: np.ndarray, chi: np.ndarray) -> np.ndarray:
    c, s, phase = np.cos(theta), np.sin(theta), np.exp(1j * chi)
    t11, t12, t22 = pair[0, 0], pair[0, 1], pair[1, 1]
    first = c * c * t11 + 2.0 * c * s * phase * t12 + s * s * phase * phase * t22
    second = s * s * t11 - 2.0 * c * s * phase * t12 + c * c * phase * phase * t22
    return np.abs(first) + np.abs(second)


def _isometry(params: np.ndarray) -> np.ndarray:
    raw = (params[:6] + 1j * params[6:]).reshape(3, 2)
    q, _ = np.linalg.qr(raw)
    return q


def _average_isometry(pair: np.ndarray, params: np.ndarray) -> float:
    u = _isometry(params)
    return float(np.sum(np.abs(np.diag(u @ pair @ u.T))))


def _refine(pair: np.ndarray, start: np.ndarray, sign: float) -> float:
    result = minimize(
        lambda angles: sign * float(_average_two_term(pair, angles[0], angles[1])),
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
    )
    return sign * float(result.fun)


def _three_term(pair: np.ndarray, restarts: int, seed: int) -> tuple[float, float]:
    lowest, highest = np.inf, -np.inf
    for index in range(restarts):
        start = complex_gaussian(sample_rng(seed, index), 6)
        x0 = np.concatenate([start.real, start.imag])
        for sign in (1.0, -1.0):
            result = minimize(
                lambda params, s=sign: s * _average_isometry(pair, params),
                x0,
                method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 20000},
            )
            value = sign * float(result.fun)
            lowest, highest = min(lowest, value), max(highest, value)
    return lowest, highest


def convex_roof_bruteforce(
    rho: DensityMatrix,
    grid_points: int = 721,
    three_term: bool = False,
    restarts: int = 8,
    seed: int = 0,
) -> RootPair:
    """Search for the minimal and maximal average tangle over decompositions of a rank <= 2 state."""
    if rho.k % 2:
        raise UnsupportedParityError(f"Roofs are searched for an even number of parties, got {rho.k}.")
    if rho.k > MAX_ROOF_QUBITS:
        raise SizeError(f"Roof search is limited to k <= {MAX_ROOF_QUBITS}, got {rho.k}.")
    if rho.rank(RANK_TOL) > 2:
        raise UnsupportedRankError("Brute-force roofs are only searched for states of rank <= 2.")
    theta_op = build_theta(rho.k, Parity.EVEN).entries
    w = psd_factor(rho.entries)
    if w.shape[1] == 1:
        value = float(abs(w[:, 0] @ theta_op @ w[:, 0]))
        return RootPair(convex=value, concave=value)
    pair = w.T @ theta_op @ w

    thetas = np.linspace(0.0, np.pi, grid_points)
    chis = np.linspace(0.0, 2.0 * np.pi, grid_points)
    grid = _average_two_term(pair, thetas[:, None], chis[None, :])
    low_at = np.unravel_index(np.argmin(grid), grid.shape)
    high_at = np.unravel_index(np.argmax(grid), grid.shape)
    convex = min(float(grid[low_at]), _refine(pair, np.array([thetas[low_at[0]], chis[low_at[1]]]), 1.0))
    concave = max(float(grid[high_at]), _refine(pair, np.array([thetas[high_at[0]], chis[high_at[1]]]), -1.0))
    log.debug("Two-term roof search: convex %.12g, concave %.12g.", convex, concave)

    if three_term:
        lowest, highest = _three_term(pair, restarts, seed)
        convex, concave = min(convex, lowest), max(concave, highest)
        log.debug("Three-term roof search: convex %.12g, concave %.12g.", lowest, highest)
    return RootPair(convex=max(convex, 0.0), concave=max(concave, convex, 0.0))
