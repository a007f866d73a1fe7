"""
Tangle measures of pure and mixed qubit states.

Mixed even-party tangles follow the generalized Wootters construction: with R = rho Theta rho* Theta and
lambda_1 >= lambda_2 >= ... its eigenvalues, the convex roof is max(sqrt(lambda_1) - sum_i>1 sqrt(lambda_i), 0) and,
for rank two, the concave roof is sqrt(lambda_1) + sqrt(lambda_2). The nonzero eigenvalues of R are taken from the
Hermitian matrix W^H (Theta rho* Theta) W with rho = W W^H restricted to the support of rho.
"""

import logging
from typing import Iterable, Literal

import numpy as np

from ..core.linalg import EigenMethod, clamp_nonnegative, hermitian_eigenvalues, psd_factor
from ..core.numerics import MAX_TANGLE_QUBITS, RANK_TOL, SUPPORT_TOL
from ..core.operators import EPSILON, Parity, build_theta
from ..core.states import DensityMatrix, Ket, partial_trace
from ..errors import (
    ArityError,
    ConsistencyError,
    DomainError,
    InvalidStateError,
    InvalidSupportError,
    SizeError,
    UnsupportedParityError,
    UnsupportedRankError,
)
from .models import RootPair, TangleTuple

log = logging.getLogger(__name__)

RootMethod = Literal["eigen", "trace"]

K_TO_KM1_TOL = 1e-8

# Cayley hyperdeterminant as 12 signed products of four amplitudes
_HDET_COEFF = np.array([1, 1, 1, 1, -2, -2, -2, -2, -2, -2, 4, 4], dtype=np.float64)
_HDET_INDEX = np.array(
    [
        [0, 1, 2, 4, 0, 0, 0, 3, 3, 5, 0, 7],
        [0, 1, 2, 4, 7, 7, 7, 4, 4, 2, 6, 1],
        [7, 6, 5, 3, 3, 5, 6, 5, 6, 6, 5, 2],
        [7, 6, 5, 3, 4, 2, 1, 2, 1, 1, 3, 4],
    ]
)


def _require_parties(psi: Ket, n: int) -> Ket:
    if psi.n != n:
        raise ArityError(f"Expected a {n}-qubit state, got {psi.n} qubits.")
    return psi.require_normalized()


def one_tangle(psi: Ket, party: int) -> float:
    """
    1-tangle 2 sqrt(det rho_A) of one party against the rest.

    :param psi: Normalized ket.
    :param party: Party label.
    :return: Tangle in [0, 1].
    """
    psi.require_normalized()
    rho = partial_trace(psi, [party]).entries
    det = float((rho[0, 0] * rho[1, 1] - rho[0, 1] * rho[1, 0]).real)
    return float(2.0 * np.sqrt(max(det, 0.0)))


def one_tangles(psi: Ket) -> list[float]:
    return [one_tangle(psi, party) for party in range(psi.n)]


def wootters_roots(
    rho: DensityMatrix,
    conjugate: bool = True,
    method: RootMethod = "eigen",
    eigen: EigenMethod = "lapack",
) -> RootPair:
    """
    Convex and concave roof of the even-party tangle of a mixed state.

    :param rho: Density matrix on an even number of parties.
    :param conjugate: Use rho* in the flipped partner; ``False`` uses rho itself.
    :param method: ``eigen`` for the eigenvalue formula or ``trace`` for the rank-two trace formula.
    :param eigen: Eigensolver used by the eigenvalue formula.
    :return: The pair (convex, concave). The concave value is the tangle of assistance only for rank <= 2.
    """
    if rho.k % 2:
        raise UnsupportedParityError(f"Mixed tangles need an even number of parties, got {rho.k}.")
    theta = build_theta(rho.k, Parity.EVEN).entries
    partner = rho.entries.conj() if conjugate else rho.entries
    flipped = theta @ partner @ theta
    if method == "trace":
        if rho.rank(RANK_TOL) > 2:
            raise UnsupportedRankError("The trace formula only applies to states of rank <= 2.")
        r = rho.entries @ flipped
        trace_r = float(np.trace(r).real)
        trace_r2 = float(np.trace(r @ r).real)
        cross = np.sqrt(max(2.0 * (trace_r**2 - trace_r2), 0.0))
        return RootPair(
            convex=float(np.sqrt(max(trace_r - cross, 0.0))),
            concave=float(np.sqrt(max(trace_r + cross, 0.0))),
        )
    w = psd_factor(rho.entries)
    if w.shape[1] == 0:
        return RootPair(convex=0.0, concave=0.0)
    reduced = w.conj().T @ flipped @ w
    roots = np.sqrt(clamp_nonnegative(hermitian_eigenvalues(reduced, method=eigen)))
    convex = max(float(roots[0] - roots[1:].sum()), 0.0)
    return RootPair(convex=convex, concave=max(float(roots.sum()), convex))


def two_tangle(state: Ket | DensityMatrix, method: RootMethod = "eigen") -> float:
    """
    2-tangle of a two-party state.

    Pure states give 2|det| of the 2x2 amplitude matrix, mixed states the Wootters convex roof.

    :param state: Ket or density matrix on exactly two parties.
    :param method: Root formula for mixed input.
    :return: Tangle in [0, 1].
    """
    if isinstance(state, Ket):
        psi = _require_parties(state, 2)
        return float(2.0 * abs(np.linalg.det(psi.amplitudes.reshape(2, 2))))
    if state.k != 2:
        raise ArityError(f"2-tangles need two parties, got {state.k}.")
    return wootters_roots(state, method=method).convex


def two_tangle_assistance(rho: DensityMatrix) -> float:
    """
    Tangle of assistance sqrt(lambda_1) + sqrt(lambda_2) of a rank <= 2 two-party state.

    :param rho: Density matrix on two parties.
    :return: Concave roof of the 2-tangle.
    """
    if rho.k != 2:
        raise ArityError(f"2-tangles need two parties, got {rho.k}.")
    if rho.rank(RANK_TOL) > 2:
        raise UnsupportedRankError("The tangle of assistance is only available for rank <= 2.")
    return wootters_roots(rho).concave


def three_tangle(psi: Ket) -> float:
    """
    3-tangle sqrt(2 |psi psi eps^6 psi psi|) from the full Levi-Civita contraction.

    :param psi: Normalized 3-qubit ket.
    :return: Tangle in [0, 1].
    """
    tensor = _require_parties(psi, 3).tensor
    e = EPSILON
    contraction = np.einsum(
        "abc,def,ghk,lmn,ad,gl,bh,ck,em,fn->", tensor, tensor, tensor, tensor, e, e, e, e, e, e, optimize=True
    )
    return float(np.sqrt(2.0 * abs(contraction)))


def hyperdeterminant(psi: Ket) -> complex:
    """Cayley hyperdeterminant of the 2x2x2 amplitude tensor; the 3-tangle equals 2 sqrt(|hdet|)."""
    if psi.n != 3:
        raise ArityError(f"The hyperdeterminant is defined for 3 qubits, got {psi.n}.")
    a = psi.amplitudes
    products = a[_HDET_INDEX[0]] * a[_HDET_INDEX[1]] * a[_HDET_INDEX[2]] * a[_HDET_INDEX[3]]
    return complex(products @ _HDET_COEFF)


def k_tangle_pure(psi: Ket, parties: Iterable[int] | None = None) -> float:
    """
    k-tangle of a pure state on all of its k parties.

    Even k: |<psi*| Theta+ |psi>|. Odd k: sqrt(2 |<psi* psi*| Theta- |psi psi>|).

    :param psi: Normalized ket on exactly the parties of the subset.
    :param parties: Optional subset labels, only checked against the qubit count.
    :return: Tangle in [0, 1].
    """
    k = psi.n
    if parties is not None and len(set(parties)) != k:
        raise ArityError(f"The ket has {k} parties but the subset names {len(set(parties))}.")
    if k < 2:
        raise DomainError("k-tangles need at least two parties.")
    if k > MAX_TANGLE_QUBITS:
        raise SizeError(f"k-tangles are limited to k <= {MAX_TANGLE_QUBITS}, got {k}.")
    psi.require_normalized()
    if k % 2 == 0:
        theta = build_theta(k, Parity.EVEN).entries
        return float(abs(psi.amplitudes @ theta @ psi.amplitudes))
    doubled = np.kron(psi.amplitudes, psi.amplitudes)
    theta = build_theta(k, Parity.ODD).entries
    return float(np.sqrt(2.0 * abs(doubled @ theta @ doubled)))


def k_tangle_mixed(rho: DensityMatrix, conjugate: bool = True, method: RootMethod = "eigen") -> float:
    """
    Generalized Wootters convex roof of an even-party mixed state.

    :param rho: Density matrix on an even number k <= 6 of parties.
    :param conjugate: Use rho* in R (the default) or the literal rho.
    :param method: ``eigen`` or the rank-two ``trace`` formula.
    :return: Tangle in [0, 1].
    """
    if rho.k > MAX_TANGLE_QUBITS:
        raise SizeError(f"k-tangles are limited to k <= {MAX_TANGLE_QUBITS}, got {rho.k}.")
    return wootters_roots(rho, conjugate=conjugate, method=method).convex


def residual_tangle_ghz_block(block: DensityMatrix | np.ndarray) -> float:
    """
    Tangle 2|beta| of a (possibly unnormalized) state supported on span{|0...0>, |1...1>}.

    :param block: Either the 2x2 block itself or the full matrix on k parties.
    :return: Twice the modulus of the |0...0><1...1| coefficient.
    """
    m = block.entries if isinstance(block, DensityMatrix) else np.asarray(block, dtype=np.complex128)
    dim = m.shape[0]
    if m.ndim != 2 or m.shape != (dim, dim) or dim < 2 or dim & (dim - 1):
        raise InvalidStateError(f"Expected a square matrix of power-of-two dimension, got shape {m.shape}.")
    outside = m.copy()
    outside[np.ix_([0, dim - 1], [0, dim - 1])] = 0.0
    leak = float(np.max(np.abs(outside)))
    if leak > SUPPORT_TOL:
        raise InvalidSupportError(f"State has weight {leak:.3e} outside the GHZ block.")
    return float(2.0 * abs(m[0, dim - 1]))


def _k_to_km1_terms(psi: Ket, removed: int) -> tuple[float, RootPair, float]:
    k = psi.n
    if k not in (3, 5):
        raise DomainError(f"The k -> k-1 relation is implemented for k in (3, 5), got {k}.")
    if not 0 <= removed < k:
        raise DomainError(f"Party {removed} does not exist in a {k}-party state.")
    rest = [p for p in range(k) if p != removed]
    roots = wootters_roots(partial_trace(psi, rest))
    # the odd k-tangle singles out axis 0, which has to be the party traced out
    reordered = Ket(k, psi.tensor.transpose([removed] + rest).reshape(-1))
    tau = k_tangle_pure(reordered)
    return tau**2 - (roots.concave**2 - roots.convex**2), roots, tau


def k_to_km1_residual(psi: Ket, removed: int = 0) -> float:
    """tau_I^2 - (concave^2 - convex^2) of the state with one party traced out."""
    return _k_to_km1_terms(psi, removed)[0]


def pure_k_to_km1(psi: Ket, removed: int = 0) -> tuple[RootPair, float]:
    """
    Roots of the (k-1)-party reduction of an odd-k pure state together with its k-tangle.

    :param psi: Normalized ket with k in (3, 5).
    :param removed: Party traced out.
    :return: Roots of the reduced state and the k-tangle; both satisfy tau^2 = concave^2 - convex^2.
    """
    residual, roots, tau = _k_to_km1_terms(psi, removed)
    if abs(residual) > K_TO_KM1_TOL:
        raise ConsistencyError(f"k -> k-1 relation violated by {residual:.3e}.")
    return roots, tau


def tangle_tuple(psi: Ket) -> TangleTuple:
    """(x, y, z, t) = (tau_B|C, tau_A|C, tau_A|B, tau_A|B|C) of a normalized 3-qubit ket."""
    _require_parties(psi, 3)
    return TangleTuple(
        x=two_tangle(partial_trace(psi, [1, 2])),
        y=two_tangle(partial_trace(psi, [0, 2])),
        z=two_tangle(partial_trace(psi, [0, 1])),
        t=three_tangle(psi),
    )


def subset_parties(mask: int, n: int) -> list[int]:
    """Parties of a subset bitmask where bit p marks party p."""
    return [p for p in range(n) if mask >> p & 1]


def subset_tangles(psi: Ket) -> dict[int, float | None]:
    """
    Every subset tangle with at least two parties, keyed by bitmask.

    Odd proper subsets have no mixed-state tangle and map to ``None``.

    :param psi: Normalized ket with n <= 6.
    :return: Mapping from bitmask to tangle.
    """
    n = psi.n
    if n > MAX_TANGLE_QUBITS:
        raise SizeError(f"Subset tangles are limited to n <= {MAX_TANGLE_QUBITS}, got {n}.")
    psi.require_normalized()
    tangles: dict[int, float | None] = {}
    for mask in range(1, 2**n):
        parties = subset_parties(mask, n)
        if len(parties) < 2:
            continue
        if len(parties) == n:
            tangles[mask] = k_tangle_pure(psi)
        elif len(parties) % 2 == 0:
            tangles[mask] = k_tangle_mixed(partial_trace(psi, parties))
        else:
            tangles[mask] = None
    log.debug("Computed %d subset tangles of a %d-qubit state.", len(tangles), n)
    return tangles
