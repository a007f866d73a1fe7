"""
Pure and mixed qubit states.

Basis index ``i`` of an n-qubit state encodes party ``p`` as bit ``n - 1 - p`` of ``i``, so party 0 is the most
significant bit and ``amplitudes.reshape((2,) * n)`` has axis ``p`` belonging to party ``p``.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from ..errors import ArityError, DomainError, InvalidStateError, SizeError
from .numerics import HERMITIAN_TOL, MAX_QUBITS, NORM_TOL, PSD_TOL
from .operators import LocalOperator

log = logging.getLogger(__name__)


def _frozen(array: npt.ArrayLike) -> np.ndarray:
    out = np.array(array, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Ket:
    n: int
    amplitudes: np.ndarray = field(repr=False)
    normalized: bool = False

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_QUBITS:
            raise SizeError(f"Kets need 1 <= n <= {MAX_QUBITS} qubits, got {self.n}.")
        amplitudes = _frozen(self.amplitudes).reshape(-1)
        if amplitudes.size != 2**self.n:
            raise InvalidStateError(f"A {self.n}-qubit ket needs {2 ** self.n} amplitudes, got {amplitudes.size}.")
        if not np.all(np.isfinite(amplitudes)):
            raise InvalidStateError("Ket amplitudes must be finite.")
        object.__setattr__(self, "amplitudes", amplitudes)
        if self.normalized and abs(self.norm2 - 1.0) > NORM_TOL:
            raise InvalidStateError(f"Ket flagged normalized has squared norm {self.norm2!r}.")

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes as an n-axis tensor, axis p belonging to party p."""
        return self.amplitudes.reshape((2,) * self.n)

    def normalize(self) -> "Ket":
        norm2 = self.norm2
        if norm2 == 0.0:
            raise InvalidStateError("Cannot normalize the zero vector.")
        return Ket(self.n, self.amplitudes / np.sqrt(norm2), normalized=True)

    def require_normalized(self) -> "Ket":
        """
        Check the normalization invariant.

        :return: The ket itself.
        """
        if abs(self.norm2 - 1.0) > NORM_TOL:
            raise InvalidStateError(f"Operation needs a normalized ket, squared norm is {self.norm2!r}.")
        return self


def ket_from_amplitudes(amplitudes: npt.ArrayLike, normalize: bool = True) -> Ket:
    """
    Build a ket from a flat amplitude vector.

    :param amplitudes: 2**n complex amplitudes.
    :param normalize: Divide by the norm. Otherwise the normalized flag reflects the input.
    :return: The ket.
    """
    vector = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    n = int(round(np.log2(vector.size))) if vector.size > 0 else 0
    if vector.size == 0 or 2**n != vector.size:
        raise InvalidStateError(f"Amplitude count {vector.size} is not a power of two.")
    ket = Ket(n, vector)
    if normalize:
        return ket.normalize()
    return Ket(n, vector, normalized=abs(ket.norm2 - 1.0) <= NORM_TOL)


def ghz_ket(n: int, a: complex = 1.0, b: complex = 1.0) -> Ket:
    """
    Generalized GHZ state a|0...0> + b|1...1>, normalized.

    :param n: Number of qubits.
    :param a: Weight of |0...0>.
    :param b: Weight of |1...1>.
    :return: The ket.
    """
    if n < 1:
        raise SizeError("GHZ states need at least one qubit.")
    vector = np.zeros(2**n, dtype=np.complex128)
    vector[0] += a
    vector[-1] += b
    return ket_from_amplitudes(vector)


def w_ket(n: int) -> Ket:
    """The n-qubit W state, the equal superposition of all single excitations."""
    if n < 2:
        raise SizeError("W states need at least two qubits.")
    vector = np.zeros(2**n, dtype=np.complex128)
    vector[[1 << p for p in range(n)]] = 1.0
    return ket_from_amplitudes(vector)


def apply_local(ops: Sequence[LocalOperator], psi: Ket) -> tuple[Ket, float]:
    """
    Apply one 2x2 operator per party.

    :param ops: Local operators, one for every party of the ket.
    :param psi: Input ket.
    :return: The unnormalized image and its squared norm p.
    """
    parties = sorted(op.party for op in ops)
    if parties != list(range(psi.n)):
        raise ArityError(f"Need exactly one operator for each of the {psi.n} parties, got parties {parties}.")
    tensor = psi.tensor
    for op in ops:
        tensor = np.moveaxis(np.tensordot(op.entries, tensor, axes=([1], [op.party])), 0, op.party)
    image = Ket(psi.n, tensor.reshape(-1))
    p = image.norm2
    return Ket(psi.n, image.amplitudes, normalized=abs(p - 1.0) <= NORM_TOL), p


@dataclass(frozen=True)
class DensityMatrix:
    qubits: tuple[int, ...]
    entries: np.ndarray = field(repr=False)
    normalized: bool = True

    def __post_init__(self) -> None:
        qubits = tuple(int(q) for q in self.qubits)
        if len(set(qubits)) != len(qubits) or not qubits:
            raise ArityError(f"Density matrices need distinct, nonempty party labels, got {qubits}.")
        if len(qubits) > MAX_QUBITS:
            raise SizeError(f"Density matrices support at most {MAX_QUBITS} qubits.")
        object.__setattr__(self, "qubits", qubits)
        entries = _frozen(self.entries)
        dim = 2 ** len(qubits)
        if entries.shape != (dim, dim):
            raise InvalidStateError(f"Expected a {dim}x{dim} matrix for qubits {qubits}, got {entries.shape}.")
        if not np.all(np.isfinite(entries)):
            raise InvalidStateError("Density matrix entries must be finite.")
        if np.max(np.abs(entries - entries.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError("Density matrix is not Hermitian.")
        object.__setattr__(self, "entries", entries)
        if self.normalized and abs(self.trace - 1.0) > NORM_TOL:
            raise InvalidStateError(f"Density matrix flagged normalized has trace {self.trace!r}.")

    @classmethod
    def from_ket(cls, psi: Ket) -> "DensityMatrix":
        return cls(tuple(range(psi.n)), np.outer(psi.amplitudes, psi.amplitudes.conj()), normalized=psi.normalized)

    @classmethod
    def validated(cls, qubits: Iterable[int], entries: npt.ArrayLike) -> "DensityMatrix":
        """
        Build a density matrix from external data and check positivity as well.

        :param qubits: Party labels.
        :param entries: Matrix entries.
        :return: The density matrix.
        """
        rho = cls(tuple(qubits), np.asarray(entries, dtype=np.complex128))
        lowest = float(np.linalg.eigvalsh(rho.entries)[0])
        if lowest < -PSD_TOL:
            raise InvalidStateError(f"Density matrix is not positive semi-definite, lowest eigenvalue {lowest!r}.")
        return rho

    @property
    def k(self) -> int:
        return len(self.qubits)

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def spectrum(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return np.linalg.eigvalsh(self.entries)[::-1]

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.sum(self.spectrum() > tol))


def _positions(qubits: Sequence[int], keep: Iterable[int]) -> list[int]:
    keep_set = {int(q) for q in keep}
    if not keep_set:
        raise DomainError("The set of kept parties must not be empty.")
    unknown = keep_set - set(qubits)
    if unknown:
        raise DomainError(f"Parties {sorted(unknown)} are not part of the state {tuple(qubits)}.")
    return [i for i, q in enumerate(qubits) if q in keep_set]


def partial_trace(state: Ket | DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """
    Reduce a state to the kept parties.

    The kept parties stay in their original order, so the reduced basis follows the same bit convention.

    :param state: Pure or mixed input state.
    :param keep: Party labels to keep.
    :return: The reduced density matrix.
    """
    if isinstance(state, Ket):
        qubits: tuple[int, ...] = tuple(range(state.n))
        kept = _positions(qubits, keep)
        traced = [i for i in range(state.n) if i not in kept]
        matrix = state.tensor.transpose(kept + traced).reshape(2 ** len(kept), -1)
        reduced = matrix @ matrix.conj().T
        normalized = abs(state.norm2 - 1.0) <= NORM_TOL
    else:
        qubits = state.qubits
        kept = _positions(qubits, keep)
        m = state.k
        tensor = state.entries.reshape((2,) * (2 * m))
        # row axes 0..m-1, column axes m..2m-1; traced parties share a label
        rows = [chr(ord("a") + i) for i in range(m)]
        cols = [rows[i] if i not in kept else chr(ord("A") + i) for i in range(m)]
        out = [rows[i] for i in kept] + [cols[i] for i in kept]
        reduced = np.einsum(f"{''.join(rows)}{''.join(cols)}->{''.join(out)}", tensor)
        reduced = reduced.reshape(2 ** len(kept), 2 ** len(kept))
        normalized = state.normalized
    reduced = 0.5 * (reduced + reduced.conj().T)
    log.debug("Traced %s down to parties %s.", qubits, [qubits[i] for i in kept])
    return DensityMatrix(tuple(qubits[i] for i in kept), reduced, normalized=normalized)
