import functools
import logging
from dataclasses import dataclass, field
from .._compat import StrEnum

import numpy as np
import numpy.typing as npt

from ..errors import DomainError, InvalidStateError, SizeError
from .numerics import MAX_TANGLE_QUBITS

log = logging.getLogger(__name__)

EPSILON = np.array([[0.0, 1.0], [-1.0, 0.0]])
EPSILON.setflags(write=False)


class Parity(StrEnum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class LocalOperator:
    party: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.complex128, copy=True)
        if entries.shape != (2, 2):
            raise InvalidStateError(f"Local operators are 2x2 matrices, got shape {entries.shape}.")
        if not np.all(np.isfinite(entries)):
            raise InvalidStateError("Local operator entries must be finite.")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def det(self) -> complex:
        m = self.entries
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    @classmethod
    def identity(cls, party: int) -> "LocalOperator":
        return cls(party, np.eye(2))

    def inverse(self) -> "LocalOperator":
        return LocalOperator(self.party, np.linalg.inv(self.entries))


def local_operators(matrices: list[npt.ArrayLike]) -> list[LocalOperator]:
    """Attach party labels 0..n-1 to a list of 2x2 matrices."""
    return [LocalOperator(party, np.asarray(m)) for party, m in enumerate(matrices)]


@dataclass(frozen=True)
class EpsilonOperator:
    k: int
    parity: Parity
    entries: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _bits(indices: np.ndarray, width: int) -> np.ndarray:
    """Bit l of every index, most significant first, shape (width, len(indices))."""
    shifts = np.arange(width - 1, -1, -1)[:, None]
    return (indices[None, :] >> shifts) & 1


@functools.lru_cache(maxsize=None)
def _theta_entries(k: int, parity: Parity) -> np.ndarray:
    if parity is Parity.EVEN:
        entries = functools.reduce(np.kron, [EPSILON] * k)
    else:
        width = 2 * k
        bits = _bits(np.arange(2**width), width)
        rows, cols = bits[:, :, None], bits[:, None, :]
        entries = EPSILON[rows[0], rows[k]] * EPSILON[cols[0], cols[k]]
        for layer in range(1, k):
            entries = entries * EPSILON[rows[layer], cols[layer]] * EPSILON[rows[k + layer], cols[k + layer]]
    entries = np.ascontiguousarray(entries, dtype=np.float64)
    entries.setflags(write=False)
    log.debug("Built %s theta operator for k=%d with %d nonzeros.", parity, k, np.count_nonzero(entries))
    return entries


def build_theta(k: int, parity: Parity | str) -> EpsilonOperator:
    """
    Build the epsilon-product operator of k qubits.

    Even k gives the k-fold tensor power of epsilon acting on 2**k amplitudes. Odd k gives the operator on the
    doubled space of psi (x) psi where the first qubit of each copy is paired across the copies.

    :param k: Number of qubits.
    :param parity: ``even`` or ``odd``; must match k.
    :return: The cached, read-only operator.
    """
    parity = Parity(parity)
    if k > MAX_TANGLE_QUBITS:
        raise SizeError(f"Theta operators are limited to k <= {MAX_TANGLE_QUBITS}, got {k}.")
    if parity is Parity.EVEN and (k < 2 or k % 2):
        raise DomainError(f"Even theta needs an even k >= 2, got {k}.")
    if parity is Parity.ODD and (k < 3 or k % 2 == 0):
        raise DomainError(f"Odd theta needs an odd k >= 3, got {k}.")
    return EpsilonOperator(k, parity, _theta_entries(k, parity))
