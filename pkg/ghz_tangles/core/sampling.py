import numpy as np

from ..errors import SizeError
from .operators import LocalOperator
from .states import Ket


def sample_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator for one sample."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def complex_gaussian(rng: np.random.Generator, shape: int | tuple[int, ...]) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_random_ket(n: int, seed: int | np.random.Generator, index: int = 0) -> Ket:
    """Haar-random pure state from normalized complex Gaussian amplitudes."""
    if n < 1:
        raise SizeError("Random kets need at least one qubit.")
    rng = seed if isinstance(seed, np.random.Generator) else sample_rng(seed, index)
    vector = complex_gaussian(rng, 2**n)
    return Ket(n, vector / np.linalg.norm(vector), normalized=True)


def random_local_unitary(rng: np.random.Generator, party: int) -> LocalOperator:
    """Haar-random 2x2 unitary from the QR decomposition of a complex Ginibre matrix."""
    q, r = np.linalg.qr(complex_gaussian(rng, (2, 2)))
    diagonal = np.diag(r)
    return LocalOperator(party, q * (diagonal / np.abs(diagonal)))


def random_sl2(rng: np.random.Generator, party: int) -> LocalOperator:
    """Random 2x2 complex matrix rescaled to unit determinant."""
    m = complex_gaussian(rng, (2, 2))
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return LocalOperator(party, m / np.sqrt(det))
