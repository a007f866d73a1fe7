import numpy as np
import pytest

from ghz_tangles.core.sampling import haar_random_ket, random_local_unitary, random_sl2, sample_rng
from ghz_tangles.errors import SizeError


class TestSampleRng:
    def test_reproducible(self):
        np.testing.assert_array_equal(sample_rng(3, 17).random(4), sample_rng(3, 17).random(4))

    def test_streams_differ(self):
        assert not np.allclose(sample_rng(3, 0).random(4), sample_rng(3, 1).random(4))
        assert not np.allclose(sample_rng(3, 0).random(4), sample_rng(4, 0).random(4))


class TestHaarRandomKet:
    def test_normalized(self):
        psi = haar_random_ket(4, 2024, 9)
        assert psi.normalized
        assert psi.norm2 == pytest.approx(1.0, abs=1e-12)

    def test_index_determines_state(self):
        a, b = haar_random_ket(3, 1, 5), haar_random_ket(3, 1, 5)
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)

    def test_generator_input(self, rng):
        assert haar_random_ket(2, rng).n == 2

    def test_weights_are_uniform(self):
        # every |psi_i|^2 of a Haar ket in dimension d is Beta(1, d - 1) distributed
        count, dim = 4000, 8
        weights = np.array([abs(haar_random_ket(3, 5, index).amplitudes) ** 2 for index in range(count)])
        standard_error = np.sqrt((dim - 1) / (dim**2 * (dim + 1)) / count)
        assert np.all(np.abs(weights.mean(axis=0) - 1 / dim) <= 5 * standard_error)

    def test_needs_a_qubit(self):
        with pytest.raises(SizeError):
            haar_random_ket(0, 1)


class TestLocalSamplers:
    def test_unitary(self, rng):
        u = random_local_unitary(rng, 2)
        assert u.party == 2
        np.testing.assert_allclose(u.entries @ u.entries.conj().T, np.eye(2), atol=1e-14)

    def test_sl2(self, rng):
        assert random_sl2(rng, 0).det == pytest.approx(1.0)
