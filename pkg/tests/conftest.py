import numpy as np
import pytest

from dimercorr import DimerModel


@pytest.fixture
def vodpo_model():
    """The V4+ dimer parameters extracted from the scattering analysis."""
    return DimerModel(J=7.81, D=0.0, g=1.99, R=4.43)


def random_unitary(rng, dim):
    """Haar-ish unitary from the QR decomposition of a complex Ginibre matrix."""
    ginibre = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(ginibre)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def unitary_factory():
    return random_unitary
