import numpy as np
import pytest

from sdmimo import ConfigError, DomainError, Family, Hyperprior, Signaling
from sdmimo.signaling import hyperprior_expect, make_signaling


def test_validation():
    with pytest.raises(ConfigError):
        Signaling(Family.GAUSSIAN_UNBIASED, P=0.0)
    with pytest.raises(ConfigError):
        Signaling(Family.GAUSSIAN_UNBIASED, P=1.0, sigma_theta2=0.1)
    with pytest.raises(ConfigError):
        Signaling(Family.GAUSSIAN_BIASED, P=1.0, sigma_theta2=1.0)
    with pytest.raises(ConfigError):
        # real two-point bias larger than the QPSK component amplitude
        Signaling(Family.QPSK_BIASED, P=1.0, sigma_theta2=0.7)
    Signaling(Family.QPSK_BIASED, P=1.0, sigma_theta2=0.5)


def test_theta_atoms_two_point():
    sig = Signaling(Family.GAUSSIAN_BIASED, P=1.0, sigma_theta2=0.25)
    atoms = sig.theta_atoms()
    assert len(atoms) == 2
    vals = sorted(th.real for th, _ in atoms)
    assert np.allclose(vals, [-0.5, 0.5])
    assert np.isclose(sum(w for _, w in atoms), 1.0)
    # second moment of the hyperprior equals sigma_theta2
    assert np.isclose(hyperprior_expect(sig, lambda t: abs(t) ** 2), 0.25)


def test_theta_atoms_unbiased_and_fixed_magnitude():
    assert Signaling(Family.QPSK_UNBIASED).theta_atoms() == [(0.0 + 0.0j, 1.0)]
    sig = Signaling(Family.GAUSSIAN_BIASED, P=1.0, sigma_theta2=0.25,
                    hyperprior=Hyperprior.FIXED_MAGNITUDE)
    assert sig.theta_atoms() == [(0.5 + 0.0j, 1.0)]
    bad = Signaling(Family.QPSK_BIASED, P=1.0, sigma_theta2=0.25,
                    hyperprior=Hyperprior.FIXED_MAGNITUDE)
    with pytest.raises(DomainError):
        bad.theta_atoms()


def test_make_signaling_resolves_bias():
    assert make_signaling("gauss", 1.0, 0.0).family is Family.GAUSSIAN_UNBIASED
    assert make_signaling("gauss", 1.0, 0.2).family is Family.GAUSSIAN_BIASED
    assert make_signaling("qpsk", 2.0, 0.3).family is Family.QPSK_BIASED
    with pytest.raises(ConfigError):
        make_signaling("8psk", 1.0)
