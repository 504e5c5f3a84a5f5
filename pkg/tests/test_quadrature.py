import numpy as np
import pytest

from sdmimo import ConfigError, QuadratureConfig
from sdmimo.quadrature import (gauss_hermite_standard_normal,
                               gauss_legendre_interval, gauss_legendre_unit)


def test_hermite_weights_normalized():
    _, w = gauss_hermite_standard_normal(64)
    assert np.isclose(w.sum(), 1.0, atol=1e-12)


def test_hermite_matches_gaussian_moments():
    x, w = gauss_hermite_standard_normal(32)
    # E[X^2] = 1, E[X^4] = 3 for X ~ N(0,1)
    assert np.isclose(np.sum(w * x**2), 1.0, atol=1e-12)
    assert np.isclose(np.sum(w * x**4), 3.0, atol=1e-10)
    assert np.isclose(np.sum(w * x), 0.0, atol=1e-12)


def test_legendre_unit_integrates_polynomials():
    x, w = gauss_legendre_unit(16)
    assert np.isclose(w.sum(), 1.0, atol=1e-14)
    for k in range(8):
        assert np.isclose(np.sum(w * x**k), 1.0 / (k + 1), atol=1e-12)


def test_legendre_interval_scaling():
    x, w = gauss_legendre_interval(16, 0.25, 0.75)
    assert np.isclose(w.sum(), 0.5, atol=1e-14)
    assert x.min() > 0.25 and x.max() < 0.75
    assert np.isclose(np.sum(w * x), (0.75**2 - 0.25**2) / 2, atol=1e-12)


def test_config_validation():
    QuadratureConfig()
    with pytest.raises(ConfigError):
        QuadratureConfig(hermite_nodes=1)
    with pytest.raises(ConfigError):
        QuadratureConfig(legendre_nodes_mu=0)
    with pytest.raises(ConfigError):
        QuadratureConfig(mc_oracle_samples=0)
