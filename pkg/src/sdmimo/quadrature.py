"""Quadrature rules used by the scalar kernels and the rate integrals.

Two rules cover everything:

* Gauss-Hermite in the probabilists' normalization, i.e. nodes/weights
  (u_i, w_i) such that E[f(U)] ~ sum w_i f(u_i) for U ~ N(0, 1),
  with sum w_i = 1.
* Gauss-Legendre mapped to [0, 1], weights summing to 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class QuadratureConfig:
    """Node counts for the numerical integrations.

    ``hermite_nodes`` drives the QPSK scalar kernels; the Legendre counts
    drive the 2-D rate integral. ``mc_oracle_samples`` is only used by the
    test-suite Monte Carlo oracles.
    """

    hermite_nodes: int = 96
    legendre_nodes_tau: int = 32
    legendre_nodes_mu: int = 32
    mc_oracle_samples: int = 10**7

    def __post_init__(self):
        for name in ("hermite_nodes", "legendre_nodes_tau", "legendre_nodes_mu"):
            if getattr(self, name) < 2:
                raise ConfigError(f"{name} must be >= 2, got {getattr(self, name)}")
        if self.mc_oracle_samples < 1:
            raise ConfigError("mc_oracle_samples must be positive")


def gauss_hermite_standard_normal(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights (u, w) with sum w_i f(u_i) ~ E[f(U)], U ~ N(0,1)."""
    if n < 2:
        raise ConfigError("need at least 2 Hermite nodes")
    x, w = np.polynomial.hermite.hermgauss(n)
    return x * np.sqrt(2.0), w / np.sqrt(np.pi)


def gauss_legendre_unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [0, 1] with weights summing to 1."""
    if n < 2:
        raise ConfigError("need at least 2 Legendre nodes")
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def gauss_legendre_interval(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for integration over [a, b] (weights sum to b - a)."""
    x, w = gauss_legendre_unit(n)
    return a + (b - a) * x, (b - a) * w
