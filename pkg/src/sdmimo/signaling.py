"""Signaling families and the bias hyperprior.

Data symbols have mean theta (the "bias", known to the receiver) and
per-symbol power P.  Four families are supported:

* Gaussian: x ~ CN(theta, P - |theta|^2).
* QPSK: Re/Im independently take +-sqrt(P/2), with per-component
  probabilities (1 +- Re[theta]/sqrt(P/2))/2 and the analogue for Im.

The bias itself is drawn from a hyperprior with variance sigma_theta^2:
either a real two-point law theta = +-sigma_theta (equiprobable) or a
fixed-magnitude law |theta|^2 = sigma_theta^2.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError


class Family(enum.Enum):
    GAUSSIAN_UNBIASED = "gauss"
    GAUSSIAN_BIASED = "gauss-biased"
    QPSK_UNBIASED = "qpsk"
    QPSK_BIASED = "qpsk-biased"

    @property
    def is_gaussian(self) -> bool:
        return self in (Family.GAUSSIAN_UNBIASED, Family.GAUSSIAN_BIASED)

    @property
    def is_qpsk(self) -> bool:
        return not self.is_gaussian

    @property
    def is_biased(self) -> bool:
        return self in (Family.GAUSSIAN_BIASED, Family.QPSK_BIASED)


class Hyperprior(enum.Enum):
    TWO_POINT_REAL = "two-point-real"
    FIXED_MAGNITUDE = "fixed-magnitude"


@dataclass(frozen=True)
class Signaling:
    family: Family
    P: float = 1.0
    sigma_theta2: float = 0.0
    hyperprior: Hyperprior = Hyperprior.TWO_POINT_REAL

    def __post_init__(self):
        if self.P <= 0:
            raise ConfigError(f"symbol power P must be positive, got {self.P}")
        if not self.family.is_biased:
            if self.sigma_theta2 != 0.0:
                raise ConfigError("unbiased families require sigma_theta2 = 0")
            return
        if not 0.0 <= self.sigma_theta2 < self.P:
            raise ConfigError(
                f"need 0 <= sigma_theta2 < P, got sigma_theta2={self.sigma_theta2}, P={self.P}"
            )
        if self.family is Family.QPSK_BIASED and self.hyperprior is Hyperprior.TWO_POINT_REAL:
            # two-point bias sits on the real component; its magnitude may not
            # exceed the component amplitude sqrt(P/2)
            if self.sigma_theta2 > self.P / 2 + 1e-15:
                raise ConfigError(
                    "biased QPSK with a two-point real hyperprior requires "
                    "sigma_theta <= sqrt(P/2)"
                )

    @property
    def sigma_theta(self) -> float:
        return float(np.sqrt(self.sigma_theta2))

    def theta_atoms(self) -> list[tuple[complex, float]]:
        """Atoms (theta, weight) of the hyperprior.

        FIXED_MAGNITUDE is represented by a single atom on the positive real
        axis; it is only valid for integrands that depend on theta through
        |theta|^2 (true for all Gaussian-family kernels).
        """
        if not self.family.is_biased or self.sigma_theta2 == 0.0:
            return [(0.0 + 0.0j, 1.0)]
        s = self.sigma_theta
        if self.hyperprior is Hyperprior.TWO_POINT_REAL:
            return [(complex(s, 0.0), 0.5), (complex(-s, 0.0), 0.5)]
        if self.hyperprior is Hyperprior.FIXED_MAGNITUDE:
            if self.family.is_qpsk:
                raise DomainError(
                    "fixed-magnitude hyperprior is unsupported for QPSK kernels "
                    "(they depend on theta beyond |theta|^2)"
                )
            return [(complex(s, 0.0), 1.0)]
        raise DomainError(f"unsupported hyperprior {self.hyperprior}")


def hyperprior_expect(sig: Signaling, f) -> float:
    """Expectation of f(theta) over the bias hyperprior."""
    return sum(w * f(theta) for theta, w in sig.theta_atoms())


def make_signaling(family: str, P: float, sigma_theta2: float = 0.0,
                   hyperprior: str = "two-point-real") -> Signaling:
    """Construct a Signaling from CLI-style strings, resolving biasedness."""
    fam = {
        "gauss": Family.GAUSSIAN_BIASED if sigma_theta2 > 0 else Family.GAUSSIAN_UNBIASED,
        "qpsk": Family.QPSK_BIASED if sigma_theta2 > 0 else Family.QPSK_UNBIASED,
    }.get(family)
    if fam is None:
        raise ConfigError(f"unknown signaling family {family!r}")
    return Signaling(fam, P=P, sigma_theta2=sigma_theta2,
                     hyperprior=Hyperprior(hyperprior))
