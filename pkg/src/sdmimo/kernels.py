"""Scalar kernels on the decoupled AWGN channel.

In the large-system limit every data symbol sees the scalar channel

    z = a * x + w,    a = sqrt((1 - xi^2)/alpha),    w ~ CN(0, sigma^2),

with x drawn from the signaling prior with mean theta and power P.  This
module provides the per-symbol MMSE and mutual information for that
channel, plus the Gaussian KL divergence used by the free-energy
selection rule.

Gaussian families have closed forms.  QPSK kernels factor over the real
and imaginary components and are evaluated with Gauss-Hermite quadrature;
the per-dimension kernels exist in a numba-jitted loop form and a
vectorized numpy form (selected via SDMIMO_NO_NUMBA, see accel.py).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import accel
from .errors import DomainError
from .quadrature import gauss_hermite_standard_normal
from .signaling import Signaling

LOG2E = float(np.log2(np.e))

_GH_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gh(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GH_CACHE:
        _GH_CACHE[n] = gauss_hermite_standard_normal(n)
    return _GH_CACHE[n]


@dataclass(frozen=True)
class AwgnChannelSpec:
    """Scalar channel z = gain * x + w, w ~ CN(0, noise_var), bias theta."""

    gain: float
    noise_var: float
    theta: complex = 0.0 + 0.0j

    def __post_init__(self):
        if self.gain < 0:
            raise DomainError(f"gain must be >= 0, got {self.gain}")
        if self.noise_var <= 0:
            raise DomainError(f"noise_var must be > 0, got {self.noise_var}")


def kl_gauss(var1: float, var2: float) -> float:
    """D(CN(0,var1) || CN(0,var2)) in bits."""
    if var1 <= 0 or var2 <= 0:
        raise DomainError("variances must be positive")
    return float(np.log2(var2 / var1) + (var1 / var2 - 1.0) * LOG2E)


# --- QPSK per-real-dimension kernels -----------------------------------
#
# One real dimension: x = +-c with priors p(+-c) = (1 +- tr/c)/2, observed
# through z = a*x + n, n ~ N(0, sigma2/2).  The posterior mean is
# c * tanh(a*c*z/(sigma2/2)... ) written in the stable tanh form below.


@accel.njit(cache=True)
def _qpsk_dim_kernels_jit(a, sigma2, c, tr, u, w, out_mmse, out_mi):
    n = sigma2.shape[0]
    k = u.shape[0]
    pp = (1.0 + tr / c) / 2.0
    pm = 1.0 - pp
    if pp <= 0.0 or pm <= 0.0:
        for i in range(n):
            out_mmse[i] = 0.0
            out_mi[i] = 0.0
        return
    lpp = np.log(pp)
    lpm = np.log(pm)
    t0 = 0.5 * (lpp - lpm)
    ln2 = 0.6931471805599453
    for i in range(n):
        s2 = sigma2[i] / 2.0
        s = np.sqrt(s2)
        mmse = 0.0
        mi = 0.0
        for j in range(k):
            # x = +c branch
            z = a * c + s * u[j]
            lam = 2.0 * a * c * z / s2
            xhat = c * np.tanh(0.5 * lam + t0)
            mmse += pp * w[j] * (c - xhat) ** 2
            mi -= pp * w[j] * np.logaddexp(lpp, lpm - lam)
            # x = -c branch
            z = -a * c + s * u[j]
            lam = 2.0 * a * c * z / s2
            xhat = c * np.tanh(0.5 * lam + t0)
            mmse += pm * w[j] * (-c - xhat) ** 2
            mi -= pm * w[j] * np.logaddexp(lpm, lpp + lam)
        out_mmse[i] = mmse
        out_mi[i] = mi / ln2


def _qpsk_dim_kernels_np(a, sigma2, c, tr, u, w, out_mmse, out_mi):
    pp = (1.0 + tr / c) / 2.0
    pm = 1.0 - pp
    if pp <= 0.0 or pm <= 0.0:
        out_mmse[:] = 0.0
        out_mi[:] = 0.0
        return
    lpp, lpm = np.log(pp), np.log(pm)
    t0 = 0.5 * (lpp - lpm)
    s = np.sqrt(sigma2[:, None] / 2.0)
    mmse = np.zeros_like(sigma2)
    mi = np.zeros_like(sigma2)
    for x, px, lpx, lpo, sign in ((c, pp, lpp, lpm, -1.0), (-c, pm, lpm, lpp, 1.0)):
        z = a * x + s * u[None, :]
        lam = 2.0 * a * c * z / (sigma2[:, None] / 2.0)
        xhat = c * np.tanh(0.5 * lam + t0)
        mmse += px * np.sum(w * (x - xhat) ** 2, axis=1)
        mi -= px * np.sum(w * np.logaddexp(lpx, lpo + sign * lam), axis=1)
    out_mmse[:] = mmse
    out_mi[:] = mi / np.log(2.0)


_qpsk_dim_kernels = _qpsk_dim_kernels_jit if accel.NUMBA_ENABLED else _qpsk_dim_kernels_np


def qpsk_kernels_vec(a: float, sigma2, P: float, theta: complex,
                     hermite_nodes: int = 96) -> tuple[np.ndarray, np.ndarray]:
    """(MMSE, MI bits) of the QPSK prior over an array of noise variances."""
    sigma2 = np.atleast_1d(np.asarray(sigma2, dtype=np.float64))
    if np.any(sigma2 <= 0):
        raise DomainError("noise variances must be positive")
    u, w = _gh(hermite_nodes)
    c = np.sqrt(P / 2.0)
    mmse = np.zeros_like(sigma2)
    mi = np.zeros_like(sigma2)
    tmp_m = np.empty_like(sigma2)
    tmp_i = np.empty_like(sigma2)
    for tr in (float(np.real(theta)), float(np.imag(theta))):
        if abs(tr) > c + 1e-12:
            raise DomainError("bias component exceeds QPSK amplitude")
        _qpsk_dim_kernels(float(a), sigma2, float(c), min(tr, c), u, w, tmp_m, tmp_i)
        mmse += tmp_m
        mi += tmp_i
    return mmse, mi


def _check(sig: Signaling, ch: AwgnChannelSpec) -> float:
    v = sig.P - abs(ch.theta) ** 2
    if v <= 0:
        raise DomainError("|theta|^2 must be < P")
    return v


def awgn_mmse(sig: Signaling, ch: AwgnChannelSpec, hermite_nodes: int = 96) -> float:
    """E[|x - E[x|z]|^2 | theta] on the decoupled channel."""
    v = _check(sig, ch)
    if sig.family.is_gaussian:
        return float(v * ch.noise_var / (ch.gain**2 * v + ch.noise_var))
    mmse, _ = qpsk_kernels_vec(ch.gain, ch.noise_var, sig.P, ch.theta, hermite_nodes)
    return float(mmse[0])


def awgn_mutual_info(sig: Signaling, ch: AwgnChannelSpec, hermite_nodes: int = 96) -> float:
    """I(x; z | theta) in bits on the decoupled channel."""
    v = _check(sig, ch)
    if sig.family.is_gaussian:
        return float(np.log2(1.0 + ch.gain**2 * v / ch.noise_var))
    _, mi = qpsk_kernels_vec(ch.gain, ch.noise_var, sig.P, ch.theta, hermite_nodes)
    return float(max(mi[0], 0.0))
