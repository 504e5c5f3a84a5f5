"""Large-system fixed-point solvers.

Two coupled systems describe the successive-decoding receiver in the
large-system limit:

* Channel estimation at normalized time tau: the per-entry estimation
  error xi^2(tau) solves

      xi^2 = 1 / (1 + tau*P/(sigma_tr^2 * beta)
                    + (1 - tau)*sigma_theta^2/(sigma_c^2 * beta)),
      sigma_tr^2 = N0 + P*xi^2,
      sigma_c^2  = N0 + (P - sigma_theta^2) + sigma_theta^2 * xi^2.

* Detection at substage fraction mu: the effective noise variance of the
  decoupled scalar channel solves

      sigma^2 = N0 + P*xi^2 + (1 - mu)*(1 - xi^2) * E_theta[MSE(sigma^2, theta)].

The detector equation can have multiple solutions for alpha > 1; the one
minimizing the free-energy functional is selected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BracketError, ConfigError, DomainError, NoSolutionError
from .kernels import LOG2E, AwgnChannelSpec, awgn_mutual_info, kl_gauss, qpsk_kernels_vec
from .signaling import Signaling

XI2_TOL = 1e-12
SIGMA2_TOL = 1e-10
SCAN_POINTS = 400


@dataclass(frozen=True)
class Geometry:
    """Large-system shape ratios.

    alpha = M/N (tx per rx antenna), beta = M/T_c (tx antennas per
    coherence time), tau0 = T_tr/T_c (training fraction).
    """

    alpha: float
    beta: float
    tau0: float = 0.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be > 0, got {self.alpha}")
        if not 0.0 < self.beta <= 1.0:
            raise ConfigError(f"beta must be in (0, 1], got {self.beta}")
        if not 0.0 <= self.tau0 < 1.0:
            raise ConfigError(f"tau0 must be in [0, 1), got {self.tau0}")


@dataclass(frozen=True)
class EstimatorSolution:
    tau: float
    xi2: float
    sigma_tr2: float
    sigma_c2: float


@dataclass(frozen=True)
class DetectorSolution:
    tau: float
    mu: float
    sigma2: float
    candidates: tuple[tuple[float, float], ...]
    selected_index: int


def _estimator_map(u: float, geom: Geometry, P: float, st2: float,
                   N0: float, tau: float) -> float:
    sigma_tr2 = N0 + P * u
    sigma_c2 = N0 + (P - st2) + st2 * u
    return 1.0 / (1.0 + tau * P / (sigma_tr2 * geom.beta)
                  + (1.0 - tau) * st2 / (sigma_c2 * geom.beta))


def solve_estimator(geom: Geometry, sig, N0: float, tau: float) -> EstimatorSolution:
    """Solve the channel-estimation fixed point at normalized time tau.

    ``sig`` only needs ``P`` and ``sigma_theta2`` attributes, so degenerate
    test inputs (P = 0) are accepted: with no signal the error stays at the
    prior variance, xi^2 = 1.
    """
    if N0 <= 0:
        raise DomainError(f"N0 must be > 0, got {N0}")
    if not geom.tau0 - 1e-12 <= tau <= 1.0 + 1e-12:
        raise DomainError(f"tau must be in [tau0, 1], got {tau}")
    P, st2 = sig.P, sig.sigma_theta2
    if P == 0.0:
        return EstimatorSolution(tau=tau, xi2=1.0, sigma_tr2=N0, sigma_c2=N0)

    def h(u: float) -> float:
        return _estimator_map(u, geom, P, st2, N0, tau) - u

    lo, hi = 1e-300, 1.0
    h_hi = h(hi)
    if h_hi >= 0.0:
        # map(1) = 1 only when no observation carries information
        xi2 = 1.0
    else:
        if h(lo) <= 0.0:
            raise BracketError("estimator map has no root in (0, 1]")
        while hi - lo > XI2_TOL:
            mid = 0.5 * (lo + hi)
            if h(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        xi2 = 0.5 * (lo + hi)
    return EstimatorSolution(
        tau=tau,
        xi2=xi2,
        sigma_tr2=N0 + P * xi2,
        sigma_c2=N0 + (P - st2) + st2 * xi2,
    )


def _mse_expect(sig: Signaling, a: float, sigma2: np.ndarray,
                hermite_nodes: int = 96) -> np.ndarray:
    """E_theta[MSE(sigma^2, theta)] on the scalar channel, vectorized."""
    sigma2 = np.atleast_1d(np.asarray(sigma2, dtype=np.float64))
    out = np.zeros_like(sigma2)
    for theta, wt in sig.theta_atoms():
        if sig.family.is_gaussian:
            v = sig.P - abs(theta) ** 2
            out += wt * v * sigma2 / (a * a * v + sigma2)
        else:
            mmse, _ = qpsk_kernels_vec(a, sigma2, sig.P, theta, hermite_nodes)
            out += wt * mmse
    return out


def free_energy(geom: Geometry, sig: Signaling, N0: float,
                est: EstimatorSolution, mu: float, sigma2: float,
                gain: float | None = None, hermite_nodes: int = 96) -> float:
    """Selection functional for detector fixed-point candidates.

    (1 - mu) * E_theta[I(x; z | theta)]
        + (1/alpha) * (D(N0 || sigma^2) + (xi^2/sigma^2) * log2 e).
    """
    if sigma2 < N0 * (1.0 - 1e-9):
        raise DomainError("sigma2 must be >= N0")
    a = np.sqrt((1.0 - est.xi2) / geom.alpha) if gain is None else gain
    mi = sum(
        wt * awgn_mutual_info(sig, AwgnChannelSpec(a, sigma2, theta), hermite_nodes)
        for theta, wt in sig.theta_atoms()
    )
    return float((1.0 - mu) * mi
                 + (kl_gauss(N0, sigma2) + est.xi2 / sigma2 * LOG2E) / geom.alpha)


def _detector_quadratic(geom: Geometry, sig: Signaling, N0: float,
                        est: EstimatorSolution, mu: float) -> float:
    # closed form for Gaussian priors: the MSE is rational in sigma^2 and the
    # fixed point reduces to one quadratic (|theta|^2 is deterministic under
    # both hyperpriors)
    alpha = geom.alpha
    c0 = N0 + sig.P * est.xi2
    v = (1.0 - est.xi2) * (sig.P - sig.sigma_theta2)
    if v <= 0.0:
        return c0
    b = v - alpha * c0 - (1.0 - mu) * v * alpha
    return float((-b + np.sqrt(b * b + 4.0 * alpha * c0 * v)) / (2.0 * alpha))


def _detector_residual(geom, sig, N0, est, mu, sigma2, hermite_nodes):
    a = np.sqrt((1.0 - est.xi2) / geom.alpha)
    c0 = N0 + sig.P * est.xi2
    rhs = c0 + (1.0 - mu) * (1.0 - est.xi2) * _mse_expect(sig, a, sigma2, hermite_nodes)
    return rhs - np.atleast_1d(np.asarray(sigma2, dtype=np.float64))


def _bisect_residual(geom, sig, N0, est, mu, lo, hi, hermite_nodes) -> float:
    while hi - lo > SIGMA2_TOL:
        mid = 0.5 * (lo + hi)
        if _detector_residual(geom, sig, N0, est, mu, mid, hermite_nodes)[0] > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_detector(geom: Geometry, sig: Signaling, N0: float,
                   est: EstimatorSolution, mu: float,
                   method: str = "auto", scan_points: int = SCAN_POINTS,
                   hermite_nodes: int = 96) -> DetectorSolution:
    """Solve the detector fixed point at substage fraction mu.

    Gaussian families use the closed-form quadratic root (unique);
    ``method="bisect"`` forces the generic scalar bisection instead, kept
    as an independent cross-check path.  QPSK families scan a log-spaced
    sigma^2 grid, refine every sign change, and pick the free-energy
    minimizer among the candidates.
    """
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"mu must be in [0, 1], got {mu}")
    if N0 <= 0:
        raise DomainError(f"N0 must be > 0, got {N0}")
    c0 = N0 + sig.P * est.xi2
    if mu == 1.0:
        # last substage: no residual interference
        fe = free_energy(geom, sig, N0, est, mu, c0, hermite_nodes=hermite_nodes)
        return DetectorSolution(est.tau, mu, c0, ((c0, fe),), 0)

    if sig.family.is_gaussian and method != "bisect":
        s2 = _detector_quadratic(geom, sig, N0, est, mu)
        fe = free_energy(geom, sig, N0, est, mu, s2, hermite_nodes=hermite_nodes)
        return DetectorSolution(est.tau, mu, s2, ((s2, fe),), 0)

    upper = c0 + (1.0 - mu) * (1.0 - est.xi2) * sig.P + N0
    if sig.family.is_gaussian:
        s2 = _bisect_residual(geom, sig, N0, est, mu, N0, upper, hermite_nodes)
        fe = free_energy(geom, sig, N0, est, mu, s2, hermite_nodes=hermite_nodes)
        return DetectorSolution(est.tau, mu, s2, ((s2, fe),), 0)

    # QPSK: enumerate fixed points on a log-spaced scan, then refine
    grid = np.geomspace(N0, max(N0 + 2.0 * sig.P, upper), scan_points)
    res = _detector_residual(geom, sig, N0, est, mu, grid, hermite_nodes)
    candidates = []
    for i in range(len(grid) - 1):
        if res[i] == 0.0:
            candidates.append(float(grid[i]))
        elif res[i] > 0.0 > res[i + 1]:
            candidates.append(
                _bisect_residual(geom, sig, N0, est, mu, grid[i], grid[i + 1],
                                 hermite_nodes))
        elif res[i] < 0.0 < res[i + 1]:
            # rising crossing: bisect with inverted orientation
            lo, hi = float(grid[i]), float(grid[i + 1])
            while hi - lo > SIGMA2_TOL:
                mid = 0.5 * (lo + hi)
                if _detector_residual(geom, sig, N0, est, mu, mid, hermite_nodes)[0] < 0.0:
                    lo = mid
                else:
                    hi = mid
            candidates.append(0.5 * (lo + hi))
    if res[-1] == 0.0:
        candidates.append(float(grid[-1]))
    if not candidates:
        raise NoSolutionError(
            f"no detector fixed point found on [{grid[0]:.3g}, {grid[-1]:.3g}]")
    scored = tuple(
        (s2, free_energy(geom, sig, N0, est, mu, s2, hermite_nodes=hermite_nodes))
        for s2 in candidates
    )
    sel = int(min(range(len(scored)), key=lambda i: scored[i][1]))
    return DetectorSolution(est.tau, mu, scored[sel][0], scored, sel)
