"""Achievable-rate bounds assembled from the fixed-point solvers.

Provides the 2-D rate integral over (tau, mu), the large-system
pilot-only baseline built on the random-matrix spectral-efficiency
formula, the low-SNR rate/Eb-N0 curve, and the high-SNR slope
diagnostic.  All rates are in bits per channel use per transmit antenna.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar

from .errors import ConfigError, DomainError
from .kernels import AwgnChannelSpec, awgn_mutual_info
from .quadrature import QuadratureConfig, gauss_legendre_interval, gauss_legendre_unit
from .signaling import Signaling, make_signaling
from .solver import Geometry, solve_detector, solve_estimator


@dataclass(frozen=True)
class RateBound:
    rate_bits_per_tx: float
    grid: tuple[int, int]
    integrand_samples: tuple | None = None


@dataclass(frozen=True)
class LowSnrPoint:
    s: float
    rate_R: float
    eb_n0_db: float


def _tau_nodes(geom: Geometry, n: int) -> tuple[np.ndarray, np.ndarray]:
    # the estimator fixed point has a kink where the training window ends
    # relative to beta, so split the tau range there when it is interior
    if geom.tau0 < geom.beta < 1.0:
        n1 = max(2, n // 2)
        x1, w1 = gauss_legendre_interval(n1, geom.tau0, geom.beta)
        x2, w2 = gauss_legendre_interval(n - n1 if n - n1 >= 2 else n1, geom.beta, 1.0)
        return np.concatenate([x1, x2]), np.concatenate([w1, w2])
    return gauss_legendre_interval(n, geom.tau0, 1.0)


def achievable_rate(geom: Geometry, sig: Signaling, N0: float,
                    quad: QuadratureConfig = QuadratureConfig(),
                    keep_samples: bool = False) -> RateBound:
    """Rate lower bound: the (tau, mu) integral of the scalar-channel MI.

    At each tau node the estimation fixed point gives xi^2; at each
    (tau, mu) node the detector fixed point gives sigma^2; the integrand
    is the hyperprior-averaged mutual information of the decoupled
    channel with gain sqrt((1 - xi^2)/alpha).
    """
    if N0 <= 0:
        raise DomainError(f"N0 must be > 0, got {N0}")
    t_nodes, t_w = _tau_nodes(geom, quad.legendre_nodes_tau)
    m_nodes, m_w = gauss_legendre_unit(quad.legendre_nodes_mu)
    samples = [] if keep_samples else None
    total = 0.0
    for tau, wt in zip(t_nodes, t_w):
        est = solve_estimator(geom, sig, N0, tau)
        a = float(np.sqrt((1.0 - est.xi2) / geom.alpha))
        for mu, wm in zip(m_nodes, m_w):
            det = solve_detector(geom, sig, N0, est, mu,
                                 hermite_nodes=quad.hermite_nodes)
            mi = sum(
                w * awgn_mutual_info(sig, AwgnChannelSpec(a, det.sigma2, theta),
                                     quad.hermite_nodes)
                for theta, w in sig.theta_atoms()
            )
            total += wt * wm * mi
            if samples is not None:
                samples.append((float(tau), float(mu), est.xi2, det.sigma2, mi))
    return RateBound(
        rate_bits_per_tx=float(max(total, 0.0)),
        grid=(len(t_nodes), len(m_nodes)),
        integrand_samples=tuple(samples) if samples is not None else None,
    )


def spectral_efficiency_rm(z: float, x: float) -> float:
    """Large-system mutual information per receive dimension of an i.i.d.
    channel with z transmit streams per receive dimension at SNR x.

    Equals lim (1/N) E[log2 det(I_N + (x z/M) H H^dagger)] for an N x M
    standard complex Gaussian H with z = M/N.
    """
    if z <= 0:
        raise DomainError(f"z must be > 0, got {z}")
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    if x == 0:
        return 0.0
    rz = np.sqrt(z)
    f = (np.sqrt(x * (1.0 + rz) ** 2 + 1.0) - np.sqrt(x * (1.0 - rz) ** 2 + 1.0)) ** 2
    return float(z * np.log2(1.0 + x - f / 4.0)
                 + np.log2(1.0 + x * z - f / 4.0)
                 - f / (4.0 * x) * np.log2(np.e))


def hh_bound(geom: Geometry, P: float, N0: float,
             tau0_override: float | None = None,
             optimize_tau0: bool = False) -> float:
    """Pilot-only baseline rate (bits/channel use/tx antenna).

    One-shot channel estimation from a training fraction tau0 (default
    beta, i.e. as many pilot symbols as transmit antennas), worst-case
    Gaussian treatment of the residual estimation error, then the
    large-system i.i.d.-channel spectral efficiency on the remaining
    fraction.  ``optimize_tau0`` maximizes over tau0 in [beta, 1).
    """
    if P < 0 or N0 <= 0:
        raise DomainError("need P >= 0 and N0 > 0")
    if P == 0:
        return 0.0

    def rate_at(tau0: float) -> float:
        xi_p2 = 1.0 / (1.0 + tau0 * P / (geom.beta * N0))
        n0_eff = N0 + P * xi_p2
        v = 1.0 - xi_p2
        if v <= 0.0:
            return 0.0
        return (1.0 - tau0) * spectral_efficiency_rm(
            geom.alpha, P * v / (geom.alpha * n0_eff)) / geom.alpha

    if optimize_tau0:
        res = minimize_scalar(lambda t: -rate_at(t), bounds=(geom.beta, 0.995),
                              method="bounded", options={"xatol": 1e-6})
        return float(-res.fun)
    tau0 = geom.beta if tau0_override is None else tau0_override
    if tau0 >= 1.0:
        raise DomainError(f"tau0 must be < 1, got {tau0}")
    return float(rate_at(tau0))


def low_snr_rate(r: float, s: float) -> float:
    """Closed-form rate limit at normalized SNR s = P/(beta N0), r = beta/alpha."""
    if s <= 0:
        raise DomainError(f"s must be > 0, got {s}")
    if r <= 0:
        raise DomainError(f"beta/alpha must be > 0, got {r}")
    g = s + r * s * s
    return float((1.0 + 1.0 / g) * np.log2(1.0 + g)
                 - (1.0 + 1.0 / s) * np.log2(1.0 + s))


def low_snr_curve(r: float, s_grid) -> tuple[list[LowSnrPoint], LowSnrPoint]:
    """Evaluate the low-SNR curve over s_grid; returns (points, Eb/N0 argmin)."""
    points = []
    for s in np.asarray(s_grid, dtype=np.float64):
        R = low_snr_rate(r, float(s))
        eb = r * float(s) / R
        points.append(LowSnrPoint(float(s), R, float(10.0 * np.log10(eb))))
    best = min(points, key=lambda p: p.eb_n0_db)
    return points, best


def multiplexing_gain(geom: Geometry, sig: Signaling,
                      snr_db_pair: tuple[float, float] = (40.0, 60.0),
                      quad: QuadratureConfig = QuadratureConfig()) -> float:
    """High-SNR slope d c / d log2(P/N0) from two-point finite difference."""
    d1, d2 = snr_db_pair
    if d1 == d2:
        raise ConfigError("need two distinct SNR points")
    rates = [
        achievable_rate(geom, sig, N0=sig.P / 10.0 ** (d / 10.0), quad=quad
                        ).rate_bits_per_tx
        for d in (d1, d2)
    ]
    dlog2 = (d2 - d1) / 10.0 * np.log2(10.0)
    return float((rates[1] - rates[0]) / dlog2)


def horizontal_gap_db(snr_ref_db, rate_ref, snr_query_db, rate_query) -> np.ndarray:
    """dB distance, read horizontally, from a query curve to a reference curve.

    For each query point (snr, rate) finds the SNR at which the reference
    curve reaches the same rate (monotone cubic inverse interpolation) and
    returns snr_query - snr_ref(rate).  Reference rates must be strictly
    increasing and cover the query rates.
    """
    rate_ref = np.asarray(rate_ref, dtype=np.float64)
    snr_ref_db = np.asarray(snr_ref_db, dtype=np.float64)
    if np.any(np.diff(rate_ref) <= 0):
        raise DomainError("reference rates must be strictly increasing")
    rq = np.asarray(rate_query, dtype=np.float64)
    if rq.min() < rate_ref.min() or rq.max() > rate_ref.max():
        raise DomainError("query rates outside the reference curve's range")
    inv = PchipInterpolator(rate_ref, snr_ref_db)
    return np.asarray(snr_query_db, dtype=np.float64) - inv(rq)


@dataclass(frozen=True)
class SweepPlan:
    """One-axis parameter sweep over a bounds quantity.

    quantity: "rate", "hh", or "lowsnr"; axis names the swept parameter
    ("sigma_theta2", "snr_db", "beta", or "s" for lowsnr).
    """

    quantity: str
    axis: str
    values: tuple[float, ...]
    geom: Geometry = field(default_factory=lambda: Geometry(1.0, 0.5, 0.0))
    family: str = "gauss"
    P: float = 1.0
    snr_db: float = 6.0
    sigma_theta2: float = 0.0
    hyperprior: str = "two-point-real"
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.quantity not in ("rate", "hh", "lowsnr"):
            raise ConfigError(f"unknown sweep quantity {self.quantity!r}")
        valid_axes = {"rate": ("sigma_theta2", "snr_db", "beta"),
                      "hh": ("snr_db", "beta", "tau0"),
                      "lowsnr": ("s",)}[self.quantity]
        if self.axis not in valid_axes:
            raise ConfigError(
                f"axis {self.axis!r} not valid for quantity {self.quantity!r}")


def sweep(plan: SweepPlan) -> list[dict]:
    """Evaluate the planned sweep; one dict row per axis value (deterministic)."""
    rows: list[dict] = []
    for value in plan.values:
        geom, snr_db, st2 = plan.geom, plan.snr_db, plan.sigma_theta2
        tau0_override = None
        if plan.axis == "beta":
            geom = Geometry(geom.alpha, float(value), geom.tau0)
        elif plan.axis == "snr_db":
            snr_db = float(value)
        elif plan.axis == "sigma_theta2":
            st2 = float(value)
        elif plan.axis == "tau0":
            tau0_override = float(value)
        N0 = plan.P / 10.0 ** (snr_db / 10.0)
        row = {plan.axis: float(value)}
        if plan.quantity == "rate":
            sig = make_signaling(plan.family, plan.P, st2, plan.hyperprior)
            row["rate"] = achievable_rate(geom, sig, N0, plan.quad).rate_bits_per_tx
        elif plan.quantity == "hh":
            row["rate"] = hh_bound(geom, plan.P, N0, tau0_override=tau0_override)
        else:
            r = geom.beta / geom.alpha
            R = low_snr_rate(r, float(value))
            row.update(rate=R, eb_n0_db=float(10.0 * np.log10(r * float(value) / R)))
        rows.append(row)
    return rows
