"""Finite-size Monte Carlo of the block-fading channel with LMMSE
channel estimation and successive LMMSE detection.

One coherence block: Y = (1/sqrt(M)) H X + W with H an N x M standard
complex Gaussian channel, X pilots followed by data, W complex Gaussian
noise of variance N0 per entry.  At stage t the channel is re-estimated
from all past columns (genie-aided: past data symbols are fed back
error-free) plus the known biases of future columns treated as a virtual
channel; at substage m streams 1..m-1 of the current column are known
and subtracted, and stream m is detected by the LMMSE filter.

The per-block error covariance Xi_t and the per-substage normalized MSE
are the measured observables; companion predictions come from the
large-system fixed points with beta/tau = M/(t-1) and mu = (m-1)/M.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .accel import jit_kernel
from .errors import ConfigError, SingularMatrixError
from .solver import Geometry, _detector_quadratic, solve_estimator


@dataclass(frozen=True)
class McConfig:
    M: int
    N: int
    T_c: int
    T_tr: int
    stage_t: int
    substage_m: int
    P: float = 1.0
    N0: float = 1.0
    sigma_theta2: float = 0.0
    trials: int = 1000
    seed: int = 0
    family: str = "qpsk"

    def __post_init__(self):
        if min(self.M, self.N, self.T_c) < 1 or self.T_tr < 0:
            raise ConfigError("M, N, T_c must be >= 1 and T_tr >= 0")
        if not self.T_tr < self.T_c:
            raise ConfigError(f"need T_tr < T_c, got {self.T_tr} >= {self.T_c}")
        if not self.T_tr < self.stage_t <= self.T_c:
            raise ConfigError(f"need T_tr < stage_t <= T_c, got t={self.stage_t}")
        if not 1 <= self.substage_m <= self.M:
            raise ConfigError(f"need 1 <= substage_m <= M, got {self.substage_m}")
        if self.P < 0 or self.N0 < 0:
            raise ConfigError("P and N0 must be nonnegative")
        if not 0.0 <= self.sigma_theta2 < max(self.P, 1e-300):
            raise ConfigError("need 0 <= sigma_theta2 < P")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.family not in ("qpsk", "gauss"):
            raise ConfigError(f"unknown family {self.family!r}")


@dataclass(frozen=True)
class BlockState:
    H: np.ndarray
    X: np.ndarray
    Theta: np.ndarray
    Y: np.ndarray
    noise: np.ndarray


@dataclass(frozen=True)
class McResult:
    normalized_mse: float
    normalized_mse_stderr: float
    xi2_empirical: float
    xi2_stderr: float
    offdiag_abs_mean: float
    offdiag_scaled: float
    offdiag_mean_mag: float
    trials: int


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-split per-trial stream: serial and parallel execution agree."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def complex_randn(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-variance circular complex Gaussians via the Box-Muller map."""
    u1 = 1.0 - rng.random(shape)  # (0, 1], keeps the log finite
    u2 = rng.random(shape)
    return np.sqrt(-np.log(u1)) * np.exp(2j * np.pi * u2)


def _qpsk_biased(rng, theta: np.ndarray, P: float) -> np.ndarray:
    c = np.sqrt(P / 2.0)
    p_re = (1.0 + np.real(theta) / c) / 2.0
    p_im = (1.0 + np.imag(theta) / c) / 2.0
    re = np.where(rng.random(theta.shape) < p_re, c, -c)
    im = np.where(rng.random(theta.shape) < p_im, c, -c)
    return re + 1j * im


def simulate_block(cfg: McConfig, rng: np.random.Generator) -> BlockState:
    """Draw one coherence block (channel, symbols, biases, noise, output)."""
    H = complex_randn(rng, (cfg.N, cfg.M))
    Theta = np.zeros((cfg.M, cfg.T_c), dtype=np.complex128)
    n_data = cfg.T_c - cfg.T_tr
    if cfg.sigma_theta2 > 0.0 and n_data > 0:
        # two-point real hyperprior: theta = +-sigma_theta equiprobably
        s = np.sqrt(cfg.sigma_theta2)
        Theta[:, cfg.T_tr:] = s * np.where(
            rng.random((cfg.M, n_data)) < 0.5, 1.0, -1.0)
    X = np.empty((cfg.M, cfg.T_c), dtype=np.complex128)
    X[:, :cfg.T_tr] = _qpsk_biased(rng, np.zeros((cfg.M, cfg.T_tr)), cfg.P)
    if n_data > 0:
        th = Theta[:, cfg.T_tr:]
        if cfg.family == "qpsk":
            X[:, cfg.T_tr:] = _qpsk_biased(rng, th, cfg.P)
        else:
            v = cfg.P - np.abs(th) ** 2
            X[:, cfg.T_tr:] = th + np.sqrt(v) * complex_randn(rng, th.shape)
    noise = np.sqrt(cfg.N0) * complex_randn(rng, (cfg.N, cfg.T_c))
    Y = H @ X / np.sqrt(cfg.M) + noise
    return BlockState(H=H, X=X, Theta=Theta, Y=Y, noise=noise)


@jit_kernel
def _estimate_kernel(Y_past, X_past, Y_fut, Theta_fut, w_fut, N0, M):
    # Xi = [I + (1/M)(X_p X_p^H / N0 + sum_f theta theta^H w_f)]^-1,
    # Hhat = (1/sqrt(M)) [Y_p X_p^H / N0 + sum_f y theta^H w_f] Xi
    A = np.zeros((M, M), dtype=np.complex128)
    for i in range(M):
        A[i, i] = 1.0
    B = np.zeros((Y_past.shape[0], M), dtype=np.complex128)
    if X_past.shape[1] > 0:
        A += X_past @ np.conj(X_past).T / (M * N0)
        B += Y_past @ np.conj(X_past).T / N0
    for f in range(Theta_fut.shape[1]):
        th = Theta_fut[:, f].copy()
        yf = Y_fut[:, f].copy()
        th_row = np.conj(th).reshape(1, M)
        A += (th.reshape(M, 1) @ th_row) * (w_fut[f] / M)
        B += (yf.reshape(yf.shape[0], 1) @ th_row) * w_fut[f]
    Xi = np.linalg.inv(A)
    Xi = 0.5 * (Xi + np.conj(Xi).T)
    Hhat = (B @ Xi) / np.sqrt(M)
    return Hhat, Xi


@jit_kernel
def _detect_kernel(y, x_known, theta_unk, Hhat, Xi_diag, x_abs2_known,
                   P, N0, M, m):
    # zeta: residual channel-estimation noise seen by the detector
    zeta = 0.0
    for i in range(m - 1):
        zeta += x_abs2_known[i] * Xi_diag[i]
    for i in range(m - 1, M):
        zeta += P * Xi_diag[i]
    zeta /= M
    Hu = np.ascontiguousarray(Hhat[:, m - 1:])
    if m > 1:
        r = y - np.ascontiguousarray(Hhat[:, : m - 1]) @ x_known / np.sqrt(M)
    else:
        r = y.copy()
    k = M - m + 1
    SigInv = np.zeros((k, k), dtype=np.complex128)
    for i in range(k):
        SigInv[i, i] = 1.0 / (P - np.abs(theta_unk[i]) ** 2)
    XiL = np.linalg.inv(SigInv + np.conj(Hu).T @ Hu / (M * (N0 + zeta)))
    xhat = XiL @ (np.conj(Hu).T @ r / (np.sqrt(M) * (N0 + zeta)) + SigInv @ theta_unk)
    return xhat, XiL, zeta


def lmmse_channel_estimate(block: BlockState, cfg: McConfig):
    """(Hhat_t, Xi_t) at stage t from past columns and future biases."""
    t = cfg.stage_t
    past = slice(0, t - 1)
    fut = slice(t, cfg.T_c)
    Theta_fut = block.Theta[:, fut]
    # virtual-channel weight per future column, from the realized bias power
    sigma2_fut = np.abs(Theta_fut) ** 2
    w_fut = 1.0 / (cfg.P - sigma2_fut.mean(axis=0) + cfg.N0)
    nz = np.abs(Theta_fut).max(axis=0) > 0 if Theta_fut.shape[1] else np.zeros(0, bool)
    Hhat, Xi = _estimate_kernel(
        np.ascontiguousarray(block.Y[:, past]),
        np.ascontiguousarray(block.X[:, past]),
        np.ascontiguousarray(block.Y[:, fut][:, nz]),
        np.ascontiguousarray(Theta_fut[:, nz]),
        np.ascontiguousarray(w_fut[nz]),
        cfg.N0, cfg.M,
    )
    if not np.all(np.isfinite(Xi)):
        raise SingularMatrixError("error covariance solve produced non-finite values")
    return Hhat, Xi


def lmmse_detect(block: BlockState, Hhat: np.ndarray, Xi: np.ndarray,
                 cfg: McConfig) -> tuple[complex, float]:
    """LMMSE estimate of stream m of column t (streams < m genie-known).

    Returns (xhat_m, posterior_var) where posterior_var is the filter's
    own error-variance estimate for stream m.
    """
    t, m = cfg.stage_t, cfg.substage_m
    y = block.Y[:, t - 1]
    x_col = block.X[:, t - 1]
    theta_unk = block.Theta[m - 1:, t - 1]
    xhat, XiL, _ = _detect_kernel(
        np.ascontiguousarray(y), np.ascontiguousarray(x_col[: m - 1]),
        np.ascontiguousarray(theta_unk), Hhat,
        np.ascontiguousarray(np.real(np.diag(Xi))),
        np.ascontiguousarray(np.abs(x_col[: m - 1]) ** 2),
        cfg.P, cfg.N0, cfg.M, m,
    )
    return complex(xhat[0]), float(np.real(XiL[0, 0]))


def large_system_mse_prediction(cfg: McConfig) -> float:
    """Large-system normalized MSE at (t, m) for the linear detector.

    Uses the finite-size correction beta/tau = M/(t-1), mu = (m-1)/M and
    the Gaussian-form (linear filter) detector fixed point.
    """
    beta = cfg.M / cfg.T_c
    tau = (cfg.stage_t - 1) / cfg.T_c
    alpha = cfg.M / cfg.N
    geom = Geometry(alpha=alpha, beta=beta, tau0=0.0)

    class _Sig:
        P = cfg.P
        sigma_theta2 = cfg.sigma_theta2

    est = solve_estimator(geom, _Sig, cfg.N0, tau)
    mu = (cfg.substage_m - 1) / cfg.M
    sigma2 = _detector_quadratic(geom, _Sig, cfg.N0, est, mu)
    v = cfg.P - cfg.sigma_theta2
    return float(alpha * v * sigma2
                 / (((1.0 - est.xi2) * v + alpha * sigma2) * cfg.P))


def measure_mse(cfg: McConfig) -> McResult:
    """Monte Carlo normalized detector MSE plus Xi_t statistics at (t, m)."""
    M = cfg.M
    errs = np.empty(cfg.trials)
    diag_means = np.empty(cfg.trials)
    offdiag_abs = np.empty(cfg.trials)
    offdiag_sum = 0.0 + 0.0j
    n_off = M * (M - 1)
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        block = simulate_block(cfg, rng)
        Hhat, Xi = lmmse_channel_estimate(block, cfg)
        d = np.real(np.diag(Xi))
        diag_means[trial] = d.mean()
        off = Xi - np.diag(np.diag(Xi))
        if n_off:
            offdiag_abs[trial] = np.abs(off).sum() / n_off
            offdiag_sum += off.sum() / n_off
        else:
            offdiag_abs[trial] = 0.0
        xhat, _ = lmmse_detect(block, Hhat, Xi, cfg)
        x_true = block.X[cfg.substage_m - 1, cfg.stage_t - 1]
        errs[trial] = np.abs(x_true - xhat) ** 2 / cfg.P
    sqrt_n = np.sqrt(cfg.trials)
    return McResult(
        normalized_mse=float(errs.mean()),
        normalized_mse_stderr=float(errs.std(ddof=1) / sqrt_n) if cfg.trials > 1 else 0.0,
        xi2_empirical=float(diag_means.mean()),
        xi2_stderr=float(diag_means.std(ddof=1) / sqrt_n) if cfg.trials > 1 else 0.0,
        offdiag_abs_mean=float(offdiag_abs.mean()),
        offdiag_scaled=float(offdiag_abs.mean() * M**0.75),
        offdiag_mean_mag=float(np.abs(offdiag_sum) / cfg.trials),
        trials=cfg.trials,
    )


def offdiag_scaling_study(cfg_list: list[McConfig]) -> list[dict]:
    """Xi_t statistics across system sizes at fixed shape ratios.

    One row per config: the mean diagonal with its large-system prediction,
    the mean absolute off-diagonal entry, and its M^(3/4)-scaled versions
    for both the per-entry magnitude and the magnitude of the mean entry.
    """
    rows = []
    for cfg in cfg_list:
        res = measure_mse(cfg)
        beta = cfg.M / cfg.T_c
        tau = (cfg.stage_t - 1) / cfg.T_c

        class _Sig:
            P = cfg.P
            sigma_theta2 = cfg.sigma_theta2

        est = solve_estimator(Geometry(cfg.M / cfg.N, beta, 0.0), _Sig, cfg.N0, tau)
        rows.append({
            "M": cfg.M,
            "xi2_empirical": res.xi2_empirical,
            "xi2_stderr": res.xi2_stderr,
            "xi2_pred": est.xi2,
            "offdiag_abs_mean": res.offdiag_abs_mean,
            "offdiag_scaled": res.offdiag_scaled,
            "offdiag_mean_mag": res.offdiag_mean_mag,
            "offdiag_mean_mag_scaled": res.offdiag_mean_mag * cfg.M**0.75,
            "trials": res.trials,
        })
    return rows
