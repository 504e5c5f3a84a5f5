"""Achievable-rate bounds and finite-size Monte Carlo for noncoherent
Rayleigh block-fading MIMO with LMMSE channel estimation and successive
decoding."""

__version__ = "0.1.0"

from .bounds import (LowSnrPoint, RateBound, SweepPlan, achievable_rate,
                     hh_bound, horizontal_gap_db, low_snr_curve, low_snr_rate,
                     multiplexing_gain, spectral_efficiency_rm, sweep)
from .errors import (BracketError, ConfigError, DomainError, NoSolutionError,
                     SdmimoError, SingularMatrixError)
from .kernels import (AwgnChannelSpec, awgn_mmse, awgn_mutual_info, kl_gauss,
                      qpsk_kernels_vec)
from .quadrature import (QuadratureConfig, gauss_hermite_standard_normal,
                         gauss_legendre_interval, gauss_legendre_unit)
from .signaling import Family, Hyperprior, Signaling, hyperprior_expect, make_signaling
from .simulator import (BlockState, McConfig, McResult, complex_randn,
                        lmmse_channel_estimate, lmmse_detect, measure_mse,
                        offdiag_scaling_study, large_system_mse_prediction,
                        simulate_block, trial_rng)
from .solver import (DetectorSolution, EstimatorSolution, Geometry,
                     free_energy, solve_detector, solve_estimator)

__all__ = [name for name in dir() if not name.startswith("_")]
