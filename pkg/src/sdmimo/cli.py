"""Command-line front end.

Every subcommand resolves its parameters into a flat config dict, runs
the corresponding computation, and writes a deterministic table: CSV
with a ``#``-prefixed header block (tool version plus the full resolved
config) followed by a column-name row and data rows, or a JSON mirror of
the same schema.  Identical invocations produce identical bytes.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bounds import (SweepPlan, achievable_rate, hh_bound, low_snr_curve,
                     multiplexing_gain, sweep)
from .errors import ConfigError, DomainError, SdmimoError
from .quadrature import QuadratureConfig
from .signaling import make_signaling
from .simulator import (McConfig, measure_mse, offdiag_scaling_study,
                        large_system_mse_prediction)
from .solver import Geometry, solve_detector, solve_estimator


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _write_table(config: dict, columns: list[str], rows: list[list],
                 fmt: str, path: str | None) -> None:
    if fmt == "csv":
        lines = [f"# sdmimo {__version__}"]
        for key in sorted(config):
            lines.append(f"# {key} = {_fmt(config[key])}")
        lines.append("# rates in bits/channel-use/tx-antenna; SNR in dB")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "tool": f"sdmimo {__version__}",
            "config": {k: config[k] for k in sorted(config)},
            "columns": columns,
            "rows": [[v for v in row] for row in rows],
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_geometry(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--tau0", type=float, default=0.0)


def _add_signaling(p: argparse.ArgumentParser) -> None:
    p.add_argument("--signaling", choices=("gauss", "qpsk"), default="gauss")
    p.add_argument("--power", type=float, default=1.0)
    p.add_argument("--sigma-theta2", type=float, default=0.0)
    p.add_argument("--hyperprior", choices=("two-point-real", "fixed-magnitude"),
                   default="two-point-real")


def _add_quad(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hermite-nodes", type=int, default=96)
    p.add_argument("--tau-nodes", type=int, default=32)
    p.add_argument("--mu-nodes", type=int, default=32)


def _quad(args) -> QuadratureConfig:
    return QuadratureConfig(hermite_nodes=args.hermite_nodes,
                            legendre_nodes_tau=args.tau_nodes,
                            legendre_nodes_mu=args.mu_nodes)


def _snr_list(args) -> list[float]:
    snrs = list(args.snr_db)
    if snrs != sorted(snrs) or not all(np.isfinite(snrs)):
        raise ConfigError("--snr-db values must be finite and sorted")
    return snrs


def _resolved(args, skip=("output", "format", "func")) -> dict:
    return {k.replace("_", "-"): v for k, v in sorted(vars(args).items())
            if k not in skip and v is not None}


def _cmd_estimator(args) -> None:
    geom = Geometry(args.alpha, args.beta, args.tau0)
    sig = make_signaling(args.signaling, args.power, args.sigma_theta2,
                         args.hyperprior)
    rows = []
    for snr in _snr_list(args):
        est = solve_estimator(geom, sig, args.power / 10 ** (snr / 10), args.tau)
        rows.append([snr, est.tau, est.xi2, est.sigma_tr2, est.sigma_c2])
    _write_table(_resolved(args), ["snr_db", "tau", "xi2", "sigma_tr2", "sigma_c2"],
                 rows, args.format, args.output)


def _cmd_detector(args) -> None:
    geom = Geometry(args.alpha, args.beta, args.tau0)
    sig = make_signaling(args.signaling, args.power, args.sigma_theta2,
                         args.hyperprior)
    rows = []
    for snr in _snr_list(args):
        N0 = args.power / 10 ** (snr / 10)
        est = solve_estimator(geom, sig, N0, args.tau)
        det = solve_detector(geom, sig, N0, est, args.mu,
                             hermite_nodes=args.hermite_nodes)
        rows.append([snr, est.tau, args.mu, est.xi2, det.sigma2,
                     len(det.candidates), det.candidates[det.selected_index][1]])
    _write_table(_resolved(args),
                 ["snr_db", "tau", "mu", "xi2", "sigma2", "n_candidates",
                  "free_energy"],
                 rows, args.format, args.output)


def _cmd_rate(args) -> None:
    geom = Geometry(args.alpha, args.beta, args.tau0)
    sig = make_signaling(args.signaling, args.power, args.sigma_theta2,
                         args.hyperprior)
    quad = _quad(args)
    rows = []
    for snr in _snr_list(args):
        rb = achievable_rate(geom, sig, args.power / 10 ** (snr / 10), quad)
        rows.append([snr, rb.rate_bits_per_tx])
    _write_table(_resolved(args), ["snr_db", "rate"], rows, args.format, args.output)


def _cmd_hh(args) -> None:
    geom = Geometry(args.alpha, args.beta, args.tau0)
    rows = []
    for snr in _snr_list(args):
        rate = hh_bound(geom, args.power, args.power / 10 ** (snr / 10),
                        tau0_override=args.tau0_pilot,
                        optimize_tau0=args.optimize_tau0)
        rows.append([snr, rate])
    _write_table(_resolved(args), ["snr_db", "rate"], rows, args.format, args.output)


def _cmd_lowsnr(args) -> None:
    if args.s_min <= 0 or args.s_max <= args.s_min or args.points < 2:
        raise ConfigError("need 0 < s-min < s-max and points >= 2")
    s_grid = np.geomspace(args.s_min, args.s_max, args.points)
    points, best = low_snr_curve(args.beta_over_alpha, s_grid)
    rows = [[p.s, p.rate_R, p.eb_n0_db, int(p is best)] for p in points]
    rows.append([best.s, best.rate_R, best.eb_n0_db, 1])
    _write_table(_resolved(args), ["s", "rate", "eb_n0_db", "is_argmin"],
                 rows, args.format, args.output)


def _cmd_gain(args) -> None:
    geom = Geometry(args.alpha, args.beta, args.tau0)
    sig = make_signaling(args.signaling, args.power, 0.0)
    slope = multiplexing_gain(geom, sig, tuple(args.snr_db_pair), _quad(args))
    _write_table(_resolved(args), ["slope", "one_minus_beta"],
                 [[slope, 1.0 - args.beta]], args.format, args.output)


def _cmd_sweep(args) -> None:
    plan = SweepPlan(
        quantity=args.quantity, axis=args.axis,
        values=tuple(float(v) for v in args.values.split(",")),
        geom=Geometry(args.alpha, args.beta, args.tau0),
        family=args.signaling, P=args.power, snr_db=args.base_snr_db,
        sigma_theta2=args.sigma_theta2, hyperprior=args.hyperprior,
        quad=_quad(args),
    )
    rows_d = sweep(plan)
    columns = list(rows_d[0].keys()) if rows_d else [plan.axis, "rate"]
    rows = [[r[c] for c in columns] for r in rows_d]
    _write_table(_resolved(args), columns, rows, args.format, args.output)


def _cmd_simulate(args) -> None:
    rows = []
    for snr in _snr_list(args):
        cfg = McConfig(M=args.m, N=args.n, T_c=args.tc, T_tr=args.ttr,
                       stage_t=args.t, substage_m=args.substage,
                       P=args.power, N0=args.power / 10 ** (snr / 10),
                       sigma_theta2=args.sigma_theta2, trials=args.trials,
                       seed=args.seed, family=args.signaling)
        res = measure_mse(cfg)
        rows.append([snr, res.normalized_mse, res.normalized_mse_stderr,
                     large_system_mse_prediction(cfg), res.xi2_empirical,
                     res.xi2_stderr, res.offdiag_abs_mean, res.trials])
    _write_table(_resolved(args),
                 ["snr_db", "normalized_mse", "stderr", "prediction",
                  "xi2_empirical", "xi2_stderr", "offdiag_abs_mean", "trials"],
                 rows, args.format, args.output)


def _cmd_offdiag(args) -> None:
    m_list = [int(v) for v in args.m_list.split(",")]
    cfgs = []
    for M in m_list:
        t = args.cols_per_m * M + 1
        cfgs.append(McConfig(M=M, N=max(1, round(M / args.alpha)), T_c=t,
                             T_tr=min(M, t - 1), stage_t=t, substage_m=1,
                             P=args.power, N0=args.power / 10 ** (args.snr_db / 10),
                             sigma_theta2=args.sigma_theta2, trials=args.trials,
                             seed=args.seed, family=args.signaling))
    rows_d = offdiag_scaling_study(cfgs)
    columns = list(rows_d[0].keys())
    rows = [[r[c] for c in columns] for r in rows_d]
    _write_table(_resolved(args), columns, rows, args.format, args.output)


def _cmd_preset(args) -> None:
    name, fmt, out = args.name, args.format, args.output
    if name == "fig2":
        rows = []
        for family in ("gauss", "qpsk"):
            for st2 in (0.0, 0.1, 0.2, 0.3, 0.4, 0.5):
                sig = make_signaling(family, 1.0, st2)
                rb = achievable_rate(Geometry(1.0, 0.5, 0.0), sig,
                                     10 ** (-6 / 10))
                rows.append([family, st2, rb.rate_bits_per_tx])
        _write_table({"preset": name}, ["family", "sigma_theta2", "rate"],
                     rows, fmt, out)
    elif name in ("fig3", "fig5"):
        beta = 0.5 if name == "fig3" else 0.1
        geom = Geometry(1.0, beta, 0.0)
        rows = []
        for snr in range(0, 13, 2):
            N0 = 10 ** (-snr / 10)
            row = [float(snr)]
            for family in ("gauss", "qpsk"):
                sig = make_signaling(family, 1.0, 0.0)
                row.append(achievable_rate(geom, sig, N0).rate_bits_per_tx)
            row.append(hh_bound(geom, 1.0, N0, optimize_tau0=True))
            rows.append(row)
        _write_table({"preset": name, "beta": beta},
                     ["snr_db", "rate_gauss", "rate_qpsk", "rate_hh"],
                     rows, fmt, out)
    elif name == "fig6":
        rows = []
        for snr in range(0, 13, 3):
            cfg = McConfig(M=8, N=8, T_c=17, T_tr=8, stage_t=17, substage_m=3,
                           P=1.0, N0=10 ** (-snr / 10), trials=args.trials,
                           seed=args.seed, family="qpsk")
            res = measure_mse(cfg)
            rows.append([float(snr), res.normalized_mse,
                         res.normalized_mse_stderr, large_system_mse_prediction(cfg)])
        _write_table({"preset": name, "trials": args.trials, "seed": args.seed},
                     ["snr_db", "normalized_mse", "stderr", "prediction"],
                     rows, fmt, out)
    else:
        raise ConfigError(f"unknown preset {name!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdmimo",
        description="Achievable-rate bounds and Monte Carlo for noncoherent "
                    "block-fading MIMO with successive decoding.")
    parser.add_argument("--version", action="version",
                        version=f"sdmimo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimator", help="channel-estimation fixed point")
    _add_common(p); _add_geometry(p); _add_signaling(p)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--snr-db", type=float, nargs="+", default=[6.0])
    p.set_defaults(func=_cmd_estimator)

    p = sub.add_parser("detector", help="detector fixed point")
    _add_common(p); _add_geometry(p); _add_signaling(p)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--hermite-nodes", type=int, default=96)
    p.add_argument("--snr-db", type=float, nargs="+", default=[6.0])
    p.set_defaults(func=_cmd_detector)

    p = sub.add_parser("rate", help="achievable-rate lower bound")
    _add_common(p); _add_geometry(p); _add_signaling(p); _add_quad(p)
    p.add_argument("--snr-db", type=float, nargs="+", default=[6.0])
    p.set_defaults(func=_cmd_rate)

    p = sub.add_parser("hh", help="pilot-only baseline bound")
    _add_common(p); _add_geometry(p)
    p.add_argument("--power", type=float, default=1.0)
    p.add_argument("--tau0-pilot", type=float, default=None,
                   help="training fraction (default beta)")
    p.add_argument("--optimize-tau0", action="store_true")
    p.add_argument("--snr-db", type=float, nargs="+", default=[6.0])
    p.set_defaults(func=_cmd_hh)

    p = sub.add_parser("lowsnr", help="low-SNR rate and Eb/N0 curve")
    _add_common(p)
    p.add_argument("--beta-over-alpha", type=float, default=1.0)
    p.add_argument("--s-min", type=float, default=1e-3)
    p.add_argument("--s-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(func=_cmd_lowsnr)

    p = sub.add_parser("gain", help="high-SNR multiplexing-gain slope")
    _add_common(p); _add_geometry(p); _add_quad(p)
    p.add_argument("--signaling", choices=("gauss",), default="gauss")
    p.add_argument("--power", type=float, default=1.0)
    p.add_argument("--snr-db-pair", type=float, nargs=2, default=[40.0, 60.0])
    p.set_defaults(func=_cmd_gain)

    p = sub.add_parser("sweep", help="one-axis parameter sweep")
    _add_common(p); _add_geometry(p); _add_signaling(p); _add_quad(p)
    p.add_argument("--quantity", choices=("rate", "hh", "lowsnr"), default="rate")
    p.add_argument("--axis", required=True)
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.add_argument("--base-snr-db", type=float, default=6.0)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="finite-size Monte Carlo MSE")
    _add_common(p)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--tc", type=int, default=17)
    p.add_argument("--ttr", type=int, default=8)
    p.add_argument("--t", type=int, default=17)
    p.add_argument("--substage", type=int, default=3)
    p.add_argument("--power", type=float, default=1.0)
    p.add_argument("--sigma-theta2", type=float, default=0.0)
    p.add_argument("--signaling", choices=("gauss", "qpsk"), default="qpsk")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snr-db", type=float, nargs="+", default=[6.0])
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("offdiag", help="error-covariance scaling study")
    _add_common(p)
    p.add_argument("--m-list", default="4,8,16,32")
    p.add_argument("--cols-per-m", type=int, default=2)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--power", type=float, default=1.0)
    p.add_argument("--sigma-theta2", type=float, default=0.0)
    p.add_argument("--signaling", choices=("gauss", "qpsk"), default="qpsk")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snr-db", type=float, default=6.0)
    p.set_defaults(func=_cmd_offdiag)

    p = sub.add_parser("preset", help="canned parameter-set presets")
    _add_common(p)
    p.add_argument("name", choices=("fig2", "fig3", "fig5", "fig6"))
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_preset)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except SdmimoError as exc:
        print(f"error: numeric: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
