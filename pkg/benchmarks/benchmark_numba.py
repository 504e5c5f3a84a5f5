"""Benchmark the jitted kernels against the pure-numpy fallback.

Runs the same workloads in two subprocesses, one with SDMIMO_NO_NUMBA=1,
and reports wall times.  The first QPSK rate evaluation in the jitted
process includes JIT compilation, so each workload is timed on a second,
warm call.

Usage: python3 benchmarks/benchmark_numba.py
"""
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
from sdmimo import Geometry, McConfig, achievable_rate, measure_mse
from sdmimo.signaling import make_signaling
from sdmimo import accel

geom = Geometry(1.0, 0.5, 0.0)
qpsk = make_signaling("qpsk", 1.0)
N0 = 10 ** -0.6
cfg = McConfig(M=8, N=8, T_c=17, T_tr=8, stage_t=17, substage_m=3,
               P=1.0, N0=N0, trials=1500, seed=1, family="qpsk")

# warm-up: triggers JIT compilation when numba is enabled
achievable_rate(geom, qpsk, N0)
measure_mse(cfg)

t0 = time.perf_counter()
achievable_rate(geom, qpsk, N0)
t1 = time.perf_counter()
measure_mse(cfg)
t2 = time.perf_counter()
print(json.dumps({"numba": accel.NUMBA_ENABLED,
                  "qpsk_rate_s": t1 - t0, "mc_1500_trials_s": t2 - t1}))
"""


def run(no_numba: bool) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["SDMIMO_NO_NUMBA"] = "1"
    else:
        env.pop("SDMIMO_NO_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    jit = run(no_numba=False)
    plain = run(no_numba=True)
    assert jit["numba"] and not plain["numba"]
    print(f"{'workload':<22}{'numba':>10}{'numpy':>10}{'speedup':>9}")
    for key, label in (("qpsk_rate_s", "qpsk rate integral"),
                       ("mc_1500_trials_s", "mc sim (1500 trials)")):
        print(f"{label:<22}{jit[key]:>9.2f}s{plain[key]:>9.2f}s"
              f"{plain[key] / jit[key]:>8.1f}x")


if __name__ == "__main__":
    main()
