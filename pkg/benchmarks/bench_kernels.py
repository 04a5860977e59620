"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--nt 256] [--n 4096] [--repeat 5]

The first numba call includes JIT compilation (or a cache load) and is
reported separately.
"""

import argparse
import math
import time

import numpy as np

from lsmimo_secrecy import _kernels
from lsmimo_secrecy.channel_mc import cscg
from lsmimo_secrecy.config import base_config
from lsmimo_secrecy.analytics import min_power_for_qos, outage_log_term


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nt", type=int, default=256)
    ap.add_argument("--nr", type=int, default=4)
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba not installed; only the numpy path is available")
        return

    rng = np.random.default_rng(0)
    h_hat = cscg(rng, (args.n, args.nt))
    e = cscg(rng, (args.n, args.nt))
    g = cscg(rng, (args.n, args.nr, args.nt))

    t0 = time.perf_counter()
    _kernels.channel_gains_numba(h_hat, e, g, 0.8)
    first = time.perf_counter() - t0
    t_nb = best_of(lambda: _kernels.channel_gains_numba(h_hat, e, g, 0.8), args.repeat)
    t_np = best_of(lambda: _kernels.channel_gains_numpy(h_hat, e, g, 0.8), args.repeat)
    a = _kernels.channel_gains_numba(h_hat, e, g, 0.8)
    b = _kernels.channel_gains_numpy(h_hat, e, g, 0.8)
    diff = max(float(np.max(np.abs(x - y) / np.abs(y))) for x, y in zip(a, b))
    print(f"channel_gains  n={args.n} N_t={args.nt} N_r={args.nr}")
    print(f"  numba  {t_nb * 1e3:9.2f} ms   (first call {first * 1e3:.1f} ms)")
    print(f"  numpy  {t_np * 1e3:9.2f} ms   speedup {t_np / t_nb:5.1f}x   max rel diff {diff:.1e}")

    cfg = base_config(r_min_bps=0.0, p0_watt=5.0)
    p_min = min_power_for_qos(cfg).p_min_watt
    # zero steps select the default curvature-scaled update
    argv = (3.0e5, outage_log_term(cfg), cfg.bandwidth_hz, p_min, cfg.p_max_watt, 2 * cfg.p_max_watt,
            0.0, 0.0, 10_000, 1e-12)
    # q = 0 starts at the relaxed cap: the longest converging trajectory
    argv_q0 = (0.0,) + argv[1:]
    n_calls = 2000

    def loop(fn):
        for _ in range(n_calls):
            fn(*argv)
            fn(*argv_q0)

    t0 = time.perf_counter()
    _kernels.dual_ascent_numba(*argv)
    first = time.perf_counter() - t0
    t_nb = best_of(lambda: loop(_kernels.dual_ascent_numba), args.repeat)
    t_np = best_of(lambda: loop(_kernels.dual_ascent_numpy), args.repeat)
    pa = _kernels.dual_ascent_numba(*argv_q0)[0]
    pb = _kernels.dual_ascent_numpy(*argv_q0)[0]
    print(f"dual_ascent  {2 * n_calls} solves")
    print(f"  numba  {t_nb * 1e3:9.2f} ms   (first call {first * 1e3:.1f} ms)")
    print(f"  python {t_np * 1e3:9.2f} ms   speedup {t_np / t_nb:5.1f}x   |dP| {abs(pa - pb):.1e}")
    assert math.isclose(pa, pb, rel_tol=1e-12)


if __name__ == "__main__":
    main()
