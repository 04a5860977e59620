import numpy as np
import pytest

from lsmimo_secrecy.analytics import min_power_for_qos, saturation_capacity
from lsmimo_secrecy.config import SystemConfig, base_config


def random_feasible_config(rng: np.random.Generator) -> SystemConfig:
    """Draw scenarios until one admits a power meeting its rate floor."""
    while True:
        cfg = SystemConfig(
            n_t=int(rng.integers(8, 129)),
            n_r=int(rng.integers(1, 5)),
            bandwidth_hz=float(10 ** rng.uniform(5, 7)),
            alpha=float(rng.uniform(0.3, 1.6)),
            rho=float(rng.uniform(0.3, 1.0)),
            eps_max=float(rng.uniform(0.005, 0.3)),
            r_min_bps=0.0,
            p0_watt=float(rng.uniform(0.05, 3.0)),
            p_max_watt=float(rng.uniform(1.0, 20.0)),
        )
        sat = saturation_capacity(cfg)
        if sat <= 0:
            continue
        cfg = cfg.replace(r_min_bps=float(rng.uniform(0.0, 0.9)) * sat)
        if min_power_for_qos(cfg).feasible:
            return cfg


def random_feasible_configs(n: int, seed: int) -> list[SystemConfig]:
    rng = np.random.default_rng(seed)
    return [random_feasible_config(rng) for _ in range(n)]


@pytest.fixture
def base():
    return base_config()


def bisect(f, lo, hi, iters=200):
    """Root of an increasing function on [lo, hi] by plain bisection."""
    flo = f(lo)
    assert flo < 0 < f(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
