"""Monte-Carlo simulation of the MRT wiretap downlink.

Samples are drawn in fixed-size blocks. Block ``k`` gets its own generator
seeded from ``SeedSequence(seed, spawn_key=(k,))``, and per-block results are
concatenated in block order, so estimates depend only on ``(seed, n_samples,
cfg)`` and not on how many workers ran the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import kstest

from . import _kernels, analytics
from .analytics import asymptotic_legitimate_capacity, eavesdropper_gain_cdf
from .config import SystemConfig

BLOCK_SIZE = 2048
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ChannelSample:
    h_hat: np.ndarray
    e: np.ndarray
    h: np.ndarray
    g: np.ndarray


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float
    n_samples: int
    seed: int

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "n_samples": self.n_samples, "seed": self.seed}


def cscg(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-variance circularly symmetric complex Gaussian array."""
    shape = tuple(np.atleast_1d(shape))
    pair = rng.standard_normal(shape + (2,))
    return pair.view(np.complex128)[..., 0] * _INV_SQRT2


def sample_channel(cfg: SystemConfig, rng: np.random.Generator) -> ChannelSample:
    h_hat = cscg(rng, cfg.n_t)
    e = cscg(rng, cfg.n_t)
    g = cscg(rng, (cfg.n_r, cfg.n_t))
    h = math.sqrt(cfg.rho) * h_hat + math.sqrt(1.0 - cfg.rho) * e
    return ChannelSample(h_hat=h_hat, e=e, h=h, g=g)


def mrt_beam(h_hat: np.ndarray) -> np.ndarray:
    """Unit-norm transmit beam along the estimated channel."""
    h_hat = np.asarray(h_hat, dtype=complex)
    norm = np.linalg.norm(h_hat)
    if not norm > np.finfo(float).tiny:
        raise ValueError("cannot beamform along a zero channel estimate")
    return h_hat / norm


def snr_pair(sample: ChannelSample, p_watt: float, cfg: SystemConfig) -> tuple[float, float]:
    """Legitimate SNR ``P |h^H w|^2`` and antenna-selection eavesdropper SNR."""
    w = mrt_beam(sample.h_hat)
    gamma_s = p_watt * abs(np.vdot(sample.h, w)) ** 2
    gamma_e = p_watt * cfg.alpha**2 * float(np.max(np.abs(sample.g @ w) ** 2))
    return float(gamma_s), gamma_e


def legitimate_gain_terms(h_hat: np.ndarray, e: np.ndarray, rho: float) -> tuple[float, float, float]:
    """The three pieces of ``|h^H w|^2`` under the CSI mismatch model.

    Returns ``(rho ||h_hat||^2, 2 sqrt(rho(1-rho)) Re(e^H h_hat), (1-rho) |e^H h_hat|^2 / ||h_hat||^2)``;
    their sum is the exact legitimate gain.
    """
    norm2 = float(np.vdot(h_hat, h_hat).real)
    cross = np.vdot(e, h_hat)
    return (
        rho * norm2,
        2.0 * math.sqrt(rho * (1.0 - rho)) * cross.real,
        (1.0 - rho) * abs(cross) ** 2 / norm2,
    )


def _block_gains(cfg: SystemConfig, seed: int, block: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    h_hat = cscg(rng, (n, cfg.n_t))
    e = cscg(rng, (n, cfg.n_t))
    g = cscg(rng, (n, cfg.n_r, cfg.n_t))
    return _kernels.channel_gains(h_hat, e, g, float(cfg.rho))


def simulate_gains(cfg: SystemConfig, n_samples: int, seed: int = 0,
                   workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Power-free gains ``(|h^H w|^2, max_i |g_i w|^2)`` for ``n_samples`` draws."""
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    sizes = [BLOCK_SIZE] * (n_samples // BLOCK_SIZE)
    if n_samples % BLOCK_SIZE:
        sizes.append(n_samples % BLOCK_SIZE)
    jobs = list(enumerate(sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda kn: _block_gains(cfg, seed, *kn), jobs))
    else:
        parts = [_block_gains(cfg, seed, k, n) for k, n in jobs]
    legit = np.concatenate([p[0] for p in parts])
    eve = np.concatenate([p[1] for p in parts])
    return legit, eve


def sample_snrs(cfg: SystemConfig, p_watt: float, n_samples: int, seed: int = 0,
                workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    legit, eve = simulate_gains(cfg, n_samples, seed, workers)
    return p_watt * legit, p_watt * cfg.alpha**2 * eve


def _proportion(hits: np.ndarray, seed: int) -> McEstimate:
    n = hits.size
    frac = float(np.count_nonzero(hits)) / n
    return McEstimate(frac, math.sqrt(frac * (1.0 - frac) / n), n, seed)


def empirical_outage(cfg: SystemConfig, r_bps: float, p_watt: float, n_samples: int = 100_000,
                     seed: int = 0, workers: int = 1) -> McEstimate:
    """Fraction of draws with ``r_bps > C_s - C_e`` using the exact finite-array ``C_s``."""
    if n_samples < 10_000:
        raise ValueError("n_samples must be at least 1e4")
    gamma_s, gamma_e = sample_snrs(cfg, p_watt, n_samples, seed, workers)
    w = cfg.bandwidth_hz
    c_s = w * np.log2(1.0 + gamma_s)
    c_e = w * np.log2(1.0 + gamma_e)
    return _proportion(r_bps > c_s - c_e, seed)


def empirical_positive_secrecy(cfg: SystemConfig, p_watt: float, n_samples: int = 100_000, seed: int = 0,
                               legitimate: str = "asymptotic", workers: int = 1) -> McEstimate:
    """Fraction of draws with positive secrecy rate.

    ``legitimate="asymptotic"`` uses the large-array ``C_s`` (which is what the
    closed form assumes); ``"exact"`` uses the simulated gain.
    """
    gamma_s, gamma_e = sample_snrs(cfg, p_watt, n_samples, seed, workers)
    w = cfg.bandwidth_hz
    if legitimate == "asymptotic":
        c_s = asymptotic_legitimate_capacity(p_watt, cfg.rho, cfg.n_t, w)
    elif legitimate == "exact":
        c_s = w * np.log2(1.0 + gamma_s)
    else:
        raise ValueError(f"unknown legitimate capacity model {legitimate!r}")
    return _proportion(c_s - w * np.log2(1.0 + gamma_e) > 0, seed)


def empirical_secrecy_capacity(cfg: SystemConfig, p_watt: float, eps: float, n_samples: int = 100_000,
                               seed: int = 0, workers: int = 1) -> float:
    """Large-array ``C_s`` minus the empirical ``(1-eps)``-quantile of ``C_e``."""
    _, gamma_e = sample_snrs(cfg, p_watt, n_samples, seed, workers)
    c_e = cfg.bandwidth_hz * np.log2(1.0 + gamma_e)
    return asymptotic_legitimate_capacity(p_watt, cfg.rho, cfg.n_t, cfg.bandwidth_hz) - float(
        np.quantile(c_e, 1.0 - eps)
    )


def ks_distance(samples: np.ndarray, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov statistic of ``samples`` against a continuous ``cdf``."""
    return float(kstest(samples, cdf).statistic)


def eavesdropper_cdf_ks(cfg: SystemConfig, p_watt: float, n_samples: int = 100_000, seed: int = 0,
                        workers: int = 1) -> float:
    _, gamma_e = sample_snrs(cfg, p_watt, n_samples, seed, workers)
    return ks_distance(gamma_e, lambda x: eavesdropper_gain_cdf(np.maximum(x, 0.0), p_watt, cfg.alpha, cfg.n_r))


@dataclass(frozen=True)
class Lemma1Point:
    n_t: int
    mean_capacity_bps: float
    stderr_bps: float
    asymptote_bps: float
    rel_error: float


def lemma1_convergence(cfg: SystemConfig, n_t_list, p_watt: float = 1.0, n_samples: int = 10_000,
                       seed: int = 0, workers: int = 1) -> list[Lemma1Point]:
    """Mean exact legitimate capacity against ``W log2(rho P N_t)`` for growing arrays."""
    n_t_list = list(n_t_list)
    if n_t_list != sorted(n_t_list):
        raise ValueError("n_t_list must be sorted ascending")
    out = []
    for n_t in n_t_list:
        sub = cfg.replace(n_t=int(n_t))
        legit, _ = simulate_gains(sub, n_samples, seed, workers)
        c_s = cfg.bandwidth_hz * np.log2(1.0 + p_watt * legit)
        mean = float(c_s.mean())
        asym = asymptotic_legitimate_capacity(p_watt, cfg.rho, int(n_t), cfg.bandwidth_hz)
        out.append(Lemma1Point(
            n_t=int(n_t),
            mean_capacity_bps=mean,
            stderr_bps=float(c_s.std(ddof=1) / math.sqrt(c_s.size)),
            asymptote_bps=asym,
            rel_error=abs(mean - asym) / abs(asym),
        ))
    return out


def simulation_report(cfg: SystemConfig, p_watt: float, n_samples: int = 100_000, seed: int = 0,
                      rate_bps: float | None = None, workers: int = 1) -> dict:
    """Empirical counterparts of the closed forms at one power, from a single set of draws."""
    legit, eve = simulate_gains(cfg, n_samples, seed, workers)
    w = cfg.bandwidth_hz
    gamma_s = p_watt * legit
    gamma_e = p_watt * cfg.alpha**2 * eve
    c_s = w * np.log2(1.0 + gamma_s)
    c_e = w * np.log2(1.0 + gamma_e)
    c_asym = analytics.asymptotic_legitimate_capacity(p_watt, cfg.rho, cfg.n_t, w)
    if rate_bps is None:
        rate_bps = float(analytics.secrecy_outage_capacity(p_watt, cfg.eps_max, cfg))
    outage = _proportion(rate_bps > c_s - c_e, seed)
    positive = _proportion(c_asym - c_e > 0, seed)
    ks = ks_distance(gamma_e, lambda x: eavesdropper_gain_cdf(np.maximum(x, 0.0), p_watt, cfg.alpha, cfg.n_r))
    return {
        "p_watt": float(p_watt),
        "rate_bps": float(rate_bps),
        "outage": {
            "empirical": outage.to_dict(),
            "closed_form": float(analytics.secrecy_outage_probability(rate_bps, p_watt, cfg)),
        },
        "positive_secrecy": {
            "empirical": positive.to_dict(),
            "closed_form": float(analytics.positive_secrecy_probability(p_watt, cfg)),
        },
        "eavesdropper_cdf_ks": ks,
        "legitimate_capacity": {
            "empirical_mean_bps": float(c_s.mean()),
            "stderr_bps": float(c_s.std(ddof=1) / math.sqrt(c_s.size)),
            "asymptote_bps": float(c_asym),
        },
    }
