"""Closed-form secrecy metrics for an MRT downlink with an antenna-selecting eavesdropper.

Everything here is a pure function of a :class:`SystemConfig`. Power
arguments accept scalars or numpy arrays; array inputs broadcast.

Most expressions share the quantity ``L = alpha**2 * ln(1 - (1 - eps)**(1/N_r))``,
which is negative for every ``eps`` in (0, 1). In terms of it the secrecy
outage capacity at power ``P`` is ``-W log2((1 - P L) / (rho P N_t))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig

LN2 = math.log(2.0)


def outage_log_term(cfg: SystemConfig, eps: float | None = None) -> float:
    """Return ``L = alpha^2 ln(1 - (1-eps)^(1/N_r))`` (negative); ``eps`` defaults to ``eps_max``."""
    eps = cfg.eps_max if eps is None else eps
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0,1), got {eps}")
    # ln(1 - e^x) with x = ln(1-eps)/N_r < 0, evaluated without cancellation at either end
    x = math.log1p(-eps) / cfg.n_r
    if x > -LN2:
        value = math.log(-math.expm1(x))
    else:
        value = math.log1p(-math.exp(x))
    return cfg.alpha**2 * value


def eavesdropper_gain_cdf(x, p_watt: float, alpha: float, n_r: int):
    """CDF of the strongest-antenna eavesdropper SNR, ``(1 - exp(-x / (P alpha^2)))**N_r``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("eavesdropper SNR threshold must be nonnegative")
    if p_watt <= 0:
        raise ValueError("p_watt must be positive")
    out = (-np.expm1(-x / (p_watt * alpha**2))) ** n_r
    return out if out.ndim else float(out)


def asymptotic_legitimate_capacity(p_watt, rho: float, n_t: int, bandwidth_hz: float):
    """Large-array legitimate capacity ``W log2(rho P N_t)``."""
    p = np.asarray(p_watt, dtype=float)
    arg = rho * p * n_t
    if np.any(arg <= 0):
        raise ValueError("rho * P * N_t must be positive")
    out = bandwidth_hz * np.log2(arg)
    return out if out.ndim else float(out)


def secrecy_outage_probability(r_sec_bps, p_watt: float, cfg: SystemConfig):
    """Probability that rate ``r_sec_bps`` exceeds the instantaneous secrecy rate.

    The large-array legitimate capacity stands in for ``C_s``, so outage is the
    event that the eavesdropper SNR exceeds ``rho P N_t 2^(-R/W) - 1``. A
    negative threshold means certain outage.
    """
    r = np.asarray(r_sec_bps, dtype=float)
    if p_watt <= 0:
        raise ValueError("p_watt must be positive")
    threshold = cfg.rho * p_watt * cfg.n_t * np.exp2(-r / cfg.bandwidth_hz) - 1.0
    safe = np.maximum(threshold, 0.0)
    cdf = (-np.expm1(-safe / (p_watt * cfg.alpha**2))) ** cfg.n_r
    out = np.where(threshold > 0, 1.0 - cdf, 1.0)
    return out if out.ndim else float(out)


def secrecy_outage_capacity(p_watt, eps: float, cfg: SystemConfig):
    """Largest rate whose secrecy outage probability equals ``eps`` (bit/s, may be negative)."""
    p = np.asarray(p_watt, dtype=float)
    if np.any(p <= 0):
        raise ValueError("p_watt must be positive")
    lterm = outage_log_term(cfg, eps)
    out = -cfg.bandwidth_hz * np.log2((1.0 - p * lterm) / (cfg.rho * p * cfg.n_t))
    return out if out.ndim else float(out)


def positive_secrecy_probability(p_watt, cfg: SystemConfig):
    """Probability of strictly positive secrecy capacity; 0 when ``rho P N_t < 1``."""
    p = np.asarray(p_watt, dtype=float)
    if np.any(p <= 0):
        raise ValueError("p_watt must be positive")
    margin = cfg.rho * p * cfg.n_t - 1.0
    base = -np.expm1(-np.maximum(margin, 0.0) / (p * cfg.alpha**2))
    out = np.where(margin >= 0, base**cfg.n_r, 0.0)
    return out if out.ndim else float(out)


def saturation_capacity(cfg: SystemConfig) -> float:
    """Supremum over power of the secrecy outage capacity at ``eps_max``: ``W log2(rho N_t / |L|)``."""
    lterm = outage_log_term(cfg)
    return cfg.bandwidth_hz * math.log2(cfg.rho * cfg.n_t / -lterm)


@dataclass(frozen=True)
class MinPower:
    """Outcome of the QoS power floor computation.

    ``p_min_watt`` is set only when the scenario is feasible; otherwise
    ``reason`` is ``"saturation_below_rmin"`` or ``"pmin_exceeds_pmax"``.
    """

    p_min_watt: float | None
    reason: str | None
    saturation_bps: float
    unclipped_p_min_watt: float | None = None

    @property
    def feasible(self) -> bool:
        return self.reason is None


def min_power_for_qos(cfg: SystemConfig) -> MinPower:
    """Smallest power meeting the rate floor at ``eps_max``.

    Solves ``R_sec(P) = R_min`` in closed form,
    ``P_min = 1 / (L + rho N_t 2^(-R_min/W))``.
    """
    lterm = outage_log_term(cfg)
    sat = saturation_capacity(cfg)
    denom = lterm + cfg.rho * cfg.n_t * 2.0 ** (-cfg.r_min_bps / cfg.bandwidth_hz)
    if denom <= 0:
        return MinPower(None, "saturation_below_rmin", sat)
    p_min = 1.0 / denom
    if p_min > cfg.p_max_watt:
        return MinPower(None, "pmin_exceeds_pmax", sat, p_min)
    return MinPower(p_min, None, sat, p_min)


@dataclass(frozen=True)
class SecrecyPoint:
    p_watt: float
    r_sec_bps: float
    r_sec_clamped_bps: float
    ee_bpj: float
    p_positive: float


def secrecy_energy_efficiency(p_watt, cfg: SystemConfig):
    """Vectorised ``max(R_sec(P), 0) / (P0 + P)`` at ``eps_max`` (bit/J)."""
    r = np.maximum(secrecy_outage_capacity(p_watt, cfg.eps_max, cfg), 0.0)
    out = r / (cfg.p0_watt + np.asarray(p_watt, dtype=float))
    return out if np.ndim(out) else float(out)


def energy_efficiency(p_watt: float, cfg: SystemConfig) -> SecrecyPoint:
    r = float(secrecy_outage_capacity(p_watt, cfg.eps_max, cfg))
    clamped = max(r, 0.0)
    return SecrecyPoint(
        p_watt=float(p_watt),
        r_sec_bps=r,
        r_sec_clamped_bps=clamped,
        ee_bpj=clamped / (cfg.p0_watt + p_watt),
        p_positive=float(positive_secrecy_probability(p_watt, cfg)),
    )
