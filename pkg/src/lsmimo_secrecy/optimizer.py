"""Energy-efficient transmit power allocation.

The ratio ``R_sec(P) / (P0 + P)`` is maximised over ``[P_min, P_max]`` by
Dinkelbach iteration. Each outer step fixes ``q`` and minimises the convex
subtractive objective

    f_q(P) = W log2((1 - P L) / (rho P N_t)) + q (P0 + P)

either through Lagrangian dual ascent on the two box constraints (the default)
or directly by clipping the unique stationary point to the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .analytics import (
    LN2,
    MinPower,
    min_power_for_qos,
    outage_log_term,
    secrecy_energy_efficiency,
    secrecy_outage_capacity,
)
from .config import SolverSettings, SystemConfig


class InfeasibleError(ValueError):
    """The rate floor cannot be met within the power cap."""

    def __init__(self, reason: str, min_power: MinPower):
        super().__init__(f"scenario infeasible: {reason}")
        self.reason = reason
        self.min_power = min_power


class NoStationaryPoint(ValueError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, trace=()):
        super().__init__(message)
        self.trace = list(trace)


@dataclass
class PowerAllocationResult:
    status: str
    p_star_watt: float | None
    q_star_bpj: float
    r_sec_bps: float | None
    outer_iters: int
    trace: list[tuple[float, float]] = field(default_factory=list)
    infeasibility_reason: str | None = None
    p_min_watt: float | None = None
    saturation_bps: float | None = None
    inner_iters: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "p_star_watt": self.p_star_watt,
            "q_star_bpj": self.q_star_bpj,
            "r_sec_bps": self.r_sec_bps,
            "outer_iters": self.outer_iters,
            "inner_iters": self.inner_iters,
            "p_min_watt": self.p_min_watt,
            "saturation_bps": self.saturation_bps,
            "infeasibility_reason": self.infeasibility_reason,
            "trace": [{"q": q, "p": p} for q, p in self.trace],
        }


def j2_objective(p_watt, q: float, cfg: SystemConfig):
    """Subtractive objective ``-R_sec(P) + q (P0 + P)`` at ``eps_max``."""
    p = np.asarray(p_watt, dtype=float)
    return -secrecy_outage_capacity(p, cfg.eps_max, cfg) + q * (cfg.p0_watt + p)


def lagrangian(p_watt, q: float, mu: float, nu: float, cfg: SystemConfig, p_min: float):
    return j2_objective(p_watt, q, cfg) + mu * (p_min - p_watt) + nu * (p_watt - cfg.p_max_watt)


def objective_curvature(p_watt: float, cfg: SystemConfig) -> float:
    """Second derivative of ``-R_sec`` in ``P``; strictly positive."""
    lterm = outage_log_term(cfg)
    return cfg.bandwidth_hz / LN2 * (1.0 - 2.0 * lterm * p_watt) / (p_watt * (1.0 - lterm * p_watt)) ** 2


def solve_kkt_stationarity(q: float, mu: float, nu: float, cfg: SystemConfig) -> tuple[float, ...]:
    """Positive roots of the Lagrangian's power derivative.

    Setting ``W / (ln2 (L P^2 - P)) + q - mu + nu = 0`` gives the quadratic
    ``L P^2 - P + c = 0`` with ``c = W / (ln2 (q - mu + nu))``. Because ``L < 0``
    and ``c > 0`` its discriminant exceeds 1, leaving exactly one positive root.
    """
    s = q - mu + nu
    if not s > 0:
        raise NoStationaryPoint(f"Lagrangian is decreasing in P for q - mu + nu = {s:g} <= 0")
    lterm = outage_log_term(cfg)
    c = cfg.bandwidth_hz / (LN2 * s)
    disc = 1.0 - 4.0 * lterm * c
    if disc < 0:  # unreachable for L < 0; kept for completeness
        raise NoStationaryPoint("negative discriminant")
    # 2c / (1 + sqrt(disc)) is (1 - sqrt(disc)) / (2L) without the cancellation
    root = 2.0 * c / (1.0 + math.sqrt(disc))
    return (root,)


def dual_update(mu: float, nu: float, p_watt: float, settings: SolverSettings,
                p_min: float, p_max: float) -> tuple[float, float]:
    """One projected gradient-ascent step on the dual variables."""
    if settings.step_mu is None or settings.step_nu is None:
        raise ValueError("dual_update needs explicit step sizes")
    mu = max(mu + settings.step_mu * (p_min - p_watt), 0.0)
    nu = max(nu + settings.step_nu * (p_watt - p_max), 0.0)
    return mu, nu


def _kernel_steps(settings: SolverSettings) -> tuple[float, float]:
    # the kernel reads a nonpositive step as "curvature-scaled"
    if settings.step_mu is None or settings.step_nu is None:
        return 0.0, 0.0
    return float(settings.step_mu), float(settings.step_nu)


def _bounds(cfg: SystemConfig) -> MinPower:
    mp = min_power_for_qos(cfg)
    if not mp.feasible:
        raise InfeasibleError(mp.reason, mp)
    return mp


def _inner_direct(q: float, cfg: SystemConfig, p_min: float) -> float:
    p_max = cfg.p_max_watt
    try:
        (root,) = solve_kkt_stationarity(q, 0.0, 0.0, cfg)
    except NoStationaryPoint:
        return p_max
    return min(max(root, p_min), p_max)


def _inner_dual(q: float, cfg: SystemConfig, settings: SolverSettings, p_min: float) -> tuple[float, int]:
    step_mu, step_nu = _kernel_steps(settings)
    p, _mu, _nu, iters, converged = _kernels.dual_ascent(
        float(q), outage_log_term(cfg), float(cfg.bandwidth_hz), float(p_min), float(cfg.p_max_watt),
        2.0 * cfg.p_max_watt, step_mu, step_nu, int(settings.max_inner_iters), float(settings.inner_tol_watt),
    )
    if not converged:
        raise ConvergenceError(f"dual ascent did not converge in {iters} iterations (q={q:g})")
    return min(max(p, p_min), cfg.p_max_watt), iters


def inner_minimize(q: float, cfg: SystemConfig, settings: SolverSettings | None = None,
                   method: str | None = None) -> float:
    """Minimiser of ``f_q`` over ``[P_min, P_max]``."""
    settings = settings or SolverSettings()
    method = method or settings.inner_method
    p_min = _bounds(cfg).p_min_watt
    if method == "direct":
        return _inner_direct(q, cfg, p_min)
    if method == "dual":
        return _inner_dual(q, cfg, settings, p_min)[0]
    raise ValueError(f"unknown inner method {method!r}")


def dinkelbach_solve(cfg: SystemConfig, settings: SolverSettings | None = None) -> PowerAllocationResult:
    """Maximise secrecy energy efficiency subject to the QoS floor and power cap.

    Starts from ``P = P_min`` (the zero-power start leaves ``q`` undefined).
    Infeasible scenarios come back as a result with ``status="infeasible"``.
    """
    settings = settings or SolverSettings()
    mp = min_power_for_qos(cfg)
    if not mp.feasible:
        return PowerAllocationResult(
            status="infeasible", p_star_watt=None, q_star_bpj=0.0, r_sec_bps=None, outer_iters=0,
            infeasibility_reason=mp.reason, saturation_bps=mp.saturation_bps,
        )
    p_min = mp.p_min_watt
    tol = settings.dinkelbach_tol * cfg.bandwidth_hz
    p = p_min
    q = float(secrecy_energy_efficiency(p, cfg))
    trace: list[tuple[float, float]] = []
    inner_total = 0
    for it in range(1, settings.max_outer_iters + 1):
        if settings.inner_method == "dual":
            p, n_inner = _inner_dual(q, cfg, settings, p_min)
            inner_total += n_inner
        else:
            p = _inner_direct(q, cfg, p_min)
        r = float(secrecy_outage_capacity(p, cfg.eps_max, cfg))
        trace.append((q, p))
        gap = r - q * (cfg.p0_watt + p)
        if gap <= tol:
            return PowerAllocationResult(
                status="optimal", p_star_watt=p, q_star_bpj=max(r, 0.0) / (cfg.p0_watt + p), r_sec_bps=r,
                outer_iters=it, trace=trace, p_min_watt=p_min, saturation_bps=mp.saturation_bps,
                inner_iters=inner_total,
            )
        q = r / (cfg.p0_watt + p)
    raise ConvergenceError(f"Dinkelbach did not converge in {settings.max_outer_iters} iterations", trace)


def grid_search_oracle(cfg: SystemConfig, grid_points: int = 100_000) -> tuple[float, float]:
    """Brute-force maximiser of the energy efficiency on a uniform power grid."""
    mp = _bounds(cfg)
    grid = np.linspace(mp.p_min_watt, cfg.p_max_watt, grid_points)
    ee = secrecy_energy_efficiency(grid, cfg)
    k = int(np.argmax(ee))
    return float(grid[k]), float(ee[k])
