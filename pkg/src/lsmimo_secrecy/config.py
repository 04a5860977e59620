"""Scenario and solver parameter sets.

Both containers are frozen dataclasses; every downstream routine takes them
read-only. ``SystemConfig`` validates itself on construction, so holding an
instance means holding a valid scenario.
"""

from __future__ import annotations

import dataclasses
import json
import math
import numbers
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping


class ConfigError(ValueError):
    """Raised when a scenario or solver parameter is out of its domain."""

    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field


def _finite(name: str, value: float) -> None:
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not math.isfinite(value):
        raise ConfigError(name, f"{name} must be a finite real number, got {value!r}")


def _integer(name: str, value: Any) -> None:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigError(name, f"{name} must be an integer, got {value!r}")


@dataclass(frozen=True)
class SystemConfig:
    """One secure downlink scenario.

    ``alpha`` is an amplitude factor on the eavesdropper channel, so the
    intercepted power scales with ``alpha**2``.
    """

    n_t: int
    n_r: int
    bandwidth_hz: float
    alpha: float
    rho: float
    eps_max: float
    r_min_bps: float
    p0_watt: float
    p_max_watt: float

    def __post_init__(self) -> None:
        validate(self)

    def replace(self, **changes: Any) -> "SystemConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and step sizes for the Dinkelbach / dual-ascent solver.

    ``step_mu`` and ``step_nu`` are fixed dual step sizes. ``None`` (the
    default) lets the inner loop scale each step by the curvature of the power
    objective at the current iterate, which is a safeguarded Newton step on
    the dual.
    ``dinkelbach_tol`` is relative to the bandwidth: the outer loop stops once
    ``R_sec(P) - q (P0 + P) <= dinkelbach_tol * W``.
    """

    step_mu: float | None = None
    step_nu: float | None = None
    dinkelbach_tol: float = 1e-9
    max_outer_iters: int = 100
    max_inner_iters: int = 10_000
    inner_tol_watt: float = 1e-9
    grid_points: int = 100_000
    inner_method: str = "dual"

    def __post_init__(self) -> None:
        for name in ("step_mu", "step_nu"):
            value = getattr(self, name)
            if value is not None:
                _finite(name, value)
                if value <= 0:
                    raise ConfigError(name, f"{name} must be positive")
        for name in ("dinkelbach_tol", "inner_tol_watt"):
            _finite(name, getattr(self, name))
            if getattr(self, name) <= 0:
                raise ConfigError(name, f"{name} must be positive")
        for name in ("max_outer_iters", "max_inner_iters", "grid_points"):
            _integer(name, getattr(self, name))
            if getattr(self, name) < 1:
                raise ConfigError(name, f"{name} must be positive")
        if self.grid_points < 100:
            raise ConfigError("grid_points", "grid_points must be at least 100")
        if self.inner_method not in ("dual", "direct"):
            raise ConfigError("inner_method", "inner_method must be 'dual' or 'direct'")

    def replace(self, **changes: Any) -> "SolverSettings":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def validate(cfg: SystemConfig) -> SystemConfig:
    """Check every field of *cfg* and return it unchanged.

    Raises :class:`ConfigError` naming the first offending field.
    """
    for name in ("n_t", "n_r"):
        _integer(name, getattr(cfg, name))
        if getattr(cfg, name) < 1:
            raise ConfigError(name, f"{name} must be >= 1, got {getattr(cfg, name)}")
    for f in ("bandwidth_hz", "alpha", "rho", "eps_max", "r_min_bps", "p0_watt", "p_max_watt"):
        _finite(f, getattr(cfg, f))
    if cfg.bandwidth_hz <= 0:
        raise ConfigError("bandwidth_hz", "bandwidth_hz must be positive")
    if cfg.alpha <= 0:
        raise ConfigError("alpha", "alpha must be positive")
    if not 0 < cfg.rho <= 1:
        raise ConfigError("rho", f"rho must be in (0,1], got {cfg.rho}")
    if not 0 < cfg.eps_max < 1:
        raise ConfigError("eps_max", f"eps_max must be in (0,1), got {cfg.eps_max}")
    if cfg.r_min_bps < 0:
        raise ConfigError("r_min_bps", "r_min_bps must be nonnegative")
    if cfg.p0_watt < 0:
        raise ConfigError("p0_watt", "p0_watt must be nonnegative")
    if cfg.p_max_watt <= 0:
        raise ConfigError("p_max_watt", "p_max_watt must be positive")
    return cfg


CONFIG_FIELDS = tuple(f.name for f in fields(SystemConfig))
SOLVER_FIELDS = tuple(f.name for f in fields(SolverSettings))

# Simulation scenario used throughout the numerical results: 20 BS antennas,
# 2 eavesdropper antennas, 1 MHz, 1.5 Mb/s QoS, 0.5 W circuit power, 10 W cap.
BASE_SCENARIO = dict(
    n_t=20,
    n_r=2,
    bandwidth_hz=1e6,
    alpha=1.0,
    rho=0.8,
    eps_max=0.05,
    r_min_bps=1.5e6,
    p0_watt=0.5,
    p_max_watt=10.0,
)


def base_config(**overrides: Any) -> SystemConfig:
    return SystemConfig(**{**BASE_SCENARIO, **overrides})


def config_from_mapping(data: Mapping[str, Any]) -> tuple[SystemConfig, SolverSettings]:
    """Build configs from a scenario mapping (nine fields + optional ``solver``)."""
    data = dict(data)
    solver = data.pop("solver", None) or {}
    unknown = set(data) - set(CONFIG_FIELDS)
    if unknown:
        name = sorted(unknown)[0]
        raise ConfigError(name, f"unknown scenario field {name!r}")
    missing = [f for f in CONFIG_FIELDS if f not in data]
    if missing:
        raise ConfigError(missing[0], f"missing scenario field {missing[0]!r}")
    if not isinstance(solver, Mapping):
        raise ConfigError("solver", "solver must be an object")
    bad = set(solver) - set(SOLVER_FIELDS)
    if bad:
        name = sorted(bad)[0]
        raise ConfigError(name, f"unknown solver field {name!r}")
    return SystemConfig(**data), SolverSettings(**solver)


def load_scenario(path: str | Path) -> tuple[SystemConfig, SolverSettings]:
    """Read a JSON scenario file."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config", "scenario file must contain a JSON object")
    return config_from_mapping(data)
