"""Parameter sweeps and the figure presets built on them."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .analytics import secrecy_energy_efficiency
from .config import CONFIG_FIELDS, SolverSettings, SystemConfig, base_config
from .optimizer import dinkelbach_solve

SWEEPABLE = {"alpha": float, "n_t": int, "n_r": int, "rho": float, "eps_max": float,
             "bandwidth_hz": float, "r_min_bps": float, "p0_watt": float, "p_max_watt": float}

CSV_COLUMNS = ("param", "value", "ee_proposed", "ee_fixed", "p_star", "status")


@dataclass(frozen=True)
class SweepRow:
    param: str
    value: float
    ee_proposed_bpj: float
    ee_fixed_bpj: float
    p_star_watt: float | None
    status: str
    config: SystemConfig

    def to_dict(self) -> dict:
        return {
            "param": self.param,
            "value": self.value,
            "ee_proposed": self.ee_proposed_bpj,
            "ee_fixed": self.ee_fixed_bpj,
            "p_star": self.p_star_watt,
            "status": self.status,
            "config": self.config.to_dict(),
        }


def _row(cfg: SystemConfig, param: str, value, settings: SolverSettings) -> SweepRow:
    res = dinkelbach_solve(cfg, settings)
    return SweepRow(
        param=param,
        value=value,
        ee_proposed_bpj=res.q_star_bpj if res.optimal else 0.0,
        # the fixed scheme always transmits at the cap; clamped R_sec as everywhere else
        ee_fixed_bpj=float(secrecy_energy_efficiency(cfg.p_max_watt, cfg)),
        p_star_watt=res.p_star_watt,
        status=res.status,
        config=cfg,
    )


def sweep(cfg: SystemConfig, param: str, values, settings: SolverSettings | None = None,
          workers: int = 1) -> list[SweepRow]:
    """Solve one scenario per value of ``param``; rows keep the input order."""
    if param not in SWEEPABLE:
        raise ValueError(f"cannot sweep {param!r}; choose one of {sorted(SWEEPABLE)}")
    values = [SWEEPABLE[param](v) for v in values]
    if not values:
        raise ValueError("sweep needs at least one value")
    settings = settings or SolverSettings()
    cfgs = [cfg.replace(**{param: v}) for v in values]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda cv: _row(cv[0], param, cv[1], settings), zip(cfgs, values)))
    return [_row(c, param, v, settings) for c, v in zip(cfgs, values)]


@dataclass(frozen=True)
class FigurePreset:
    """Scenario, swept parameter and curve family behind one results figure.

    The figures carry no tabulated axes; ``alpha`` grids span 0.6 to 1.4.
    """

    name: str
    cfg: SystemConfig
    param: str
    values: tuple
    series_param: str | None = None
    series_values: tuple = field(default_factory=tuple)

    def __iter__(self):
        # allows ``cfg, param, values = figure_preset(name)``
        return iter((self.cfg, self.param, self.values))

    def run(self, settings: SolverSettings | None = None, workers: int = 1) -> list[SweepRow]:
        if self.series_param is None:
            return sweep(self.cfg, self.param, self.values, settings, workers)
        rows: list[SweepRow] = []
        for s in self.series_values:
            rows += sweep(self.cfg.replace(**{self.series_param: s}), self.param, self.values, settings, workers)
        return rows


ALPHA_GRID = tuple(round(0.6 + 0.1 * k, 1) for k in range(9))


def _presets() -> dict[str, FigurePreset]:
    return {
        # proposed vs fixed-power, eps_max = 0.05, rho = 0.8, N_t = 20
        "fig2": FigurePreset("fig2", base_config(), "alpha", ALPHA_GRID),
        "fig3": FigurePreset("fig3", base_config(), "alpha", ALPHA_GRID, "eps_max", (0.01, 0.05, 0.1)),
        "fig4": FigurePreset("fig4", base_config(eps_max=0.01), "n_t", (20, 32, 48, 64, 96, 128),
                             "alpha", (1.0, 1.2, 1.4)),
        "fig5": FigurePreset("fig5", base_config(eps_max=0.01, n_t=40), "alpha", ALPHA_GRID,
                             "rho", (0.8, 0.9, 0.95, 1.0)),
        "fig6": FigurePreset("fig6", base_config(), "alpha", ALPHA_GRID, "n_r", (2, 3, 4)),
    }


PRESET_NAMES = tuple(sorted(_presets()))


def figure_preset(name: str) -> FigurePreset:
    try:
        return _presets()[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose one of {', '.join(PRESET_NAMES)}") from None


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: list[SweepRow]) -> str:
    """CSV with the six fixed columns followed by the effective scenario fields."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + CONFIG_FIELDS)
    for r in rows:
        d = r.to_dict()
        writer.writerow([_cell(d[c]) for c in CSV_COLUMNS] + [_cell(getattr(r.config, f)) for f in CONFIG_FIELDS])
    return buf.getvalue()


def rows_to_json(rows: list[SweepRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2)

