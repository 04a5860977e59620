"""Command-line front end.

Exit status: 0 on success (infeasible scenarios included), 2 on invalid
parameters or usage, 1 on internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import analytics, channel_mc, sweep as sweeps
from .config import BASE_SCENARIO, ConfigError, SolverSettings, SystemConfig, load_scenario
from .optimizer import dinkelbach_solve, grid_search_oracle

OVERRIDES = {
    "nt": ("n_t", int),
    "nr": ("n_r", int),
    "bandwidth": ("bandwidth_hz", float),
    "alpha": ("alpha", float),
    "rho": ("rho", float),
    "eps_max": ("eps_max", float),
    "rmin": ("r_min_bps", float),
    "p0": ("p0_watt", float),
    "pmax": ("p_max_watt", float),
}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario file (nine scenario fields, optional 'solver')")
    for flag, (name, typ) in OVERRIDES.items():
        common.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=typ, help=f"override {name}")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"))

    p = argparse.ArgumentParser(prog="lsmimo-secrecy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="closed-form metrics at one power")
    a.add_argument("--p", type=float, help="transmit power in W (default: P_max)")

    o = sub.add_parser("optimize", parents=[common], help="energy-efficient power allocation")
    o.add_argument("--verify", action="store_true", help="cross-check against the grid oracle")

    s = sub.add_parser("simulate", parents=[common], help="Monte-Carlo check of the closed forms")
    s.add_argument("--p", type=float, default=1.0, help="transmit power in W (default 1)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--rate", type=float, help="rate for the outage test (default: closed-form R_sec at eps_max)")
    s.add_argument("--workers", type=int, default=1)

    w = sub.add_parser("sweep", parents=[common], help="solve across values of one parameter")
    w.add_argument("--param", required=True, choices=sorted(sweeps.SWEEPABLE))
    w.add_argument("--values", required=True, help="comma-separated values")

    f = sub.add_parser("fig", parents=[common], help="data behind one results figure")
    f.add_argument("--preset", required=True, choices=sweeps.PRESET_NAMES)
    return p


def _effective(args) -> tuple[SystemConfig, SolverSettings]:
    if args.config:
        try:
            cfg, settings = load_scenario(args.config)
        except OSError as exc:
            raise UsageError(f"--config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"--config: invalid JSON ({exc})") from exc
        values = cfg.to_dict()
    else:
        values, settings = dict(BASE_SCENARIO), SolverSettings()
    for flag, (name, _) in OVERRIDES.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[name] = v
    return SystemConfig(**values), settings


def _analyze(cfg: SystemConfig, args) -> dict:
    p = cfg.p_max_watt if args.p is None else args.p
    if not p > 0:
        raise ConfigError("p", "--p must be positive")
    point = analytics.energy_efficiency(p, cfg)
    mp = analytics.min_power_for_qos(cfg)
    return {
        "p_watt": point.p_watt,
        "r_sec_bps": point.r_sec_bps,
        "r_sec_clamped_bps": point.r_sec_clamped_bps,
        "ee_bpj": point.ee_bpj,
        "p_positive": point.p_positive,
        "outage_at_r_sec": float(analytics.secrecy_outage_probability(point.r_sec_bps, p, cfg)),
        "asymptotic_legitimate_capacity_bps": analytics.asymptotic_legitimate_capacity(
            p, cfg.rho, cfg.n_t, cfg.bandwidth_hz),
        "saturation_bps": mp.saturation_bps,
        "p_min_watt": mp.p_min_watt,
        "feasible": mp.feasible,
        "infeasibility_reason": mp.reason,
    }


def _optimize(cfg: SystemConfig, settings: SolverSettings, verify: bool) -> dict:
    res = dinkelbach_solve(cfg, settings)
    out = res.to_dict()
    if verify:
        if res.optimal:
            p_grid, ee_grid = grid_search_oracle(cfg, settings.grid_points)
            out["verify"] = {
                "grid_points": settings.grid_points,
                "p_grid_watt": p_grid,
                "ee_grid_bpj": ee_grid,
                "rel_discrepancy": abs(res.q_star_bpj - ee_grid) / max(abs(ee_grid), 1e-300),
            }
        else:
            out["verify"] = None
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg, settings = _effective(args)
        record = {"command": args.command, "config": cfg.to_dict()}
        if args.command in ("sweep", "fig"):
            if args.command == "sweep":
                try:
                    values = [float(v) for v in args.values.split(",") if v.strip()]
                except ValueError as exc:
                    raise UsageError(f"--values: {exc}") from exc
                rows = sweeps.sweep(cfg, args.param, values, settings)
            else:
                preset = sweeps.figure_preset(args.preset)
                if any(getattr(args, f) is not None for f in OVERRIDES) or args.config:
                    preset = sweeps.FigurePreset(preset.name, _merge(preset.cfg, args), preset.param,
                                                 preset.values, preset.series_param, preset.series_values)
                rows = preset.run(settings)
            text = sweeps.rows_to_json(rows) + "\n" if args.format == "json" else sweeps.rows_to_csv(rows)
            _emit(text, args.out)
            return 0
        if args.format == "csv":
            raise UsageError("--format csv is only available for sweep and fig")
        if args.command == "analyze":
            record["result"] = _analyze(cfg, args)
        elif args.command == "optimize":
            record["settings"] = settings.to_dict()
            record["result"] = _optimize(cfg, settings, args.verify)
        elif args.command == "simulate":
            if args.samples < 1:
                raise UsageError("--samples must be positive")
            if not args.p > 0:
                raise ConfigError("p", "--p must be positive")
            record["seed"] = args.seed
            record["samples"] = args.samples
            record["result"] = channel_mc.simulation_report(cfg, args.p, args.samples, args.seed, args.rate,
                                                            max(1, args.workers))
        _emit(json.dumps(record, indent=2) + "\n", args.out)
        return 0
    except (ConfigError, UsageError) as exc:
        field = getattr(exc, "field", None)
        print(f"error: {field + ': ' if field else ''}{exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - top-level guard
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def _merge(preset_cfg: SystemConfig, args) -> SystemConfig:
    # the preset supplies the base; file values and flags beat it
    values = preset_cfg.to_dict()
    if args.config:
        values.update(load_scenario(args.config)[0].to_dict())
    for flag, (name, _) in OVERRIDES.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[name] = v
    return SystemConfig(**values)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
