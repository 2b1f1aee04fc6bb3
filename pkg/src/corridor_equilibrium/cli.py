"""Command-line front end: solve, compare, verify, paradox-scan."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import RunConfig, load, parse_mode
from .errors import ConfigError, ModelError
from .instances import random_instance
from .oracle.gap import IntegratedState, equilibrium_gap, gap_breakdown
from .oracle.lp import lp_st_so
from .oracle.queue_sim import queue_sim
from .scenarios import SCENARIOS, compare, paradox_scan, run_scenario
from .short_term import so_schedule_cost

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 1, 2
SERIES_POINTS = 1000
GAP_BUDGET = 1e-9
LP_REL_BUDGET = 0.01


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.9g}"
    return str(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return float(f"{v:.9g}") if np.isfinite(v) else str(v)
    return obj


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_json(path: Path, data) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(data), fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def _range(text: str) -> tuple[float, ...]:
    try:
        lo, hi, n = text.split(":")
        return tuple(float(v) for v in np.linspace(float(lo), float(hi), int(n)))
    except ValueError:
        raise ConfigError(f"grid spec must look like LO:HI:N, got {text!r}") from None


def _run_config(args) -> RunConfig:
    if args.config and args.seed is not None:
        raise ConfigError("use either --config or --seed, not both")
    if args.config:
        cfg = load(args.config)
    elif args.seed is not None:
        cfg = RunConfig(model=random_instance(args.seed))
    else:
        raise ConfigError("no configuration: pass --config PATH or --seed INT")
    if args.mode:
        cfg = replace(cfg, mode=parse_mode(args.mode))
    if getattr(args, "dt", None) is not None:
        if not args.dt > 0:
            raise ConfigError("--dt must be positive")
        cfg = replace(cfg, dt=args.dt)
    if args.out:
        cfg = replace(cfg, out_dir=args.out)
    return cfg


def _labels(args, cfg: RunConfig) -> list[str]:
    labels = [args.scenario.upper()] if getattr(args, "scenario", None) else list(cfg.scenarios)
    if not labels:
        raise ConfigError("no scenario selected")
    bad = [s for s in labels if s not in SCENARIOS]
    if bad:
        raise ConfigError(f"unknown scenario(s) {bad}")
    return labels


def _out(cfg: RunConfig) -> Path:
    path = Path(cfg.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_solve(args, cfg: RunConfig) -> int:
    out = _out(cfg)
    n_days = cfg.model.wages.days_per_term
    for lab in _labels(args, cfg):
        rep = run_scenario(cfg.model, lab, cfg.mode)
        so = rep.short_term
        rows = [
            (i + 1, rep.zones[i], rep.ratios[i], so.demands[i], rep.costs[i], rep.rents[i])
            for i in range(cfg.model.corridor.location_count)
        ]
        write_csv(out / f"{lab.lower()}_locations.csv", ["location", "zone", "ratio", "commuters", "cost", "rent"], rows)
        lo, hi = so.schedule.horizon
        ts = np.linspace(lo, hi, SERIES_POINTS)
        profiles = rep.equilibrium.delays if rep.equilibrium is not None else so.prices
        series = np.column_stack([ts] + [p(ts) for p in profiles])
        header = ["time"] + [f"w_{i + 1}" for i in range(len(profiles))]
        write_csv(out / f"{lab.lower()}_delays.csv", header, series.tolist())
        summary = {
            "scenario": lab,
            "mode": cfg.mode,
            "utility": rep.utility,
            "total_cost": rep.total_cost,
            "days_per_term": n_days,
            "term_utility": n_days * rep.utility,
            "term_total_cost": n_days * rep.total_cost,
            "mixed_zone": None if rep.mixed_zone is None else rep.mixed_zone + 1,
            "equilibrium_built": rep.equilibrium is not None,
            "warnings": list(rep.warnings),
            "footnotes": list(rep.footnotes),
            "seed": args.seed,
        }
        write_json(out / f"{lab.lower()}_summary.json", summary)
        print(f"[{lab}] mode={cfg.mode} utility={fmt(rep.utility)} total_cost={fmt(rep.total_cost)}")
        print("  location  zone     ratio      cost       rent")
        for r in rows:
            print(f"  {r[0]:>8}  {r[1]:<7}  {fmt(r[2]):<9}  {fmt(r[4]):<9}  {fmt(r[5])}")
        for note in [*rep.warnings, *rep.footnotes]:
            print(f"  note: {note}")
    return EXIT_OK


def cmd_compare(args, cfg: RunConfig) -> int:
    try:
        a, b = (s.strip().upper() for s in args.pair.split(","))
    except ValueError:
        raise ConfigError(f"--pair needs two labels like TLC,CS, got {args.pair!r}") from None
    for lab in (a, b):
        if lab not in SCENARIOS:
            raise ConfigError(f"invalid pair label {lab!r}")
    ra, rb = run_scenario(cfg.model, a, cfg.mode), run_scenario(cfg.model, b, cfg.mode)
    cmp = compare(ra, rb)
    out = _out(cfg)
    stem = f"compare_{a.lower()}_{b.lower()}"
    n = cfg.model.corridor.location_count
    write_csv(out / f"{stem}.csv", ["location", "delta_cost", "delta_rent"],
              [(i + 1, cmp.delta_costs[i], cmp.delta_rents[i]) for i in range(n)])
    write_csv(out / f"{stem}_verdicts.csv", ["claim", "location", "expected", "observed", "passed"],
              [(v.claim, v.location, v.expected, v.observed, v.passed) for v in cmp.verdicts])
    write_json(out / f"{stem}.json", {
        "pair": [a, b],
        "mode": cfg.mode,
        "delta_utility": cmp.delta_utility,
        "delta_total_cost": cmp.delta_total_cost,
        "paradox": cmp.paradox,
        "verdicts": len(cmp.verdicts),
        "failures": len(cmp.failures),
        "notes": list(cmp.notes),
    })
    print(f"{a} -> {b} ({cfg.mode}): delta_utility={fmt(cmp.delta_utility)} "
          f"delta_total_cost={fmt(cmp.delta_total_cost)} paradox={fmt(cmp.paradox)}")
    for v in cmp.verdicts:
        loc = f" @{v.location}" if v.location else ""
        print(f"  {'PASS' if v.passed else 'FAIL'} {v.claim}{loc}: expected {v.expected}, observed {fmt(v.observed)}")
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    out = _out(cfg)
    ok_all = True
    for lab in _labels(args, cfg):
        rep = run_scenario(cfg.model, lab, cfg.mode)
        so = rep.short_term
        sched = so.schedule
        if args.perturb_lambda:
            costs = so.costs.copy()
            costs[0] += args.perturb_lambda
            so = replace(so, costs=costs)
        lp = lp_st_so(cfg.model.corridor, sched, so.demands, cfg.dt, reference=so)
        analytic = so_schedule_cost(so)
        rel = abs(lp.objective - analytic) / analytic if analytic > 0 else abs(lp.objective)
        dual_budget = max(5 * sched.late * cfg.dt, 1e-3)
        checks = {
            "lp_objective": rel <= LP_REL_BUDGET,
            "lp_duals": lp.max_dual_deviation <= dual_budget,
        }
        report = {
            "scenario": lab,
            "mode": cfg.mode,
            "dt": cfg.dt,
            "lp": {
                "objective": lp.objective,
                "analytic_objective": analytic,
                "relative_error": rel,
                "duals": lp.duals,
                "max_dual_deviation": lp.max_dual_deviation,
                "dual_budget": dual_budget,
                "max_price_deviation": lp.max_price_deviation,
                "feasibility": lp.feasibility,
            },
            "warnings": list(rep.warnings),
        }
        if rep.equilibrium is not None:
            sim = queue_sim(rep.equilibrium, cfg.dt)
            checks["queue_sim"] = sim.passed() and sim.max_capacity_excess <= 1e-6
            report["queue_sim"] = {
                "max_delay_deviation": sim.max_delay_deviation,
                "cost_gap": sim.cost_gap,
                "min_slack": sim.min_slack,
                "max_capacity_excess": sim.max_capacity_excess,
                "budget": 5 * cfg.dt,
            }
            state = IntegratedState.from_report(rep).perturbed(costs=so.costs)
            breakdown = gap_breakdown(state)
            checks["equilibrium_gap"] = equilibrium_gap(state) <= GAP_BUDGET
            report["equilibrium_gap"] = breakdown
        else:
            report["queue_sim"] = report["equilibrium_gap"] = "skipped: no equilibrium view"
        report["checks"] = checks
        report["passed"] = all(checks.values())
        ok_all &= report["passed"]
        write_json(out / f"verify_{lab.lower()}.json", report)
        print(f"[{lab}] verify dt={fmt(cfg.dt)}: {'PASS' if report['passed'] else 'FAIL'}")
        for name, ok in checks.items():
            print(f"  {'PASS' if ok else 'FAIL'} {name}")
        if "equilibrium_gap" in checks and not checks["equilibrium_gap"]:
            for name, val in report["equilibrium_gap"].items():
                print(f"    residual {name} = {fmt(val)}")
    return EXIT_OK if ok_all else EXIT_VERIFY


def cmd_paradox_scan(args, cfg: RunConfig) -> int:
    model = cfg.model
    thetas = _range(args.theta_remote) if args.theta_remote else cfg.scan_theta_remote
    spacings = _range(args.spacing) if args.spacing else cfg.scan_spacing
    if thetas is None:
        thetas = tuple(np.linspace(0.5 * model.wages.office, model.wages.office, 10, endpoint=False))
    if spacings is None:
        spacings = tuple(np.linspace(0.25 * model.spacing, 1.5 * model.spacing, 10))
    points = paradox_scan(model, thetas, spacings, cfg.mode)
    out = _out(cfg)
    rows = [(p.theta_remote, p.spacing, p.paradox, p.delta_tc, p.error) for p in points]
    write_csv(out / "paradox_scan.csv", ["theta_remote", "spacing", "paradox", "delta_tc", "error"], rows)
    flagged = sum(p.paradox is True for p in points)
    errors = sum(p.error is not None for p in points)
    write_json(out / "paradox_scan.json", {"mode": cfg.mode, "points": len(points), "paradox": flagged, "errors": errors})
    print(f"paradox scan ({cfg.mode}): {len(points)} points, {flagged} flagged, {errors} errors")
    for r in rows:
        print("  " + ",".join(fmt(v) for v in r))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="corridor-eq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML run configuration")
        p.add_argument("--seed", type=int, help="use a seeded random instance instead of a config file")
        p.add_argument("--mode", choices=["exact", "merged"], help="override the config's cost mode")
        p.add_argument("--out", help="output directory")
        return p

    p = common(sub.add_parser("solve", help="solve scenarios and write tables"))
    p.add_argument("--scenario", type=str.lower, choices=["ns", "swh", "tlc", "cs"])
    p.set_defaults(func=cmd_solve)

    p = common(sub.add_parser("compare", help="compare two scenarios"))
    p.add_argument("--pair", required=True, help="two labels, e.g. TLC,CS")
    p.set_defaults(func=cmd_compare)

    p = common(sub.add_parser("verify", help="check a scenario against the oracles"))
    p.add_argument("--scenario", type=str.lower, choices=["ns", "swh", "tlc", "cs"])
    p.add_argument("--dt", type=float)
    p.add_argument("--perturb-lambda", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("paradox-scan", help="scan remote wage and start-time spacing"))
    p.add_argument("--theta-remote", help="LO:HI:N grid of remote wages")
    p.add_argument("--spacing", help="LO:HI:N grid of start-time spacings")
    p.set_defaults(func=cmd_paradox_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _run_config(args)
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
