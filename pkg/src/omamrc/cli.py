"""Batch sweep driver: config in, one CSV row per (sweep value, strategy).

CSV columns: scenario, sweep_value_db, strategy, frames, seed, mean_T,
p_common_outage, p_outage_s1..sM, eta, eta_norm, selected_rate. The
selected_rate column is blank outside adaptation mode; adaptation sweeps
emit one envelope row per (point, strategy) plus one
``link_adaptation_rate`` row per fixed MCS rate, identified by its rate in
the selected_rate column.

Exit codes: 0 ok, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .adaptation import adapt_rates
from .config_io import SimulationPlan, load_plan
from .metrics import MetricsReport, compute_metrics
from .network import ConfigError, symmetric_gains_db, validate_config
from .simulator import run_monte_carlo

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _row(plan: SimulationPlan, scenario: str, sweep_value: float,
         report: MetricsReport, selected_rate: float | None) -> list[str]:
    return [scenario, _fmt(sweep_value), report.strategy, str(report.frames),
            str(plan.seed), _fmt(report.mean_rounds),
            _fmt(report.common_outage),
            *(_fmt(p) for p in report.per_source_outage),
            _fmt(report.eta), _fmt(report.eta_norm),
            "" if selected_rate is None else _fmt(selected_rate)]


def _gain_sweep_rows(plan: SimulationPlan) -> list[list[str]]:
    rows = []
    for value in plan.sweep_values:
        if plan.sweep_kind == "symmetric_gamma":
            gains = symmetric_gains_db(plan.m, plan.l, value)
        else:  # delta_gamma: shift every configured link
            gains = plan.base_gains_db + value
        cfg = validate_config(plan.network_template(gains))
        for name in plan.strategies:
            counters = run_monte_carlo(cfg, name, plan.frames, plan.seed,
                                       workers=plan.workers)
            report = compute_metrics(counters, cfg, name)
            rows.append(_row(plan, plan.sweep_kind, value, report, None))
    return rows


def _adaptation_rows(plan: SimulationPlan) -> list[list[str]]:
    base = plan.network_template(symmetric_gains_db(plan.m, plan.l, 0.0))
    results = {
        name: adapt_rates(base, plan.sweep_values, plan.mcs_rates, name,
                          plan.frames, plan.seed, workers=plan.workers)
        for name in plan.strategies
    }
    rows = []
    for p, value in enumerate(plan.sweep_values):
        for name in plan.strategies:
            res = results[name]
            rows.append(_row(plan, "link_adaptation", value,
                             res.selected_report(p), res.selected_rates()[p]))
            for k, rate in enumerate(res.mcs_rates):
                rows.append(_row(plan, "link_adaptation_rate", value,
                                 res.reports[p][k], rate))
    return rows


def execute(config_path: str, overrides: dict | None = None) -> int:
    """Run the sweep described by a config file; returns an exit code."""
    try:
        plan = load_plan(config_path, overrides)
    except ConfigError as err:
        for problem in err.errors:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if plan.sweep_kind == "link_adaptation":
            rows = _adaptation_rows(plan)
        else:
            rows = _gain_sweep_rows(plan)
    except ConfigError as err:
        for problem in err.errors:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as err:  # noqa: BLE001 - report and signal runtime failure
        print(f"runtime error: {err}", file=sys.stderr)
        return EXIT_RUNTIME

    header = ["scenario", "sweep_value_db", "strategy", "frames", "seed",
              "mean_T", "p_common_outage",
              *(f"p_outage_s{s + 1}" for s in range(plan.m)),
              "eta", "eta_norm", "selected_rate"]
    try:
        out = open(plan.output, "w", newline="") if plan.output else sys.stdout
        try:
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        finally:
            if plan.output:
                out.close()
    except OSError as err:
        print(f"runtime error: cannot write output: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="omamrc-sim",
        description="Monte Carlo sweeps of cooperative HARQ scheduling "
                    "strategies over a multiple-access multiple-relay network.")
    parser.add_argument("--config", required=True, help="TOML run file")
    parser.add_argument("--output", help="CSV output path (default: stdout)")
    parser.add_argument("--frames", type=int, help="frames per Monte Carlo run")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--strategy", action="append", dest="strategies",
                        metavar="NAME",
                        help="strategy to run (repeatable; overrides config)")
    parser.add_argument("--sweep", choices=("symmetric_gamma",
                                            "link_adaptation", "delta_gamma"),
                        help="sweep kind (overrides config)")
    args = parser.parse_args(argv)
    overrides = {"output": args.output, "frames": args.frames,
                 "seed": args.seed, "strategies": args.strategies,
                 "sweep": args.sweep}
    return execute(args.config, overrides)


if __name__ == "__main__":
    sys.exit(main())
