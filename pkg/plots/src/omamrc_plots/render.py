"""Render simulator sweep CSVs into throughput figures.

Consumes the simulator's CSV schema only (no simulator import): columns
scenario, sweep_value_db, strategy, frames, seed, mean_T, p_common_outage,
p_outage_s*, eta, eta_norm, selected_rate. Three figure kinds mirror the
three sweep scenarios: throughput vs SNR (one curve per strategy),
link adaptation (dotted fixed-rate curves plus a solid envelope per
strategy), and throughput vs a common link-SNR offset.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

FIGURE_KINDS = ("throughput_vs_snr", "link_adaptation", "delta_gamma")

REQUIRED_COLUMNS = {"scenario", "sweep_value_db", "strategy", "eta",
                    "selected_rate"}

_X_LABEL = {
    "throughput_vs_snr": r"average link SNR $\gamma$ [dB]",
    "link_adaptation": r"average link SNR $\gamma$ [dB]",
    "delta_gamma": r"common link SNR offset $\Delta\gamma$ [dB]",
}

_STYLE = {
    "strategy1": dict(color="tab:blue", marker="o"),
    "strategy2": dict(color="tab:green", marker="s"),
    "strategy3": dict(color="tab:orange", marker="^"),
    "reference1": dict(color="tab:red", marker="v"),
    "upper_bound": dict(color="black", marker="*"),
}


class RenderError(ValueError):
    """The CSV cannot be rendered as the requested figure kind."""


def read_rows(csv_path: str | Path) -> list[dict]:
    try:
        with open(csv_path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise RenderError(f"{csv_path}: empty CSV")
            missing = REQUIRED_COLUMNS - set(reader.fieldnames)
            if missing:
                raise RenderError(
                    f"{csv_path}: missing columns {sorted(missing)}")
            rows = list(reader)
    except OSError as err:
        raise RenderError(f"cannot read {csv_path}: {err}") from err
    if not rows:
        raise RenderError(f"{csv_path}: no data rows")
    return rows


def _series(rows: list[dict]) -> dict[str, tuple[list[float], list[float]]]:
    """Group rows into per-strategy (x, y) series, preserving row order."""
    series: dict[str, tuple[list[float], list[float]]] = defaultdict(
        lambda: ([], []))
    for row in rows:
        xs, ys = series[row["strategy"]]
        xs.append(float(row["sweep_value_db"]))
        ys.append(float(row["eta"]))
    return series


def _style(strategy: str) -> dict:
    return dict(_STYLE.get(strategy, dict(marker=".")))


def _plot_throughput(ax, rows: list[dict]):
    for strategy, (xs, ys) in _series(rows).items():
        ax.plot(xs, ys, label=strategy, **_style(strategy))


def _plot_adaptation(ax, rows: list[dict]):
    envelope = [r for r in rows if r["scenario"] == "link_adaptation"]
    fixed = [r for r in rows if r["scenario"] == "link_adaptation_rate"]
    if not envelope:
        raise RenderError("no link_adaptation envelope rows in CSV")
    by_strategy_rate: dict[tuple[str, str], tuple[list[float], list[float]]]
    by_strategy_rate = defaultdict(lambda: ([], []))
    for row in fixed:
        xs, ys = by_strategy_rate[(row["strategy"], row["selected_rate"])]
        xs.append(float(row["sweep_value_db"]))
        ys.append(float(row["eta"]))
    for (strategy, rate), (xs, ys) in by_strategy_rate.items():
        style = _style(strategy)
        style.pop("marker", None)
        ax.plot(xs, ys, linestyle=":", linewidth=0.9, alpha=0.6,
                label=f"{strategy} R={rate}", **style)
    for strategy, (xs, ys) in _series(envelope).items():
        ax.plot(xs, ys, linewidth=2.0, label=f"{strategy} envelope",
                **_style(strategy))


def render(csv_path: str | Path, figure_kind: str,
           output_path: str | Path | None):
    """Render one figure kind from a sweep CSV; returns the Figure.

    Writes ``output_path`` when given. Raises RenderError on malformed
    or empty input without creating the output file.
    """
    if figure_kind not in FIGURE_KINDS:
        raise RenderError(f"unknown figure kind {figure_kind!r}; "
                          f"expected one of {FIGURE_KINDS}")
    rows = read_rows(csv_path)

    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    if figure_kind == "link_adaptation":
        _plot_adaptation(ax, rows)
    else:
        _plot_throughput(ax, rows)
    ax.set_xlabel(_X_LABEL[figure_kind])
    ax.set_ylabel(r"long-term aggregate throughput $\eta$ [b.c.u]")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7, ncol=2 if figure_kind == "link_adaptation" else 1)
    fig.tight_layout()
    if output_path is not None:
        fig.savefig(output_path, dpi=150)
    return fig
