"""Slow link adaptation: pick initial rates from a discrete MCS family.

For each average-SNR sweep point every candidate rate is simulated with
common random numbers (same master seed, hence identical channel draws,
since the fading does not depend on the rates). The adapted curve is the
pointwise envelope of the fixed-rate throughput curves.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .metrics import MetricsReport, compute_metrics
from .network import NetworkConfig, symmetric_gains_db, validate_config
from .simulator import run_monte_carlo

ETA_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class AdaptationResult:
    """Envelope and per-rate curves of one link-adaptation sweep."""

    sweep_db: tuple[float, ...]
    mcs_rates: tuple[float, ...]
    reports: tuple[tuple[MetricsReport, ...], ...]  # [point][rate]
    selected: tuple[int, ...]  # index into mcs_rates per point

    def selected_rates(self) -> tuple[float, ...]:
        return tuple(self.mcs_rates[i] for i in self.selected)

    def envelope_eta(self) -> tuple[float, ...]:
        return tuple(self.reports[p][i].eta for p, i in enumerate(self.selected))

    def rate_curve(self, rate_index: int) -> tuple[float, ...]:
        return tuple(point[rate_index].eta for point in self.reports)

    def selected_report(self, point: int) -> MetricsReport:
        return self.reports[point][self.selected[point]]


def adapt_rates(base_cfg: NetworkConfig, sweep_db: Sequence[float],
                mcs_rates: Sequence[float], strategy: str, frames: int,
                master_seed: int, workers: int = 1) -> AdaptationResult:
    """Maximize throughput over an MCS family at each sweep point.

    All sources share one candidate rate (symmetric-rate scenario) and all
    links share the sweep point's average SNR. Rate ties within
    ``ETA_TIE_TOLERANCE`` go to the smaller rate.
    """
    if not mcs_rates:
        raise ValueError("MCS rate family must not be empty")
    rates_sorted = sorted(mcs_rates)
    all_reports = []
    selected = []
    for gamma_db in sweep_db:
        gains = symmetric_gains_db(base_cfg.m, base_cfg.l, gamma_db)
        point_reports = []
        best_idx, best_eta = 0, float("-inf")
        for k, rate in enumerate(rates_sorted):
            cfg = validate_config(replace(
                base_cfg, rates=(float(rate),) * base_cfg.m,
                gains_db=gains, gains_linear=None))
            counters = run_monte_carlo(cfg, strategy, frames, master_seed,
                                       workers=workers)
            report = compute_metrics(counters, cfg, strategy)
            point_reports.append(report)
            if report.eta > best_eta + ETA_TIE_TOLERANCE:
                best_idx, best_eta = k, report.eta
        all_reports.append(tuple(point_reports))
        selected.append(best_idx)
    return AdaptationResult(
        sweep_db=tuple(float(g) for g in sweep_db),
        mcs_rates=tuple(float(r) for r in rates_sorted),
        reports=tuple(all_reports),
        selected=tuple(selected))
