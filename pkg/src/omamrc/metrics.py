"""Performance measures derived from raw Monte Carlo counters.

The long-term rate of source s divides its initial rate by the average
frame length in first-phase slot units, M + alpha*E(T). The aggregate
throughput weighs each long-term rate by the source's success probability;
its normalized variant drops the rate factors so that maximizing it is
rate-fair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .network import NetworkConfig
from .simulator import RawCounters


@dataclass(frozen=True)
class MetricsReport:
    """Estimates for one (config, strategy) Monte Carlo batch."""

    strategy: str
    frames: int
    mean_rounds: float
    per_source_outage: tuple[float, ...]
    per_source_outage_se: tuple[float, ...]
    common_outage: float
    common_outage_se: float
    long_term_rates: tuple[float, ...]
    eta: float
    eta_norm: float


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def compute_metrics(counters: RawCounters, cfg: NetworkConfig,
                    strategy: str = "") -> MetricsReport:
    """Turn counters into throughput and outage estimates.

    Outage probabilities come from the realized destination decoding sets;
    the reported standard errors are the plain binomial ones.
    """
    n = counters.frames
    if n < 1:
        raise ValueError("no frames simulated")
    mean_rounds = counters.total_rounds / n
    p_out = tuple(1.0 - d / n for d in counters.decode_counts)
    p_common = counters.common_outage_count / n
    denom = cfg.m + cfg.alpha * mean_rounds
    long_term = tuple(r / denom for r in cfg.rates)
    eta = sum(r * (1.0 - p) for r, p in zip(long_term, p_out))
    eta_norm = sum((1.0 - p) / denom for p in p_out)
    return MetricsReport(
        strategy=strategy,
        frames=n,
        mean_rounds=mean_rounds,
        per_source_outage=p_out,
        per_source_outage_se=tuple(_binomial_se(p, n) for p in p_out),
        common_outage=p_common,
        common_outage_se=_binomial_se(p_common, n),
        long_term_rates=long_term,
        eta=eta,
        eta_norm=eta_norm)
