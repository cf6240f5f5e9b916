"""Monte Carlo simulator for centralized cooperative HARQ scheduling in
orthogonal multiple-access multiple-relay channels."""

from .adaptation import AdaptationResult, adapt_rates
from .metrics import MetricsReport, compute_metrics
from .network import (ChannelRealization, ConfigError, NetworkConfig, NodeId,
                      NodeKind, db_to_linear, draw_realization, frame_rng,
                      linear_to_db, mutual_information, symmetric_gains_db,
                      validate_config)
from .outage import (ObserverState, RoundHistory, TransmissionRecord,
                     apply_transmission, best_decodable_subset,
                     brute_force_decodable_subset, common_outage_of_subset,
                     individual_outage, mac_constraint_violated)
from .simulator import (FrameOutcome, RawCounters, outcome_key, replay_trace,
                        run_frame, run_monte_carlo, run_phase1, run_round)
from .sourceset import SourceSet
from .strategies import (ALL_SCHEMES, SELECTORS, STRATEGY_NAMES,
                         SchedulingContext, SequenceSearchResult,
                         exhaustive_search, optimal_sequence,
                         select_reference1, select_strategy1,
                         select_strategy2, select_strategy3,
                         useful_candidates)

__version__ = "0.1.0"

__all__ = [
    "AdaptationResult", "adapt_rates",
    "MetricsReport", "compute_metrics",
    "ChannelRealization", "ConfigError", "NetworkConfig", "NodeId", "NodeKind",
    "db_to_linear", "draw_realization", "frame_rng", "linear_to_db",
    "mutual_information", "symmetric_gains_db", "validate_config",
    "ObserverState", "RoundHistory", "TransmissionRecord",
    "apply_transmission", "best_decodable_subset",
    "brute_force_decodable_subset", "common_outage_of_subset",
    "individual_outage", "mac_constraint_violated",
    "FrameOutcome", "RawCounters", "outcome_key", "replay_trace",
    "run_frame", "run_monte_carlo", "run_phase1", "run_round",
    "SourceSet",
    "ALL_SCHEMES", "SELECTORS", "STRATEGY_NAMES", "SchedulingContext",
    "SequenceSearchResult", "exhaustive_search", "optimal_sequence",
    "select_reference1", "select_strategy1", "select_strategy2",
    "select_strategy3", "useful_candidates",
]
