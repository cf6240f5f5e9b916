"""Frame execution and seeded Monte Carlo batches.

A frame is one first phase (every source transmits once, each receiver
decoding per-source by rate threshold) followed by up to T_max scheduled
retransmission rounds. Each round the chosen node's transmission is heard
by the destination and every other relay, after which all receivers
re-derive their decoding sets. The frame ends on full decoding at the
destination (ACK) or when the round budget is exhausted.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field, replace

import numpy as np

from .network import (ChannelRealization, NetworkConfig, NodeId, NodeKind,
                      draw_realization, frame_rng, transmitter_index)
from .outage import (ObserverState, TransmissionRecord, best_decodable_kernel,
                     mask_sums)
from .sourceset import SourceSet
from .strategies import (SELECTORS, UPPER_BOUND, SchedulingContext,
                         optimal_sequence)


@dataclass(frozen=True)
class FrameOutcome:
    """Result of one simulated frame."""

    rounds_used: int
    final_destination_set: SourceSet
    decoded_flags: tuple[bool, ...]
    trace: tuple[tuple[int, NodeId, SourceSet], ...]

    @property
    def all_decoded(self) -> bool:
        return all(self.decoded_flags)


def outcome_key(outcome: FrameOutcome) -> tuple[int, int]:
    """Sort key for comparing frame outcomes; smaller is better.

    Full decoding beats partial decoding; earlier full decoding beats
    later; among partial outcomes a larger final decoding set wins.
    """
    if outcome.all_decoded:
        return (0, outcome.rounds_used)
    return (1, -len(outcome.final_destination_set))


@dataclass
class RawCounters:
    """Order-insensitive integer sums over simulated frames."""

    frames: int
    total_rounds: int
    decode_counts: list[int]
    common_outage_count: int

    @classmethod
    def zero(cls, m: int) -> "RawCounters":
        return cls(0, 0, [0] * m, 0)

    def add_frame(self, outcome: FrameOutcome) -> None:
        self.frames += 1
        self.total_rounds += outcome.rounds_used
        for s, ok in enumerate(outcome.decoded_flags):
            self.decode_counts[s] += ok
        self.common_outage_count += not outcome.all_decoded

    def merge(self, other: "RawCounters") -> "RawCounters":
        return RawCounters(
            self.frames + other.frames,
            self.total_rounds + other.total_rounds,
            [a + b for a, b in zip(self.decode_counts, other.decode_counts)],
            self.common_outage_count + other.common_outage_count)


@dataclass
class FrameState:
    """Mutable per-frame working state (one realization, one strategy run)."""

    cfg: NetworkConfig
    mi_to_dest: list[float]
    mi_to_relay: list[list[float]]  # [relay][transmitter]
    dest: ObserverState
    relays: list[ObserverState]
    rate_sums: list[float] = field(default=None)
    rounds_done: int = 0
    trace: list = field(default_factory=list)

    def __post_init__(self):
        if self.rate_sums is None:
            self.rate_sums = mask_sums(self.cfg.rates)

    def node_set(self, idx: int) -> SourceSet:
        if idx < self.cfg.m:
            return SourceSet.single(idx)
        return self.relays[idx - self.cfg.m].decoded

    def node_sets(self) -> tuple[SourceSet, ...]:
        m = self.cfg.m
        return tuple(SourceSet.single(s) for s in range(m)) + tuple(
            obs.decoded for obs in self.relays)

    def context(self, t: int) -> SchedulingContext:
        return SchedulingContext(
            round=t,
            mi_to_dest=tuple(self.mi_to_dest),
            node_sets=self.node_sets(),
            undecoded=self.dest.undecoded,
            dest_state=self.dest,
            rates=self.cfg.rates)


def _threshold_mask(rates, mis) -> int:
    mask = 0
    for s, rate in enumerate(rates):
        if rate <= mis[s]:
            mask |= 1 << s
    return mask


def run_phase1(realization: ChannelRealization, cfg: NetworkConfig) -> FrameState:
    """Execute the orthogonal first phase.

    Each receiver decodes source s iff R_s <= I_{s,receiver}; observer
    states start with the phase-1 MI vector and an empty round history.
    """
    m, l = cfg.m, cfg.l
    mi_to_dest = realization.mi[:, l].tolist()
    mi_to_relay = [realization.mi[:, r].tolist() for r in range(l)]
    dest = ObserverState(
        observer=NodeId.destination(), alpha=cfg.alpha,
        phase1_mi=tuple(mi_to_dest[:m]),
        decoded=SourceSet(_threshold_mask(cfg.rates, mi_to_dest)))
    relays = [
        ObserverState(
            observer=NodeId.relay(r), alpha=cfg.alpha,
            phase1_mi=tuple(mi_to_relay[r][:m]),
            decoded=SourceSet(_threshold_mask(cfg.rates, mi_to_relay[r])))
        for r in range(l)
    ]
    return FrameState(cfg=cfg, mi_to_dest=mi_to_dest, mi_to_relay=mi_to_relay,
                      dest=dest, relays=relays)


def _hear(obs: ObserverState, record: TransmissionRecord, mi: float,
          rate_sums) -> ObserverState:
    """Record one overheard transmission and re-derive the decoding set."""
    snap = record.decoding_set_at_transmit.mask
    und = obs.undecoded.mask
    decoded = obs.decoded
    if snap & und:
        b = best_decodable_kernel(und, rate_sums, obs._mi_sums,
                                  obs._snaps + [snap],
                                  obs._wmis + [obs.alpha * mi], 0, 0.0)
        if b:
            decoded = SourceSet(decoded.mask | b)
    return replace(obs, records=obs.records + (record,),
                   heard_mi=obs.heard_mi + (mi,), decoded=decoded)


def run_round(state: FrameState, strategy, t: int, *,
              enforce_useful: bool = True) -> TransmissionRecord:
    """Run one retransmission round in place.

    ``strategy`` is either a selector callable on the scheduling context
    or an explicit NodeId (used when replaying a fixed sequence, where a
    no-op transmission is legal). The selected node's snapshot is applied
    to the destination and to every relay except the transmitter, then
    all decoding sets are re-derived.
    """
    cfg = state.cfg
    if isinstance(strategy, NodeId):
        node = strategy
    else:
        node = strategy(state.context(t))
    idx = transmitter_index(node, cfg.m)
    snapshot = state.node_set(idx)
    if enforce_useful and not snapshot:
        raise RuntimeError(
            f"strategy selected {node}, which has an empty decoding set")

    record = TransmissionRecord(transmitter=node,
                                decoding_set_at_transmit=snapshot, round=t)
    state.dest = _hear(state.dest, record, state.mi_to_dest[idx],
                       state.rate_sums)
    for r in range(cfg.l):
        if node.kind is NodeKind.RELAY and node.index == r:
            continue
        state.relays[r] = _hear(state.relays[r], record,
                                state.mi_to_relay[r][idx], state.rate_sums)
    state.rounds_done = t
    state.trace.append((t, node, snapshot))
    return record


def _finish(state: FrameState) -> FrameOutcome:
    final = state.dest.decoded
    m = state.cfg.m
    return FrameOutcome(
        rounds_used=state.rounds_done,
        final_destination_set=final,
        decoded_flags=tuple(s in final for s in range(m)),
        trace=tuple(state.trace))


def run_frame(realization: ChannelRealization, strategy: str,
              cfg: NetworkConfig,
              rng: np.random.Generator | None = None) -> FrameOutcome:
    """Simulate one frame under a named scheme.

    ``upper_bound`` first runs the full-CSI exhaustive sequence search
    (consuming ``rng`` for its tie-breaks) and then replays the winning
    sequence; all other names select adaptively round by round.
    """
    full = SourceSet.full(cfg.m)
    state = run_phase1(realization, cfg)

    if strategy == UPPER_BOUND:
        if rng is None:
            raise ValueError("upper_bound requires a random stream for tie-breaks")
        sequence = optimal_sequence(realization, cfg, rng)
        for t, node in enumerate(sequence, start=1):
            if state.dest.decoded == full:
                break
            run_round(state, node, t, enforce_useful=False)
        return _finish(state)

    try:
        selector = SELECTORS[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}") from None
    t = 0
    while state.dest.decoded != full and t < cfg.t_max:
        t += 1
        run_round(state, selector, t)
    return _finish(state)


def replay_trace(realization: ChannelRealization, cfg: NetworkConfig,
                 trace) -> FrameOutcome:
    """Re-execute a stored selection trace against the same realization."""
    full = SourceSet.full(cfg.m)
    state = run_phase1(realization, cfg)
    for t, node, _ in trace:
        if state.dest.decoded == full:
            break
        run_round(state, node, t, enforce_useful=False)
    return _finish(state)


def _simulate_range(cfg: NetworkConfig, strategy: str, start: int, stop: int,
                    master_seed: int) -> RawCounters:
    counters = RawCounters.zero(cfg.m)
    for i in range(start, stop):
        rng = frame_rng(master_seed, i)
        realization = draw_realization(cfg, rng)
        counters.add_frame(run_frame(realization, strategy, cfg, rng=rng))
    return counters


def run_monte_carlo(cfg: NetworkConfig, strategy: str, frames: int,
                    master_seed: int, workers: int = 1) -> RawCounters:
    """Simulate ``frames`` independent frames and sum their counters.

    Frame i draws from a substream keyed by (master_seed, i), and the
    counters are integer sums, so the result is bit-identical for any
    worker count or execution order.
    """
    if frames < 1:
        raise ValueError("frames must be >= 1")
    if cfg.gains_linear is None:
        raise ValueError("config must pass validate_config first")
    if workers <= 1:
        return _simulate_range(cfg, strategy, 0, frames, master_seed)

    chunk = -(-frames // workers)
    bounds = [(k * chunk, min((k + 1) * chunk, frames))
              for k in range(workers) if k * chunk < frames]
    total = RawCounters.zero(cfg.m)
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_simulate_range, cfg, strategy, a, b, master_seed)
                   for a, b in bounds]
        for fut in futures:
            total = total.merge(fut.result())
    return total
