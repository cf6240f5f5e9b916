"""Centralized node-selection rules for the retransmission rounds.

Each round the destination picks one node (source or relay) to transmit,
knowing only the direct-link mutual informations and every node's decoding
set. The three proposed selectors trade computation for throughput:

* strategy 1 scores every candidate by how many new sources the
  destination would decode if that candidate transmitted, breaking ties
  by direct-link MI;
* strategy 2 takes the best direct link among nodes that can still
  contribute anything;
* strategy 3 weighs the direct link by the size of the candidate's
  decoding set.

``reference1`` reproduces the benchmark behavior of minimizing the chance
that the common outage persists, judged from the decoding sets alone.
``optimal_sequence`` is the genie-aided exhaustive search over all fixed
activation sequences, used as the throughput upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import (ChannelRealization, NetworkConfig, NodeId,
                      node_from_transmitter_index)
from .outage import ObserverState, best_decodable_kernel, mask_sums
from .sourceset import SourceSet

STRATEGY_NAMES = ("strategy1", "strategy2", "strategy3", "reference1")
UPPER_BOUND = "upper_bound"
ALL_SCHEMES = STRATEGY_NAMES + (UPPER_BOUND,)


@dataclass(frozen=True)
class SchedulingContext:
    """What the destination knows when it schedules round t."""

    round: int
    mi_to_dest: tuple[float, ...]
    node_sets: tuple[SourceSet, ...]
    undecoded: SourceSet
    dest_state: ObserverState
    rates: tuple[float, ...]

    def __post_init__(self):
        if not self.undecoded:
            raise ValueError("scheduling context requires undecoded sources")
        m = self.dest_state.m
        for s in range(m):
            if self.node_sets[s] != SourceSet.single(s):
                raise ValueError(f"source {s} must have decoding set {{{s}}}")

    @property
    def m(self) -> int:
        return self.dest_state.m

    @property
    def n_nodes(self) -> int:
        return len(self.node_sets)


def useful_candidates(ctx: SchedulingContext) -> list[NodeId]:
    """Nodes whose decoding set intersects the undecoded set, in node order."""
    und = ctx.undecoded.mask
    m = ctx.m
    return [node_from_transmitter_index(i, m)
            for i in range(ctx.n_nodes) if ctx.node_sets[i].mask & und]


def _useful_indices(ctx: SchedulingContext) -> list[int]:
    und = ctx.undecoded.mask
    return [i for i in range(ctx.n_nodes) if ctx.node_sets[i].mask & und]


def select_strategy1(ctx: SchedulingContext) -> NodeId:
    """Maximize newly decoded sources; break ties by direct-link MI.

    Every candidate is scored by the size of the destination's decodable
    subset if that candidate transmitted now (zero for candidates whose
    decoding set misses the undecoded sources entirely). Among top scorers
    the best direct link wins. When no candidate decodes anything new, the
    MI tie-break is restricted to candidates that at least add usable
    information.
    """
    st = ctx.dest_state
    und = ctx.undecoded.mask
    rate_sums = mask_sums(ctx.rates)
    alpha = st.alpha
    scores = []
    best_v = 0
    for i in range(ctx.n_nodes):
        snap = ctx.node_sets[i].mask
        if not snap & und:
            scores.append(0)
            continue
        b = best_decodable_kernel(und, rate_sums, st._mi_sums, st._snaps,
                                  st._wmis, snap, alpha * ctx.mi_to_dest[i])
        v = bin(b).count("1")
        scores.append(v)
        if v > best_v:
            best_v = v
    if best_v > 0:
        pool = [i for i in range(ctx.n_nodes) if scores[i] == best_v]
    else:
        pool = _useful_indices(ctx)
    sel = max(pool, key=lambda i: ctx.mi_to_dest[i])
    return node_from_transmitter_index(sel, ctx.m)


def select_strategy2(ctx: SchedulingContext) -> NodeId:
    """Highest direct-link MI among nodes that can still contribute."""
    sel = max(_useful_indices(ctx), key=lambda i: ctx.mi_to_dest[i])
    return node_from_transmitter_index(sel, ctx.m)


def select_strategy3(ctx: SchedulingContext) -> NodeId:
    """Highest product of direct-link MI and decoding-set cardinality."""
    sel = max(_useful_indices(ctx),
              key=lambda i: ctx.mi_to_dest[i] * len(ctx.node_sets[i]))
    return node_from_transmitter_index(sel, ctx.m)


def select_reference1(ctx: SchedulingContext) -> NodeId:
    """Benchmark rule: chase the common outage event using decoding sets only.

    Judged from the decoding sets alone (no instantaneous link quality),
    the candidate most likely to clear the common outage of the whole
    undecoded set is the one covering the most undecoded sources, so the
    benchmark selects by coverage, ties going to the first node in
    deterministic order. Spreading rounds across the whole set instead of
    dedicating them to a decodable subset, and ignoring the realized
    direct links, is what makes this benchmark weak, most visibly at low
    SNR.
    """
    und = ctx.undecoded.mask
    sel = max(_useful_indices(ctx),
              key=lambda i: bin(ctx.node_sets[i].mask & und).count("1"))
    return node_from_transmitter_index(sel, ctx.m)


SELECTORS = {
    "strategy1": select_strategy1,
    "strategy2": select_strategy2,
    "strategy3": select_strategy3,
    "reference1": select_reference1,
}


# ---------------------------------------------------------------------------
# exhaustive search upper bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceSearchResult:
    """Outcome of the exhaustive activation-sequence search for one frame."""

    sequence: tuple[NodeId, ...]
    rounds_to_full_decode: int | None
    final_cardinality: int
    sequences_considered: int
    optimal_count: int


def exhaustive_search(realization: ChannelRealization, cfg: NetworkConfig,
                      rng: np.random.Generator) -> SequenceSearchResult:
    """Search all (M+L)^T_max fixed activation sequences with full CSI.

    Sequences are ranked by fewest rounds to decode every source at the
    destination; if none fully decodes, by largest final decoding set.
    Equally-ranked sequences are drawn uniformly at random. Prefixes whose
    extensions all share one outcome are scored once with the matching
    weight, so the ranking and the uniform draw cover all sequences while
    skipping subtrees that cannot contain an optimum.
    """
    m, l, t_max, alpha = cfg.m, cfg.l, cfg.t_max, cfg.alpha
    n = m + l
    full = (1 << m) - 1
    rates = cfg.rates
    rate_sums = mask_sums(rates)
    mi = realization.mi
    mi_to_dest = mi[:, l].tolist()
    dest_mi_sums = mask_sums(mi_to_dest[:m])
    relay_mi_sums = [mask_sums(mi[:m, r].tolist()) for r in range(l)]

    dest0 = 0
    for s in range(m):
        if rates[s] <= mi_to_dest[s]:
            dest0 |= 1 << s
    if dest0 == full:
        return SequenceSearchResult((), 0, m, 1, 1)
    relay0 = []
    for r in range(l):
        d = 0
        for s in range(m):
            if rates[s] <= mi[s, r]:
                d |= 1 << s
        relay0.append(d)

    # depth-first walk with undo; histories are shared append/pop lists
    dsnaps: list[int] = []
    dwmis: list[float] = []
    rsnaps: list[list[int]] = [[] for _ in range(l)]
    rwmis: list[list[float]] = [[] for _ in range(l)]
    seq: list[int] = []

    best_key = (2, 0)  # worse than any real outcome
    best_seq: tuple[int, ...] = ()
    tie_weight = 0
    considered = 0

    def score(key, weight):
        nonlocal best_key, best_seq, tie_weight, considered
        considered += weight
        if key < best_key:
            best_key = key
            best_seq = tuple(seq)
            tie_weight = weight
        elif key == best_key:
            # weighted reservoir draw keeps the pick uniform over sequences
            tie_weight += weight
            if rng.random() < weight / tie_weight:
                best_seq = tuple(seq)

    def visit(depth: int, dest: int, relay_sets: list[int]):
        nonlocal considered
        if dest == full:
            score((0, depth), n ** (t_max - depth))
            return
        if depth == t_max:
            score((1, -bin(dest).count("1")), 1)
            return
        if best_key[0] == 0 and depth + 1 > best_key[1]:
            considered += n ** (t_max - depth)  # provably worse than best
            return
        last = depth + 1 == t_max
        for a in range(n):
            snap = 1 << a if a < m else relay_sets[a - m]
            seq.append(a)
            dsnaps.append(snap)
            dwmis.append(alpha * mi_to_dest[a])
            new_dest = dest
            und = full & ~dest
            if snap & und:
                b = best_decodable_kernel(und, rate_sums, dest_mi_sums,
                                          dsnaps, dwmis, 0, 0.0)
                new_dest |= b
            if last or new_dest == full:
                # relay evolution cannot influence the remaining outcome
                visit(depth + 1, new_dest, relay_sets)
            else:
                new_relays = relay_sets.copy()
                heard = []
                for r in range(l):
                    if a == m + r:
                        continue
                    rsnaps[r].append(snap)
                    rwmis[r].append(alpha * mi[a, r])
                    heard.append(r)
                    rund = full & ~relay_sets[r]
                    if snap & rund:
                        b = best_decodable_kernel(rund, rate_sums,
                                                  relay_mi_sums[r], rsnaps[r],
                                                  rwmis[r], 0, 0.0)
                        new_relays[r] |= b
                visit(depth + 1, new_dest, new_relays)
                for r in heard:
                    rsnaps[r].pop()
                    rwmis[r].pop()
            dsnaps.pop()
            dwmis.pop()
            seq.pop()

    visit(0, dest0, relay0)

    if best_key[0] == 0:
        rounds, card = best_key[1], m
        chosen = best_seq[:rounds]
    else:
        rounds, card = None, -best_key[1]
        chosen = best_seq
    nodes = tuple(node_from_transmitter_index(a, m) for a in chosen)
    return SequenceSearchResult(nodes, rounds, card, considered, tie_weight)


def optimal_sequence(realization: ChannelRealization, cfg: NetworkConfig,
                     rng: np.random.Generator) -> list[NodeId]:
    """Genie-aided optimal activation order for one realization.

    Returns the transmissions up to full decoding (empty if the first
    phase already decoded everything), or a full-length sequence
    maximizing the final decoding set when nothing achieves full decoding.
    """
    return list(exhaustive_search(realization, cfg, rng).sequence)
