"""MAC outage events and decoding-set updates for one observer.

An observer (a relay or the destination) accumulates mutual information:
one direct term per source from the first phase, plus one alpha-weighted
term per overheard retransmission. Whether a group of still-undecoded
sources is jointly decodable is a multiple-access capacity-region test:
a candidate set B fails if any nonempty subgroup U of B has sum rate above
the accumulated information available for U, where sources outside B that
are still undecoded count as interference and disqualify any retransmission
whose decoding-set snapshot touches them.

Retransmission terms follow the selective decode-and-forward rule: a past
(or hypothetical round-t) transmission contributes its single alpha*I term
to the inequality for U iff its snapshot intersects U and avoids the
interference set.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations

from .network import NodeId, NodeKind
from .sourceset import SourceSet

# A hypothetical round-t transmission: (node, its decoding set, observer-side MI).
Candidate = tuple[NodeId, SourceSet, float]


@dataclass(frozen=True)
class TransmissionRecord:
    """One scheduled retransmission: who sent, with which decoding set, when."""

    transmitter: NodeId
    decoding_set_at_transmit: SourceSet
    round: int

    def __post_init__(self):
        if self.round < 1:
            raise ValueError(f"rounds start at 1, got {self.round}")
        if (self.transmitter.kind is NodeKind.SOURCE
                and self.decoding_set_at_transmit
                != SourceSet.single(self.transmitter.index)):
            raise ValueError("a source always transmits with decoding set {itself}")


@dataclass(frozen=True)
class RoundHistory:
    """Selection history available to the scheduler before round t.

    ``records`` lists the nodes selected in rounds 1..t-1 with the decoding
    sets they transmitted with; ``destination_set`` is the destination's
    decoding set after round t-1. The destination hears every round, so
    the records cover consecutive rounds from 1.
    """

    records: tuple[TransmissionRecord, ...]
    destination_set: SourceSet

    def __post_init__(self):
        for i, rec in enumerate(self.records):
            if rec.round != i + 1:
                raise ValueError("records must cover consecutive rounds from 1")

    @classmethod
    def from_destination_state(cls, state: "ObserverState") -> "RoundHistory":
        return cls(records=state.records, destination_set=state.decoded)


@dataclass(frozen=True)
class ObserverState:
    """Everything one observer has accumulated about the current frame.

    Parameters
    ----------
    observer : NodeId
        The receiving node (a relay or the destination).
    alpha : float
        Second-phase slot-length ratio weighting retransmission MI.
    phase1_mi : tuple of float
        Direct mutual information from each source to this observer.
    decoded : SourceSet
        Sources this observer has decoded so far.
    records : tuple of TransmissionRecord
        Retransmissions this observer could hear (never its own).
    heard_mi : tuple of float
        Observer-side MI of each record, aligned with ``records``.
    """

    observer: NodeId
    alpha: float
    phase1_mi: tuple[float, ...]
    decoded: SourceSet
    records: tuple[TransmissionRecord, ...] = ()
    heard_mi: tuple[float, ...] = ()
    # kernel caches, derived in __post_init__
    _mi_sums: list[float] = field(init=False, default=None, repr=False, compare=False)
    _snaps: list[int] = field(init=False, default=None, repr=False, compare=False)
    _wmis: list[float] = field(init=False, default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.records) != len(self.heard_mi):
            raise ValueError("records and heard_mi must align")
        for rec in self.records:
            if rec.transmitter == self.observer:
                raise ValueError(
                    f"half-duplex violation: {self.observer} cannot hear itself")
        object.__setattr__(self, "_mi_sums", mask_sums(self.phase1_mi))
        object.__setattr__(
            self, "_snaps",
            [r.decoding_set_at_transmit.mask for r in self.records])
        object.__setattr__(
            self, "_wmis", [self.alpha * mi for mi in self.heard_mi])

    @property
    def m(self) -> int:
        return len(self.phase1_mi)

    @property
    def undecoded(self) -> SourceSet:
        return self.decoded.complement(self.m)


def apply_transmission(state: ObserverState, record: TransmissionRecord,
                       observer_mi: float) -> ObserverState:
    """Return the observer's state after hearing one retransmission.

    The observer's decoding set is untouched; re-deriving it is a separate
    step. Half-duplex nodes never hear themselves (enforced on the state).
    """
    return replace(state,
                   records=state.records + (record,),
                   heard_mi=state.heard_mi + (observer_mi,))


# ---------------------------------------------------------------------------
# bitmask kernels
#
# These run millions of times per sweep point, so they work on plain ints
# and lists. Every public predicate below delegates here; the exhaustive
# sequence search drives them directly.
# ---------------------------------------------------------------------------

def mask_sums(values) -> list[float]:
    """sums[mask] = sum of values[i] over the set bits of mask."""
    n = len(values)
    sums = [0.0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + values[low.bit_length() - 1]
    return sums


@lru_cache(maxsize=4096)
def ordered_submasks(mask: int) -> tuple[int, ...]:
    """Nonempty submasks of ``mask``: cardinality descending, lexicographic within."""
    elements = []
    m = mask
    while m:
        low = m & -m
        elements.append(low.bit_length() - 1)
        m ^= low
    out = []
    for k in range(len(elements), 0, -1):
        for combo in combinations(elements, k):
            sub = 0
            for e in combo:
                sub |= 1 << e
            out.append(sub)
    return tuple(out)


def mac_violated_kernel(u: int, interference: int, rate_sums, mi_sums,
                        snaps, wmis, cand_snap: int, cand_wmi: float) -> bool:
    """True iff the sum-rate inequality for subgroup ``u`` fails.

    rhs accumulates the phase-1 MI of u plus every retransmission term
    whose snapshot intersects u and avoids the interference mask.
    """
    rhs = mi_sums[u]
    for k in range(len(snaps)):
        snap = snaps[k]
        if snap & u and not snap & interference:
            rhs += wmis[k]
    if cand_snap & u and not cand_snap & interference:
        rhs += cand_wmi
    return rate_sums[u] > rhs


def common_outage_kernel(b: int, undecoded: int, rate_sums, mi_sums,
                         snaps, wmis, cand_snap: int, cand_wmi: float) -> bool:
    """Common outage of subset ``b``: some nonempty subgroup fails its inequality."""
    interference = undecoded & ~b
    sub = b
    while sub:
        if mac_violated_kernel(sub, interference, rate_sums, mi_sums,
                               snaps, wmis, cand_snap, cand_wmi):
            return True
        sub = (sub - 1) & b
    return False


def best_decodable_kernel(undecoded: int, rate_sums, mi_sums,
                          snaps, wmis, cand_snap: int, cand_wmi: float) -> int:
    """Largest decodable subset of ``undecoded`` (first lexicographic on ties)."""
    if not undecoded:
        return 0
    for b in ordered_submasks(undecoded):
        if not common_outage_kernel(b, undecoded, rate_sums, mi_sums,
                                    snaps, wmis, cand_snap, cand_wmi):
            return b
    return 0


def _unpack_candidate(state: ObserverState, candidate: Candidate | None):
    if candidate is None:
        return 0, 0.0
    _, cand_set, cand_mi = candidate
    return cand_set.mask, state.alpha * cand_mi


# ---------------------------------------------------------------------------
# public predicates
# ---------------------------------------------------------------------------

def mac_constraint_violated(u: SourceSet, interference: SourceSet,
                            state: ObserverState, rates,
                            candidate: Candidate | None = None) -> bool:
    """Does the subgroup ``u`` break its multiple-access sum-rate inequality?

    ``u`` must be nonempty and disjoint from ``interference``.
    """
    if not u:
        raise ValueError("u must be nonempty")
    if u.intersects(interference):
        raise ValueError("u and interference must be disjoint")
    cand_snap, cand_wmi = _unpack_candidate(state, candidate)
    return mac_violated_kernel(u.mask, interference.mask, mask_sums(rates),
                               state._mi_sums, state._snaps, state._wmis,
                               cand_snap, cand_wmi)


def common_outage_of_subset(b: SourceSet, state: ObserverState, rates,
                            candidate: Candidate | None = None) -> bool:
    """Common outage of the sources in ``b`` at this observer.

    Sources still undecoded but outside ``b`` are treated as interference.
    The empty set is never in outage.
    """
    undecoded = state.undecoded
    if not b.issubset(undecoded):
        raise ValueError("b must be a subset of the observer's undecoded sources")
    cand_snap, cand_wmi = _unpack_candidate(state, candidate)
    return common_outage_kernel(b.mask, undecoded.mask, mask_sums(rates),
                                state._mi_sums, state._snaps, state._wmis,
                                cand_snap, cand_wmi)


def best_decodable_subset(undecoded: SourceSet, state: ObserverState, rates,
                          candidate: Candidate | None = None) -> SourceSet:
    """The decoding outcome: maximum-cardinality subset not in common outage.

    Scans subsets of ``undecoded`` by decreasing size (lexicographic within
    a size) and returns the first that clears every inequality; the empty
    set if nothing does. The result satisfies the two decodability
    conditions: it is not in common outage itself, and every strictly
    larger subset is.
    """
    cand_snap, cand_wmi = _unpack_candidate(state, candidate)
    mask = best_decodable_kernel(undecoded.mask, mask_sums(rates),
                                 state._mi_sums, state._snaps, state._wmis,
                                 cand_snap, cand_wmi)
    return SourceSet(mask)


def brute_force_decodable_subset(undecoded: SourceSet, state: ObserverState,
                                 rates, candidate: Candidate | None = None) -> SourceSet:
    """Reference implementation of :func:`best_decodable_subset` by full enumeration.

    Written against the defining formulas with plain set arithmetic and no
    shared kernels; kept as the independent oracle for equivalence tests.
    """
    cand_set, cand_mi = (None, 0.0)
    if candidate is not None:
        _, cand_set, cand_mi = candidate

    def group_fails(u: frozenset, interference: frozenset) -> bool:
        lhs = sum(rates[s] for s in u)
        rhs = sum(state.phase1_mi[s] for s in u)
        for rec, mi in zip(state.records, state.heard_mi):
            snap = set(rec.decoding_set_at_transmit)
            if snap & u and not snap & interference:
                rhs += state.alpha * mi
        if cand_set is not None:
            snap = set(cand_set)
            if snap & u and not snap & interference:
                rhs += state.alpha * cand_mi
        return lhs > rhs

    def in_outage(b: frozenset, interference: frozenset) -> bool:
        return any(group_fails(frozenset(u), interference)
                   for k in range(1, len(b) + 1)
                   for u in combinations(sorted(b), k))

    members = sorted(undecoded)
    best: tuple[int, ...] | None = None
    for k in range(len(members), 0, -1):
        for b in combinations(members, k):
            interference = frozenset(members) - frozenset(b)
            if not in_outage(frozenset(b), interference):
                best = b
                break
        if best is not None:
            break
    return SourceSet.from_indices(best or ())


def individual_outage(s: int, state: ObserverState, rates,
                      candidate: Candidate | None = None) -> bool:
    """Is source ``s`` undecodable under every interference assumption?

    True iff for each interference set I drawn from the other undecoded
    sources, some subgroup containing ``s`` (and avoiding I) breaks its
    inequality. Exposed for verification; the simulator's outage counts
    come from the realized decoding sets instead.
    """
    undecoded = state.undecoded
    if s not in undecoded:
        raise ValueError(f"source {s} is already decoded at this observer")
    cand_snap, cand_wmi = _unpack_candidate(state, candidate)
    rate_sums = mask_sums(rates)
    others = (undecoded - SourceSet.single(s)).indices()
    s_bit = 1 << s
    for k in range(len(others) + 1):
        for interference in combinations(others, k):
            i_mask = 0
            for i in interference:
                i_mask |= 1 << i
            allowed = undecoded.mask & ~i_mask
            found_violated = False
            sub = allowed
            while sub:
                if sub & s_bit and mac_violated_kernel(
                        sub, i_mask, rate_sums, state._mi_sums, state._snaps,
                        state._wmis, cand_snap, cand_wmi):
                    found_violated = True
                    break
                sub = (sub - 1) & allowed
            if not found_violated:
                return False
    return True
