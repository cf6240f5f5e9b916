"""Shared helpers: random observer states and small reference evaluators."""

from __future__ import annotations

import numpy as np
import pytest

from omamrc import (NetworkConfig, NodeId, ObserverState, SourceSet,
                    TransmissionRecord, symmetric_gains_db, validate_config)


def make_config(m=3, l=3, t_max=3, alpha=0.5, rates=None, gamma_db=3.0):
    return validate_config(NetworkConfig(
        m=m, l=l, t_max=t_max, alpha=alpha,
        rates=tuple(rates) if rates is not None else (1.0,) * m,
        gains_db=symmetric_gains_db(m, l, gamma_db)))


@pytest.fixture
def cfg331():
    """The (3,3,1) network with T_max=3 and alpha=0.5."""
    return make_config()


def make_state(observer=None, alpha=0.5, phase1_mi=(), decoded=(),
               records=(), heard_mi=()):
    """Build an ObserverState from plain tuples/lists."""
    return ObserverState(
        observer=observer or NodeId.destination(),
        alpha=alpha,
        phase1_mi=tuple(phase1_mi),
        decoded=SourceSet.from_indices(decoded),
        records=tuple(records),
        heard_mi=tuple(heard_mi))


def relay_record(round_, *snapshot):
    return TransmissionRecord(
        transmitter=NodeId.relay(0),
        decoding_set_at_transmit=SourceSet.from_indices(snapshot),
        round=round_)


def random_state(rng: np.random.Generator, m: int | None = None,
                 max_records: int = 3):
    """A random small observer instance for oracle-equivalence checks."""
    if m is None:
        m = int(rng.integers(2, 5))
    rates = tuple(float(r) for r in rng.uniform(0.3, 2.5, size=m))
    phase1 = tuple(float(x) for x in rng.uniform(0.0, 2.5, size=m))
    decoded_mask = int(rng.integers(0, 1 << m))
    if decoded_mask == (1 << m) - 1:
        decoded_mask &= ~(1 << int(rng.integers(0, m)))  # keep one undecoded
    records, heard = [], []
    n_rec = int(rng.integers(0, max_records + 1))
    for k in range(n_rec):
        snap = int(rng.integers(1, 1 << m))
        records.append(TransmissionRecord(
            transmitter=NodeId.relay(int(rng.integers(0, 3))),
            decoding_set_at_transmit=SourceSet(snap), round=k + 1))
        heard.append(float(rng.uniform(0.0, 3.0)))
    state = ObserverState(
        observer=NodeId.destination(),
        alpha=float(rng.uniform(0.25, 1.0)),
        phase1_mi=phase1,
        decoded=SourceSet(decoded_mask),
        records=tuple(records),
        heard_mi=tuple(heard))
    candidate = None
    if rng.random() < 0.6:
        candidate = (NodeId.relay(0), SourceSet(int(rng.integers(1, 1 << m))),
                     float(rng.uniform(0.0, 3.0)))
    return state, rates, candidate


def naive_group_fails(u, interference, state, rates, candidate=None):
    """Eq.-style sum-rate check written with plain Python sets."""
    u = set(u)
    interference = set(interference)
    lhs = sum(rates[s] for s in u)
    rhs = sum(state.phase1_mi[s] for s in u)
    for rec, mi in zip(state.records, state.heard_mi):
        snap = set(rec.decoding_set_at_transmit)
        if snap & u and not snap & interference:
            rhs += state.alpha * mi
    if candidate is not None:
        snap = set(candidate[1])
        if snap & u and not snap & interference:
            rhs += state.alpha * candidate[2]
    return lhs > rhs


def all_subsets(items):
    items = sorted(items)
    for mask in range(1 << len(items)):
        yield frozenset(items[i] for i in range(len(items)) if mask >> i & 1)


def naive_individual_outage(s, state, rates, candidate=None):
    """Direct intersection-over-interference / union-over-subgroups evaluation."""
    undecoded = set(state.undecoded)
    others = undecoded - {s}
    for interference in all_subsets(others):
        hit = False
        for u in all_subsets(undecoded - interference):
            if s in u and naive_group_fails(u, interference, state, rates,
                                            candidate):
                hit = True
                break
        if not hit:
            return False
    return True
