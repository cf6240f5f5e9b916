"""Acceptance gate: one test per primary criterion, at the stated scales.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail
line per criterion. The low-SNR ordering run simulates 3 x 100k frames
for five schemes (one an exhaustive 216-sequence search per frame), so
the whole module takes several minutes on one core.
"""

import time

import numpy as np

from omamrc import (adapt_rates, best_decodable_subset,
                    brute_force_decodable_subset, compute_metrics,
                    draw_realization, frame_rng, individual_outage,
                    outcome_key, run_frame, run_monte_carlo, run_phase1)
from omamrc.cli import EXIT_OK, execute
from conftest import make_config, naive_individual_outage, random_state


def report(name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"\n[ACCEPTANCE] {name}: {status}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def crn_metrics(gamma_db, frames, seed, strategies, rates=(1.0, 1.0, 1.0)):
    """Common-random-number runs: same seed, hence identical channel draws."""
    cfg = make_config(gamma_db=gamma_db, rates=rates)
    out = {}
    for name in strategies:
        counters = run_monte_carlo(cfg, name, frames, seed)
        out[name] = compute_metrics(counters, cfg, name)
    return out


def test_oracle_equivalence_exact():
    """best/brute-force decodable subsets and both outage evaluations agree
    on >= 1000 random small instances in under 10 s."""
    rng = np.random.default_rng(20260809)
    t0 = time.perf_counter()
    checked = 0
    for _ in range(1000):
        state, rates, cand = random_state(rng)
        und = state.undecoded
        assert best_decodable_subset(und, state, rates, cand) == \
            brute_force_decodable_subset(und, state, rates, cand)
        for s in und:
            assert individual_outage(s, state, rates, cand) == \
                naive_individual_outage(s, state, rates, cand)
        checked += 1
    elapsed = time.perf_counter() - t0
    report("oracle-equivalence", checked == 1000 and elapsed < 10.0,
           f"{checked} instances in {elapsed:.2f} s")


def test_per_realization_oracle_dominance():
    """The exhaustive upper bound is never lexicographically worse than any
    adaptive strategy on 500 seeded (3,3,1) realizations, in under 1 min."""
    t0 = time.perf_counter()
    strategies = ("strategy1", "strategy2", "strategy3", "reference1")
    count = 0
    for gamma_db, block in ((0.0, 0), (3.0, 1), (6.0, 2), (10.0, 3)):
        cfg = make_config(gamma_db=gamma_db)
        for i in range(125):
            rng = frame_rng(424242 + block, i)
            realization = draw_realization(cfg, rng)
            upper = run_frame(realization, "upper_bound", cfg, rng=rng)
            for name in strategies:
                other = run_frame(realization, name, cfg)
                assert outcome_key(upper) <= outcome_key(other), (
                    f"{name} beat the upper bound at {gamma_db} dB frame {i}")
            count += 1
    elapsed = time.perf_counter() - t0
    report("oracle-dominance", count == 500 and elapsed < 60.0,
           f"500 realizations x 4 strategies in {elapsed:.1f} s")


def test_high_snr_asymptote():
    """At 30 dB with R=1, every scheme approaches eta = sum(R_s)/M = 1 and
    uses almost no retransmission rounds."""
    reports = crn_metrics(30.0, 10_000, 7, ("strategy1", "strategy2",
                                            "strategy3", "reference1",
                                            "upper_bound"))
    ok = True
    details = []
    for name, rep in reports.items():
        ok &= 0.95 <= rep.eta <= 1.00 and rep.mean_rounds < 0.05
        details.append(f"{name}: eta={rep.eta:.4f} E(T)={rep.mean_rounds:.4f}")
    report("high-snr-asymptote", ok, "; ".join(details))


def test_metric_identities():
    """eta = R * eta_norm under symmetric rates; outage bounds; phase-1
    decoding equals the per-source threshold rule."""
    cfg = make_config(rates=(1.5, 1.5, 1.5), gamma_db=4.0)
    counters = run_monte_carlo(cfg, "strategy2", 2000, 13)
    rep = compute_metrics(counters, cfg, "strategy2")
    identity_ok = abs(rep.eta - 1.5 * rep.eta_norm) <= 1e-12 * max(rep.eta, 1.0)
    bound_ok = all(cfg.m >= 1 and counters.frames - d <= counters.common_outage_count
                   for d in counters.decode_counts)

    threshold_ok = True
    cfg1 = make_config(gamma_db=2.0)
    for i in range(1000):
        realization = draw_realization(cfg1, frame_rng(99, i))
        state = run_phase1(realization, cfg1)
        expected = {s for s in range(3)
                    if cfg1.rates[s] <= realization.mi[s, cfg1.l]}
        threshold_ok &= set(state.dest.decoded) == expected

    report("metric-identities", identity_ok and bound_ok and threshold_ok,
           f"|eta - R*eta_norm| = {abs(rep.eta - 1.5 * rep.eta_norm):.2e}; "
           f"outage bound ok={bound_ok}; threshold rule ok={threshold_ok}")


def test_determinism_across_workers(tmp_path):
    """Same config + seed gives byte-identical CSV for 1 and 3 workers."""
    base = """
[network]
M = 3
L = 3
T_max = 3
alpha = 0.5

[rates]
values = [1.0, 1.0, 1.0]

[sweep]
kind = "symmetric_gamma"
values_db = [3.0, 10.0]

[run]
frames = 500
seed = 21
strategies = ["strategy1", "strategy2", "strategy3", "reference1", "upper_bound"]
workers = {workers}
"""
    outputs = []
    for workers in (1, 3):
        cfg_path = tmp_path / f"run_{workers}.toml"
        cfg_path.write_text(base.format(workers=workers))
        out_path = tmp_path / f"out_{workers}.csv"
        assert execute(str(cfg_path), {"output": str(out_path)}) == EXIT_OK
        outputs.append(out_path.read_bytes())
    report("determinism", outputs[0] == outputs[1],
           f"{len(outputs[0])} bytes, identical across worker counts")


def test_link_adaptation_envelope():
    """The adapted envelope dominates every fixed-rate curve pointwise under
    common random numbers, and the 35 dB point selects rate 3.5."""
    base = make_config()
    family = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5)
    res = adapt_rates(base, sweep_db=(5.0, 15.0, 25.0, 35.0),
                      mcs_rates=family, strategy="strategy2", frames=5000,
                      master_seed=31)
    envelope_ok = all(
        res.envelope_eta()[p] >= res.reports[p][k].eta
        for p in range(4) for k in range(len(family)))
    rate_ok = res.selected_rates()[-1] == 3.5
    report("link-adaptation-envelope", envelope_ok and rate_ok,
           f"selected rates {res.selected_rates()}")


def test_slow_link_adaptation_gain_soft():
    """SNR offset between strategy2's and reference1's adapted envelopes at
    eta = 1.5 lies in [0.2, 2.0] dB (roughly 1 dB expected)."""
    base = make_config()
    family = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5)
    sweep = tuple(np.arange(5.0, 11.0, 1.0))
    crossings = {}
    for name in ("strategy2", "reference1"):
        res = adapt_rates(base, sweep, family, name, 10_000, 55)
        env = res.envelope_eta()
        crossings[name] = float(np.interp(1.5, env, sweep))
    offset = crossings["reference1"] - crossings["strategy2"]
    report("slow-link-adaptation-gain", 0.2 <= offset <= 2.0,
           f"crossings {crossings}, offset {offset:.2f} dB")


def test_low_snr_ordering():
    """At 0/3/6 dB with 100k common-random-number frames per scheme, every
    proposal beats reference1, none beats the upper bound, and strategy1 is
    within 0.01 of strategy3 from above."""
    schemes = ("strategy1", "strategy2", "strategy3", "reference1",
               "upper_bound")
    ok = True
    details = []
    for gamma_db in (0.0, 3.0, 6.0):
        eta = {name: rep.eta
               for name, rep in crn_metrics(gamma_db, 100_000, 2026,
                                            schemes).items()}
        for k in ("strategy1", "strategy2", "strategy3"):
            ok &= eta[k] >= eta["reference1"]
            ok &= eta[k] <= eta["upper_bound"]
        ok &= eta["strategy1"] >= eta["strategy3"] - 0.01
        details.append(
            f"{gamma_db:g} dB: " + " ".join(f"{n}={eta[n]:.4f}" for n in schemes))
    report("low-snr-ordering", ok, "; ".join(details))
