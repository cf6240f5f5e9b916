import numpy as np
import pytest

from omamrc import (NodeId, RawCounters, SourceSet, draw_realization,
                    frame_rng, replay_trace, run_frame, run_monte_carlo,
                    run_phase1, run_round)
from omamrc.outage import best_decodable_subset
from conftest import make_config


def S(*idx):
    return SourceSet.from_indices(idx)


class TestPhase1:
    def test_threshold_rule(self, cfg331):
        real = draw_realization(cfg331, frame_rng(0, 0))
        real.mi[:3, 3] = [1.2, 0.3, 0.9]
        state = run_phase1(real, cfg331)
        assert state.dest.decoded == S(0)
        assert state.dest.records == ()

    def test_relays_decode_from_their_own_links(self, cfg331):
        real = draw_realization(cfg331, frame_rng(0, 1))
        real.mi[:3, 0] = [1.5, 1.5, 0.2]   # at r1
        real.mi[:3, 1] = [0.2, 0.2, 0.2]   # at r2
        state = run_phase1(real, cfg331)
        assert state.relays[0].decoded == S(0, 1)
        assert state.relays[1].decoded == S()

    def test_all_links_strong_decodes_everything(self):
        cfg = make_config(gamma_db=45.0)
        real = draw_realization(cfg, frame_rng(3, 0))
        state = run_phase1(real, cfg)
        assert state.dest.decoded == SourceSet.full(3)

    def test_matches_decodable_subset_oracle(self, cfg331):
        # orthogonal phase-1 decoding equals the general machinery with
        # an empty history
        for i in range(100):
            real = draw_realization(cfg331, frame_rng(50, i))
            state = run_phase1(real, cfg331)
            fresh = state.dest
            from dataclasses import replace
            empty = replace(fresh, decoded=S())
            assert best_decodable_subset(SourceSet.full(3), empty,
                                         cfg331.rates) == state.dest.decoded


class TestRunRound:
    def test_transmitter_own_set_unchanged(self, cfg331):
        real = draw_realization(cfg331, frame_rng(4, 2))
        state = run_phase1(real, cfg331)
        if state.dest.decoded == SourceSet.full(3):
            pytest.skip("frame decoded in phase 1")
        before = [obs.decoded for obs in state.relays]
        run_round(state, NodeId.relay(0), 1, enforce_useful=False)
        assert state.relays[0].decoded == before[0]

    def test_destination_set_monotone(self, cfg331):
        for i in range(50):
            rng = frame_rng(60, i)
            real = draw_realization(cfg331, rng)
            state = run_phase1(real, cfg331)
            prev = state.dest.decoded
            t = 0
            while state.dest.decoded != SourceSet.full(3) and t < cfg331.t_max:
                t += 1
                from omamrc.strategies import select_strategy2
                run_round(state, select_strategy2, t)
                assert prev.issubset(state.dest.decoded)
                for obs in state.relays:
                    assert obs.undecoded.mask & obs.decoded.mask == 0
                prev = state.dest.decoded

    def test_overhearing_relay_can_grow_its_set(self):
        cfg = make_config(m=2, l=2, t_max=2, rates=[1, 1])
        real = draw_realization(cfg, frame_rng(5, 5))
        # s0 weak everywhere except at r1; s1 fine at d. r2 almost
        # decodes s0 (MI 0.9); r1's retransmission closes the gap.
        real.mi[:, 2] = [0.4, 1.5, 1.4, 0.1]   # to destination
        real.mi[:2, 0] = [1.2, 0.1]            # at r1: decodes s0
        real.mi[:2, 1] = [0.9, 0.1]            # at r2: misses s0
        real.mi[2, 1] = 0.5                    # r1 -> r2
        real.mi[3, 0] = 0.0
        state = run_phase1(real, cfg)
        assert state.relays[0].decoded == S(0)
        assert state.relays[1].decoded == S()
        run_round(state, NodeId.relay(0), 1, enforce_useful=False)
        # 0.9 + 0.5*0.5 = 1.15 >= 1: r2 decoded s0 by listening
        assert state.relays[1].decoded == S(0)

    def test_empty_set_selection_is_contract_violation(self, cfg331):
        real = draw_realization(cfg331, frame_rng(4, 3))
        real.mi[:] = 0.0
        state = run_phase1(real, cfg331)
        with pytest.raises(RuntimeError, match="empty decoding set"):
            run_round(state, lambda ctx: NodeId.relay(0), 1)


class TestRunFrame:
    def test_full_decode_in_phase1_gives_zero_rounds(self):
        cfg = make_config(gamma_db=45.0)
        rng = frame_rng(9, 0)
        real = draw_realization(cfg, rng)
        out = run_frame(real, "strategy1", cfg)
        assert out.rounds_used == 0
        assert out.trace == ()
        assert out.all_decoded

    def test_dead_network_exhausts_rounds(self):
        cfg = make_config(gamma_db=-np.inf)
        real = draw_realization(cfg, frame_rng(9, 1))
        out = run_frame(real, "strategy1", cfg)
        assert out.rounds_used == cfg.t_max
        assert out.final_destination_set == S()
        assert out.decoded_flags == (False, False, False)

    def test_trace_length_matches_rounds(self, cfg331):
        for i in range(30):
            real = draw_realization(cfg331, frame_rng(70, i))
            out = run_frame(real, "strategy3", cfg331)
            assert len(out.trace) == out.rounds_used
            assert [t for t, _, _ in out.trace] == list(
                range(1, out.rounds_used + 1))

    def test_zero_rounds_iff_phase1_clear(self, cfg331):
        for i in range(60):
            real = draw_realization(cfg331, frame_rng(71, i))
            state = run_phase1(real, cfg331)
            out = run_frame(real, "strategy2", cfg331)
            assert (out.rounds_used == 0) == (
                state.dest.decoded == SourceSet.full(3))

    def test_unknown_strategy(self, cfg331):
        real = draw_realization(cfg331, frame_rng(9, 2))
        with pytest.raises(ValueError, match="unknown strategy"):
            run_frame(real, "strategy9", cfg331)

    def test_replaying_trace_reproduces_outcome(self, cfg331):
        for name in ("strategy1", "upper_bound"):
            for i in range(40):
                rng = frame_rng(80, i)
                real = draw_realization(cfg331, rng)
                out = run_frame(real, name, cfg331, rng=rng)
                again = replay_trace(real, cfg331, out.trace)
                assert again == out


class TestMonteCarlo:
    def test_single_frame_reproduces_run_frame(self, cfg331):
        counters = run_monte_carlo(cfg331, "strategy2", 1, 42)
        rng = frame_rng(42, 0)
        real = draw_realization(cfg331, rng)
        out = run_frame(real, "strategy2", cfg331, rng=rng)
        assert counters.frames == 1
        assert counters.total_rounds == out.rounds_used
        assert counters.decode_counts == [int(f) for f in out.decoded_flags]
        assert counters.common_outage_count == int(not out.all_decoded)

    def test_worker_count_does_not_change_counters(self, cfg331):
        a = run_monte_carlo(cfg331, "strategy1", 300, 7, workers=1)
        b = run_monte_carlo(cfg331, "strategy1", 300, 7, workers=3)
        assert a == b

    def test_counter_identity_common_outage_vs_decodes(self, cfg331):
        c = run_monte_carlo(cfg331, "reference1", 500, 11)
        # a frame is in common outage iff some source failed
        assert c.common_outage_count >= c.frames - min(c.decode_counts)
        assert all(c.frames - d <= c.common_outage_count
                   for d in c.decode_counts)

    def test_requires_frames(self, cfg331):
        with pytest.raises(ValueError):
            run_monte_carlo(cfg331, "strategy1", 0, 1)

    def test_merge(self):
        a = RawCounters(2, 3, [1, 2], 1)
        b = RawCounters(1, 0, [1, 1], 0)
        assert a.merge(b) == RawCounters(3, 3, [2, 3], 1)
