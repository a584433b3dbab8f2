import io
import math

import numpy as np
import pytest

from switchlab.inequality import DeterministicStrategy, vbc_value
from switchlab.kraus import NoiseParams, behavior
from switchlab.montecarlo import (
    CHSH,
    SIGNAL,
    CountsTable,
    estimate,
    report,
    run_list,
    sample_counts,
    write_reps_csv,
)
from switchlab.sweep import eta_of_purity


@pytest.fixture(scope="module")
def ideal_table():
    return behavior(NoiseParams(1.0, 1.0))


@pytest.fixture(scope="module")
def operating_table():
    return behavior(NoiseParams(eta_of_purity(0.97197), 1.0))


class TestRunList:
    def test_twelve_runs(self):
        runs = run_list()
        assert len(runs) == 12

    def test_signal_block_fixes_bob_setting(self):
        signal = [r for r in run_list() if r.purpose == SIGNAL]
        assert len(signal) == 8
        assert all(r.y == 0 for r in signal)
        assert {(r.x1, r.x2, r.z) for r in signal} == {
            (x1, x2, z) for x1 in (0, 1) for x2 in (0, 1) for z in (0, 1)
        }

    def test_chsh_block_fixes_agent_settings(self):
        chsh = [r for r in run_list() if r.purpose == CHSH]
        assert len(chsh) == 4
        assert all(r.x1 == 0 and r.x2 == 0 for r in chsh)
        assert {(r.y, r.z) for r in chsh} == {(y, z) for y in (0, 1) for z in (0, 1)}

    def test_overlapping_settings_measured_separately(self):
        # (x1,x2,y) = (0,0,0) appears in both blocks, once per z and purpose
        runs = [r for r in run_list() if (r.x1, r.x2, r.y) == (0, 0, 0)]
        assert len(runs) == 4
        assert {r.purpose for r in runs} == {SIGNAL, CHSH}


class TestSampling:
    def test_deterministic_for_fixed_seed(self, ideal_table):
        a = sample_counts(ideal_table, 500, seed=9)
        b = sample_counts(ideal_table, 500, seed=9)
        assert np.array_equal(a.counts, b.counts)

    def test_different_seeds_differ(self, ideal_table):
        a = sample_counts(ideal_table, 500, seed=9)
        b = sample_counts(ideal_table, 500, seed=10)
        assert not np.array_equal(a.counts, b.counts)

    def test_counts_sum_to_shots(self, ideal_table):
        counts = sample_counts(ideal_table, 321, seed=0)
        assert counts.counts.shape == (12, 16)
        assert np.all(counts.counts.sum(axis=1) == 321)

    def test_impossible_outcomes_never_sampled(self, ideal_table):
        # at x1 = x2 = 0 the agents always read 0: outcomes with a1 or a2
        # nonzero have probability 0
        counts = sample_counts(ideal_table, 5000, seed=3)
        for r, run in enumerate(counts.runs):
            if run.x1 == 0 and run.x2 == 0:
                assert counts.counts[r, 4:].sum() == 0

    def test_negative_shots_rejected(self, ideal_table):
        with pytest.raises(ValueError):
            sample_counts(ideal_table, -1, seed=0)


class TestEstimate:
    def test_deterministic_strategy_recovered_exactly(self):
        strategy = DeterministicStrategy(
            order=1, bob=(0, 1), first_alice=(0, 1),
            second_alice=(0, 0, 1, 1), charlie=(0, 1, 1, 0, 0, 0, 1, 1),
        )
        counts = sample_counts(strategy.table(), 64, seed=5)
        value = estimate(counts)
        exact = strategy.value()
        assert value.p1 == pytest.approx(float(exact[0]), abs=1e-12)
        assert value.p2 == pytest.approx(float(exact[1]), abs=1e-12)
        assert value.p3 == pytest.approx(float(exact[2]), abs=1e-12)

    def test_depends_only_on_counts(self, ideal_table):
        # counts are the sufficient statistic: rebuilding the table from the
        # same numbers gives identical estimates (shot order never enters)
        counts = sample_counts(ideal_table, 200, seed=8)
        rebuilt = CountsTable(counts.runs, counts.counts.copy())
        assert estimate(rebuilt) == estimate(counts)

    def test_zero_shot_run_contributes_nothing(self, ideal_table, caplog):
        counts = sample_counts(ideal_table, 0, seed=0)
        with caplog.at_level("WARNING"):
            value = estimate(counts)
        assert value.total == 0.0
        assert any("zero shots" in message for message in caplog.messages)

    def test_unbiased_near_truth(self, operating_table):
        truth = vbc_value(operating_table)
        counts = sample_counts(operating_table, 7000, seed=12)
        value = estimate(counts)
        # a single experiment: each term within 5 binomial sigmas
        assert abs(value.p3 - truth.p3) < 5 * 0.5 / math.sqrt(4 * 7000)
        assert abs(value.total - truth.total) < 5 * 0.01


class TestReport:
    def test_reproducible(self, operating_table):
        a = report(operating_table, 400, reps=20, seed=2)
        b = report(operating_table, 400, reps=20, seed=2)
        assert a.mean_total == b.mean_total
        assert a.sigma == b.sigma
        assert np.array_equal(a.per_rep, b.per_rep)

    def test_threading_does_not_change_values(self, operating_table):
        serial = report(operating_table, 300, reps=16, seed=4, threads=1)
        threaded = report(operating_table, 300, reps=16, seed=4, threads=8)
        assert np.array_equal(serial.per_rep, threaded.per_rep)

    def test_mean_tracks_truth_and_z_is_large(self, operating_table):
        truth = vbc_value(operating_table)
        rep = report(operating_table, 7000, reps=100, seed=7)
        assert abs(rep.mean_total - truth.total) < 3 * rep.sigma
        assert rep.z_score > 10

    def test_sigma_shrinks_with_shots(self, operating_table):
        small = report(operating_table, 7000, reps=100, seed=11)
        large = report(operating_table, 28000, reps=100, seed=11)
        ratio = large.sigma / small.sigma
        assert 1 / 3 <= ratio <= 2 / 3

    def test_estimates_concentrate_with_shots(self, operating_table):
        # spread of the estimate must shrink from n=100 to n=1_000_000
        # for nearly every seed
        truth = vbc_value(operating_table).total
        closer = 0
        for seed in range(100):
            coarse = estimate(sample_counts(operating_table, 100, seed=[seed, 0]))
            fine = estimate(sample_counts(operating_table, 1_000_000, seed=[seed, 1]))
            if abs(fine.total - truth) < abs(coarse.total - truth):
                closer += 1
        assert closer >= 95

    def test_too_few_reps_rejected(self, operating_table):
        with pytest.raises(ValueError):
            report(operating_table, 100, reps=1, seed=0)


class TestRepsCsv:
    def test_format(self, operating_table):
        rep = report(operating_table, 200, reps=3, seed=1)
        buffer = io.StringIO()
        write_reps_csv(rep.per_rep, buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "rep,p1,p2,p3,total"
        assert len(lines) == 4
        fields = lines[1].split(",")
        assert fields[0] == "0"
        assert float(fields[4]) == pytest.approx(rep.per_rep[0, 3], abs=1e-8)
