"""Study harness tests: trial generation, the hidden-Gaussian stimulus,
the decoder-as-participant loop, and the scoring pipeline against a
hand-computed 12-participant fixture."""

import numpy as np
import pytest

from sonifleet.audio.params import SAMPLE_RATE, SoundSet
from sonifleet.decoding import decode_trace
from sonifleet.hazards import HazardType
from sonifleet.study import (
    SOUND_ORDER,
    TrialSpec,
    gen_trials,
    machine_response,
    peak_times,
    run_trial,
    score,
    sweep_position,
    trial_level,
)

SR = SAMPLE_RATE


def _trial(mu, ss=SoundSet.COMP, hz=HazardType.RADIATION, seed=99, sigma=0.35):
    return TrialSpec("t", seed, mu, sigma, 16.0, ss, hz)


class TestTrialGeneration:
    def test_same_seed_same_trials(self):
        assert gen_trials(7) == gen_trials(7)

    def test_three_trials_per_sound_gives_eighteen(self):
        trials = gen_trials(3, n_per_sound=3)
        assert len(trials) == 18
        for ss, hz in SOUND_ORDER:
            block = [t for t in trials if (t.sound_set, t.hazard) == (ss, hz)]
            assert len(block) == 3

    def test_centres_within_range(self):
        assert all(-1.0 <= t.mu <= 1.0 for t in gen_trials(11, n_per_sound=5))

    def test_block_order_depends_on_seed(self):
        order_a = [(t.sound_set, t.hazard) for t in gen_trials(1)]
        order_b = [(t.sound_set, t.hazard) for t in gen_trials(2)]
        assert order_a != order_b

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            gen_trials(1, n_per_sound=0)

    def test_trial_validation(self):
        with pytest.raises(ValueError):
            _trial(1.5)
        with pytest.raises(ValueError):
            _trial(0.0, sigma=0.35)._replace if False else TrialSpec(
                "t", 1, 0.0, -0.1, 16.0, SoundSet.COG, HazardType.RADIATION
            )


class TestStimulus:
    def test_sweep_triangle_endpoints(self):
        assert sweep_position(0.0, 16.0) == -1.0
        assert sweep_position(8.0, 16.0) == 1.0
        assert sweep_position(16.0, 16.0) == -1.0
        assert sweep_position(4.0, 16.0) == 0.0

    def test_level_peaks_exactly_at_mu(self):
        trial = _trial(0.42)
        assert trial_level(trial, 0.42) == 1.0
        assert trial_level(trial, 0.1) < 1.0

    def test_level_symmetric_about_mu(self):
        trial = _trial(0.2)
        for d in (0.1, 0.3, 0.7):
            assert trial_level(trial, 0.2 - d) == pytest.approx(
                trial_level(trial, 0.2 + d)
            )

    def test_centre_zero_peak_at_sweep_midpoints(self):
        trial = _trial(0.0)
        first, second = peak_times(trial)
        assert first == pytest.approx(4.0)
        assert second == pytest.approx(12.0)

    def test_rendered_peak_at_midpoint_for_centre_zero(self):
        # mu = 0, symmetric sweep: decoded level trace peaks at T/4 and
        # 3T/4, symmetric about the midpoint
        trial = _trial(0.0)
        audio, _ = run_trial(trial)
        times, levels = decode_trace(
            audio, SR, trial.sound_set, trial.hazard
        )
        top = times[levels > 0.9 * levels.max()]
        assert any(abs(t - 4.0) < 1.0 for t in top)
        assert any(abs(t - 12.0) < 1.0 for t in top)

    def test_shifted_centre_shifts_trace_in_time(self):
        # same sigma and seed, different mu: outbound-leg level traces
        # are the same bump displaced by delta-mu over the sweep rate
        a, _ = run_trial(_trial(-0.3))
        b, _ = run_trial(_trial(0.4))
        half = 8 * SR
        _, la = decode_trace(a[:half], SR, SoundSet.COMP, HazardType.RADIATION)
        _, lb = decode_trace(b[:half], SR, SoundSet.COMP, HazardType.RADIATION)
        la = la - la.mean()
        lb = lb - lb.mean()
        corr = np.correlate(la, lb, mode="full")
        lag_hops = abs(int(np.argmax(corr)) - (len(la) - 1))
        # sweep rate 0.25 position/s, hop 0.25 s: expect 0.7 / 0.0625 hops
        assert abs(lag_hops * 0.25 * 0.25 - 0.7) <= 0.15
        aligned = np.corrcoef(la[: len(la) - lag_hops], lb[lag_hops:])[0, 1]
        assert aligned > 0.8


class TestMachineParticipant:
    @pytest.mark.parametrize("mu", [-0.9, -0.35, 0.0, 0.37, 0.8])
    def test_comp_radiation_within_tenth(self, mu):
        trial = _trial(mu)
        audio, key = run_trial(trial)
        assert abs(machine_response(trial, audio) - key) <= 0.1

    @pytest.mark.parametrize("ss,hz", SOUND_ORDER)
    def test_all_sounds_reasonable(self, ss, hz):
        trial = _trial(0.37, ss=ss, hz=hz, seed=903)
        audio, key = run_trial(trial)
        assert abs(machine_response(trial, audio) - key) <= 0.15

    def test_run_trial_deterministic(self):
        trial = _trial(0.1)
        a, _ = run_trial(trial)
        b, _ = run_trial(trial)
        assert np.array_equal(a, b)


def _fixture_cohort():
    """12 participants, 6 sounds, 3 trials each; participant 7 is an
    extreme outlier on the third sound only."""
    responses, keys, grouping = [], [], []
    base_error = np.array(
        [[0.05 + 0.02 * ((p + j) % 5) for j in range(6)] for p in range(12)]
    )
    base_error[7, 2] = 4.0
    for p in range(12):
        for j, (ss, hz) in enumerate(SOUND_ORDER):
            e = base_error[p, j]
            # three trials whose absolute errors average exactly to e
            spreads = (0.0, 0.0, 0.0) if e >= 1.0 else (-0.01, 0.0, 0.01)
            for d in spreads:
                keys.append(0.3)
                responses.append(0.3 + e + d)
                grouping.append((f"p{p:02d}", ss, hz))
    return responses, keys, grouping, base_error


class TestScoring:
    def test_perfect_responses_score_zero(self):
        keys = [0.2, -0.4, 0.9]
        grouping = [("p00", SoundSet.COG, HazardType.RADIATION)] * 3
        rows, removed = score(list(keys), keys, grouping)
        assert removed == []
        assert rows[0].mean_abs_error == 0.0
        assert rows[0].mean_sqrt_error == 0.0

    def test_single_trial_error(self):
        rows, _ = score(
            [0.5], [0.3], [("p00", SoundSet.COG, HazardType.RADIATION)]
        )
        assert rows[0].mean_abs_error == pytest.approx(0.2)
        assert rows[0].mean_sqrt_error == pytest.approx(np.sqrt(0.2))

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            score([0.1], [0.1, 0.2], [("p00", SoundSet.COG, HazardType.RADIATION)])

    def test_fixture_cohort_hand_computed(self):
        responses, keys, grouping, base_error = _fixture_cohort()
        rows, removed = score(responses, keys, grouping)
        # hand recomputation, independent of the module under test:
        # sound-wise 3-sigma flags on per-participant means
        flagged = set()
        for j in range(6):
            v = base_error[:, j]
            dev = np.abs(v - v.mean())
            flagged |= {p for p in range(12) if dev[p] > 3 * v.std(ddof=1)}
        assert flagged == {7}
        assert removed == ["p07"]
        kept = base_error[[p for p in range(12) if p not in flagged], :]
        assert len(rows) == 6
        for j, row in enumerate(rows):
            assert (row.sound_set, row.hazard) == SOUND_ORDER[j]
            assert row.n_participants == 11
            expected_sqrt = np.sqrt(kept[:, j])
            assert row.mean_abs_error == pytest.approx(kept[:, j].mean(), abs=1e-12)
            assert row.mean_sqrt_error == pytest.approx(
                expected_sqrt.mean(), abs=1e-12
            )
            assert row.sd_sqrt_error == pytest.approx(
                expected_sqrt.std(ddof=1), abs=1e-12
            )

    def test_permutation_invariance_over_participants(self):
        responses, keys, grouping, _ = _fixture_cohort()
        rows_a, removed_a = score(responses, keys, grouping)
        order = np.random.default_rng(5).permutation(len(responses))
        rows_b, removed_b = score(
            [responses[i] for i in order],
            [keys[i] for i in order],
            [grouping[i] for i in order],
        )
        assert removed_a == removed_b
        assert rows_a == rows_b
