"""Decoder tests: synthetic-signal oracles for each feature estimator,
the full render/decode round trip, monotonicity, noise robustness, and
the file/CSV interface."""

import csv

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import signal

from sonifleet.audio.params import (
    SAMPLE_RATE,
    SoundSet,
    primary_parameter,
)
from sonifleet.audio.render import (
    constant_level,
    render_trajectory,
    write_wav,
)
from sonifleet.decoding import (
    RESULT_FIELDS,
    decode_file,
    decode_level,
    decode_trace,
    estimate_event_rate,
    estimate_mod_rate,
    estimate_pitch,
    estimate_rolloff,
    invert_level,
    write_results_csv,
)
from sonifleet.hazards import HazardType

SR = SAMPLE_RATE
PAIRS = [(ss, hz) for ss in SoundSet for hz in HazardType]

# decode tolerance per sound set: event/beat statistics are noisier than
# pitch and spectral balance
TOLERANCE = {SoundSet.COG: 0.10, SoundSet.COMP: 0.05}

# render length per pair: long enough for stable statistics at level 0
DURATION_S = {
    (SoundSet.COG, HazardType.RADIATION): 10.0,
    (SoundSet.COG, HazardType.FLAMMABLE_GAS): 8.0,
    (SoundSet.COG, HazardType.TEMPERATURE): 8.0,
    (SoundSet.COMP, HazardType.RADIATION): 2.0,
    (SoundSet.COMP, HazardType.FLAMMABLE_GAS): 8.0,
    (SoundSet.COMP, HazardType.TEMPERATURE): 4.0,
}

LEVELS = np.linspace(0.0, 1.0, 9)


def _burst_train(onsets_s: list[float], duration_s: float, seed: int = 0) -> np.ndarray:
    """Short decaying noise bursts at given onset times."""
    rng = np.random.default_rng(seed)
    x = np.zeros(int(duration_s * SR))
    n = int(0.0015 * SR)
    t = np.arange(n) / SR
    for onset in onsets_s:
        i = int(onset * SR)
        x[i : i + n] += rng.standard_normal(n) * np.exp(-t / 0.0004)
    return x


class TestFeatureEstimators:
    def test_pitch_pure_sine_off_bin(self):
        t = np.arange(2 * SR) / SR
        x = 0.5 * np.sin(2 * np.pi * 347.3 * t)
        est = estimate_pitch(x, SR)
        assert abs(est.value - 347.3) < 0.5
        assert est.confidence > 0.8

    def test_pitch_silence_has_zero_confidence(self):
        est = estimate_pitch(np.zeros(SR), SR)
        assert est.confidence == 0.0

    def test_event_rate_regular_train(self):
        onsets = [i / 7.0 for i in range(28)]
        x = _burst_train(onsets, 4.05)
        est = estimate_event_rate(x, SR, min_separation_s=0.003)
        assert abs(est.value - 7.0) < 0.1

    def test_event_rate_uses_span_not_duration(self):
        # events confined to the first half must not halve the estimate
        onsets = [0.1 + 0.2 * i for i in range(10)]
        x = _burst_train(onsets, 4.0)
        est = estimate_event_rate(x, SR, min_separation_s=0.003)
        assert abs(est.value - 5.0) < 0.25

    def test_event_rate_empty_signal(self):
        est = estimate_event_rate(np.zeros(SR), SR, min_separation_s=0.003)
        assert est.value == 0.0
        assert est.confidence == 0.0

    def test_mod_rate_am_noise(self):
        rng = np.random.default_rng(5)
        t = np.arange(8 * SR) / SR
        x = rng.standard_normal(len(t)) * 0.5 * (1 - np.cos(2 * np.pi * 3.3 * t))
        est = estimate_mod_rate(x, SR)
        assert abs(est.value - 3.3) < 0.05
        assert est.confidence > 0.5

    def test_mod_rate_silence(self):
        est = estimate_mod_rate(np.zeros(SR), SR)
        assert est.value == 0.0
        assert est.confidence == 0.0

    def test_rolloff_tracks_lowpass_cutoff(self):
        rng = np.random.default_rng(9)
        noise = rng.standard_normal(4 * SR)
        values = []
        for cutoff in (1000.0, 4000.0):
            sos = signal.butter(8, cutoff, fs=SR, output="sos")
            est = estimate_rolloff(signal.sosfilt(sos, noise), SR)
            assert 0.6 * cutoff < est.value < 1.6 * cutoff
            values.append(est.value)
        assert values[0] < values[1]


class TestInversion:
    @settings(max_examples=200, deadline=None)
    @given(
        ss=st.sampled_from(list(SoundSet)),
        hz=st.sampled_from(list(HazardType)),
        level=st.floats(0.0, 1.0),
    )
    def test_inverse_of_forward_map_is_identity(self, ss, hz, level):
        feature = primary_parameter(ss, hz, level)
        assert abs(invert_level(ss, hz, feature) - level) < 1e-9

    def test_out_of_range_features_clip(self):
        assert invert_level(SoundSet.COG, HazardType.RADIATION, 60.0) == 1.0
        assert invert_level(SoundSet.COMP, HazardType.RADIATION, 100.0) == 0.0
        assert invert_level(SoundSet.COMP, HazardType.TEMPERATURE, 0.0) == 0.0


@pytest.fixture(scope="module")
def decoded_matrix():
    """Decoded level for every (set, hazard, level) render, seeded."""
    out = {}
    for (ss, hz), dur in DURATION_S.items():
        estimates = []
        for i, level in enumerate(LEVELS):
            x = render_trajectory(ss, hz, constant_level(float(level)), dur, seed=40 + i)
            est, _ = decode_level(x, SR, ss, hz)
            estimates.append(est)
        out[(ss, hz)] = estimates
    return out


class TestRoundTrip:
    @pytest.mark.parametrize("ss,hz", PAIRS)
    @pytest.mark.parametrize("idx", range(len(LEVELS)))
    def test_render_decode_round_trip(self, decoded_matrix, ss, hz, idx):
        err = decoded_matrix[(ss, hz)][idx] - LEVELS[idx]
        assert abs(err) <= TOLERANCE[ss]

    @pytest.mark.parametrize("ss,hz", PAIRS)
    def test_decoded_levels_increase(self, decoded_matrix, ss, hz):
        # adjacent grid points may tie within estimator noise; the sweep
        # as a whole must rise
        estimates = np.asarray(decoded_matrix[(ss, hz)])
        assert np.all(np.diff(estimates) > -0.02)
        assert estimates[-1] - estimates[0] > 0.8


class TestNoiseRobustness:
    @pytest.mark.parametrize("ss,hz", PAIRS)
    def test_decode_survives_20db_noise(self, ss, hz):
        level = 0.6 if (ss, hz) == (SoundSet.COMP, HazardType.RADIATION) else 0.5
        dur = DURATION_S[(ss, hz)]
        x = render_trajectory(ss, hz, constant_level(level), dur, seed=42)
        rng = np.random.default_rng(7)
        noise_power = np.mean(x**2) / 10.0**2.0  # 20 dB down
        noisy = x + rng.standard_normal(len(x)) * np.sqrt(noise_power)
        est, _ = decode_level(noisy, SR, ss, hz)
        assert abs(est - level) <= TOLERANCE[ss]


class TestTraceAndFiles:
    def test_trace_follows_level_step(self):
        step = lambda t: 0.2 if t < 4.0 else 0.8
        x = render_trajectory(SoundSet.COMP, HazardType.RADIATION, step, 8.0, seed=3)
        times, levels = decode_trace(x, SR, SoundSet.COMP, HazardType.RADIATION)
        early = levels[times < 3.0]
        late = levels[times > 5.5]
        assert np.all(np.abs(early - 0.2) < 0.05)
        assert np.all(np.abs(late - 0.8) < 0.05)

    def test_trace_rejects_short_signal(self):
        with pytest.raises(ValueError):
            decode_trace(np.zeros(SR // 2), SR, SoundSet.COMP, HazardType.RADIATION)

    def test_decode_file_and_csv(self, tmp_path):
        x = render_trajectory(
            SoundSet.COMP, HazardType.RADIATION, constant_level(0.5), 2.0, seed=8
        )
        wav = tmp_path / "probe.wav"
        write_wav(wav, x)
        row = decode_file(wav, SoundSet.COMP, HazardType.RADIATION)
        assert abs(row["level"] - 0.5) < 0.05
        out = tmp_path / "results.csv"
        write_results_csv(out, [row])
        with open(out) as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 1
        assert tuple(rows[0].keys()) == RESULT_FIELDS
        assert abs(float(rows[0]["level"]) - 0.5) < 0.05
