"""Block-based synthesis voices.

Every voice renders mono float blocks, keeps phase/filter/RNG state across
calls, and ramps parameter changes over at most PARAM_RAMP_S to avoid
zipper noise. All randomness comes from a seeded generator owned by the
voice, so identical seeds give bit-identical output.

The comp temperature voice renders both oscillator stacks as spectrally
flat harmonic combs (closed-form Dirichlet kernels). A flat source makes
the sweepable lowpass the sole brightness determinant, so the measured
spectral rolloff tracks the cutoff across its whole 100 Hz - 20 kHz range;
a 1/n-amplitude stack would pin the rolloff near the fundamental no matter
the cutoff. The 110 Hz stack is the differentiated 80%-duty pulse, which
keeps that wave's characteristic missing-every-5th-harmonic signature.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import signal

from sonifleet.audio.params import (
    CHIRP_DURATION_S,
    CHIRP_F0,
    CHIRP_F1,
    CLICK_JITTER_FRAC,
    COG_TEMP_AM_DEPTH,
    COMP_TEMP_HIGH_HZ,
    COMP_TEMP_LOW_HZ,
    COMP_TEMP_PWM_DUTY,
    GRAIN_DURATION_S,
    GRAIN_PHASER_RATE_HZ,
    GRAIN_RESONATOR_HZ,
    GRAIN_RESONATOR_Q,
    PARAM_RAMP_S,
    SAMPLE_RATE,
    SynthParams,
    VoiceKind,
)

TWO_PI = 2.0 * math.pi

CLICK_DURATION_S = 0.0015
CLICK_DECAY_S = 0.0004
CLICK_AMP = 0.9
CHIRP_AMP = 0.5
GRAIN_AMP = 0.75
GRAIN_EXCITE_DECAY_S = 0.030
TONE_AMP = 0.8
NOISE_AMP = 0.35
COMB_BAND_HZ = 23_000.0  # combs carry flat partials up to here
COMB_RMS = 0.06
COMB_PEAK_BUDGET = 0.7


class _Slew:
    """Per-block linear ramp toward the latest target, completing within
    PARAM_RAMP_S. The first observed value is adopted without a ramp."""

    def __init__(self, sample_rate: int):
        self.ramp_frames = max(1, int(round(PARAM_RAMP_S * sample_rate)))
        self.value: float | None = None

    def block(self, target: float, frames: int) -> np.ndarray:
        target = float(target)
        if self.value is None or self.value == target:
            self.value = target
            return np.full(frames, target)
        n = min(frames, self.ramp_frames)
        out = np.full(frames, target)
        out[:n] = np.linspace(self.value, target, n, endpoint=False)
        self.value = target
        return out


def _integrate_phase(phase0: float, freq: np.ndarray, sample_rate: int):
    """Pre-increment phases for each sample plus the carried phase."""
    dphi = TWO_PI * freq / sample_rate
    phases = phase0 + np.concatenate(([0.0], np.cumsum(dphi[:-1])))
    return phases, float((phase0 + dphi.sum()) % TWO_PI)


def _gain_of(params: SynthParams, index: int = 0) -> float:
    return params.gains[index] if len(params.gains) > index else 0.0


class Voice:
    """Base: stateful mono renderer for one VoiceKind."""

    kind: VoiceKind

    def __init__(self, sample_rate: int = SAMPLE_RATE, seed: int = 0):
        self.sample_rate = sample_rate
        self.rng = np.random.default_rng(seed)

    def render(self, params: SynthParams, frames: int) -> np.ndarray:
        raise NotImplementedError

    def _check(self, params: SynthParams, frames: int) -> None:
        if params.voice is not self.kind:
            raise ValueError(f"{self.kind} voice got params for {params.voice}")
        if frames <= 0:
            raise ValueError("frames must be > 0")


class ToneVoice(Voice):
    """Pure sine (comp radiation pitch carrier)."""

    kind = VoiceKind.TONE

    def __init__(self, sample_rate: int = SAMPLE_RATE, seed: int = 0):
        super().__init__(sample_rate, seed)
        self.phase = 0.0
        self._freq = _Slew(sample_rate)
        self._gain = _Slew(sample_rate)

    def render(self, params: SynthParams, frames: int) -> np.ndarray:
        self._check(params, frames)
        freq = self._freq.block(params.fundamental_hz, frames)
        gain = self._gain.block(_gain_of(params), frames)
        phases, self.phase = _integrate_phase(self.phase, freq, self.sample_rate)
        return TONE_AMP * gain * np.sin(phases)


class ToneAmFmVoice(Voice):
    """Fixed-pitch sine with amplitude LFO and unison-rate vibrato
    (cog temperature)."""

    kind = VoiceKind.TONE_AM_FM

    def __init__(self, sample_rate: int = SAMPLE_RATE, seed: int = 0):
        super().__init__(sample_rate, seed)
        self.carrier_phase = 0.0
        self.mod_phase = 0.0
        self.am_phase = 0.0
        self._am_rate = _Slew(sample_rate)
        self._fm_depth = _Slew(sample_rate)
        self._gain = _Slew(sample_rate)

    def render(self, params: SynthParams, frames: int) -> np.ndarray:
        self._check(params, frames)
        am_rate = self._am_rate.block(params.am_rate_hz, frames)
        fm_depth = self._fm_depth.block(params.fm_depth_hz, frames)
        gain = self._gain.block(_gain_of(params), frames)

        mod_freq = np.full(frames, params.fm_rate_hz)
        mod_phases, self.mod_phase = _integrate_phase(
            self.mod_phase, mod_freq, self.sample_rate
        )
        inst_freq = params.fundamental_hz + fm_depth * np.sin(mod_phases)
        phases, self.carrier_phase = _integrate_phase(
            self.carrier_phase, inst_freq, self.sample_rate
        )
        am_phases, self.am_phase = _integrate_phase(
            self.am_phase, am_rate, self.sample_rate
        )
        half = COG_TEMP_AM_DEPTH / 2.0
        envelope = (1.0 - half) + half * np.cos(am_phases)
        return TONE_AMP * gain * envelope * np.sin(phases)


class NoiseAmVoice(Voice):
    """White noise under a raised-cosine amplitude LFO (comp gas
    beating)."""

    kind = VoiceKind.NOISE_AM

    def __init__(self, sample_rate: int = SAMPLE_RATE, seed: int = 0):
        super().__init__(sample_rate, seed)
        self.am_phase = 0.0
        self._am_rate = _Slew(sample_rate)
        self._gain = _Slew(sample_rate)

    def render(self, params: SynthParams, frames: int) -> np.ndarray:
        self._check(params, frames)
        am_rate = self._am_rate.block(params.am_rate_hz, frames)
        gain = self._gain.block(_gain_of(params), frames)
        am_phases, self.am_phase = _integrate_phase(
            self.am_phase, am_rate, self.sample_rate
        )
        envelope = 0.5 * (1.0 - np.cos(am_phases))
        # soft tail clamp keeps rare outlier samples inside +-1 overall
        noise = np.clip(self.rng.standard_normal(frames), -2.5, 2.5) / 2.5
        return NOISE_AMP * gain * envelope * noise


class _OnsetVoice(Voice):
    """Shared machinery for event voices (clicks, grains): a schedule of
    onsets whose waveforms may overhang the block boundary."""

    def __init__(self, sample_rate: int = SAMPLE_RATE, seed: int = 0):
        super().__init__(sample_rate, seed)
        self._until_next = 0.0  # samples until next onset
        self._tail = np.zeros(0)

    def _interval_samples(self, params: SynthParams) -> float:
        raise NotImplementedError

    def _waveform(self, params: SynthParams) -> np.ndarray:
        raise NotImplementedError

    def _active(self, params: SynthParams) -> bool:
        raise NotImplementedError

    def render(self, params: SynthParams, frames: int) -> np.ndarray:
        self._check(params, frames)
        out = np.zeros(frames)
        n_tail = min(frames, len(self._tail))
        if n_tail:
            out[:n_tail] += self._tail[:n_tail]
            self._tail = self._tail[n_tail:]
        if not self._active(params):
            # hold the countdown; events resume when the voice is active
            return out
        while self._until_next < frames:
            idx = int(self._until_next)
            wave = self._waveform(params)
            n_fit = min(len(wave), frames - idx)
            out[idx : idx + n_fit] += wave[:n_fit]
            if n_fit < len(wave):
                overhang = wave[n_fit:]
                if len(self._tail) < len(overhang):
                    self._tail = np.concatenate(
                        (self._tail, np.zeros(len(overhang) - len(self._tail)))
                    )
                self._tail[: len(overhang)] += overhang
            self._until_next += self._interval_samples(params)
        self._until_next -= frames
        return out


class ClicksVoice(_OnsetVoice):
    """Geiger-style clicks: grid-anchored jittered onsets, optional
    attention chirps above the gate level (cog radiation).

    Click k sits at (k + j_k) periods with |j_k| <= CLICK_JITTER_FRAC, so
    intervals vary click to click but the jitters telescope: over any
    span the realized rate stays pinned to the commanded rate instead of
    drifting like a renewal process."""

    kind = VoiceKind.CLICKS

    def __init__(self, sample_rate: int = SAMPLE_RATE, seed: int = 0):
        super().__init__(sample_rate, seed)
        self._jitter_prev = 0.0

    def _active(self, params: SynthParams) -> bool:
        return params.click_rate_hz > 0 and _gain_of(params) > 0

    def _interval_samples(self, params: SynthParams) -> float:
        jitter_next = self.rng.uniform(-CLICK_JITTER_FRAC, CLICK_JITTER_FRAC)
        mean_s = 1.0 / params.click_rate_hz
        interval = (1.0 + jitter_next - self._jitter_prev) * mean_s
        self._jitter_prev = jitter_next
        return max(1.0, interval * self.sample_rate)

    def _waveform(self, params: SynthParams) -> np.ndarray:
        gain = _gain_of(params)
        add_chirp = (
            params.chirp_probability > 0
            and self.rng.random() < params.chirp_probability
        )
        n = int(CLICK_DURATION_S * self.sample_rate)
        t = np.arange(n) / self.sample_rate
        burst = self.rng.standard_normal(n) * np.exp(-t / CLICK_DECAY_S)
        peak = np.max(np.abs(burst))
        if peak > 0:
            burst = burst / peak
        click = gain * CLICK_AMP * burst
        if not add_chirp:
            return click
        # chirps are interspersed between clicks, not substituted for
        # them: offset half a period so the click train stays intact
        offset = int(0.5 * self.sample_rate / params.click_rate_hz)
        m = int(CHIRP_DURATION_S * self.sample_rate)
        tc = np.arange(m) / self.sample_rate
        sweep = CHIRP_F0 * tc + (CHIRP_F1 - CHIRP_F0) * tc**2 / (2 * CHIRP_DURATION_S)
        chirp = gain * CHIRP_AMP * np.hanning(m) * np.sin(TWO_PI * sweep)
        out = np.zeros(max(n, offset + m))
        out[:n] += click
        out[offset : offset + m] += chirp
        return out


class GrainsVoice(_OnsetVoice):
    """Metallic grains: noise bursts rung through an inharmonic resonator
    bank with a slow phaser-style shimmer (cog gas)."""

    kind = VoiceKind.GRAINS

    def __init__(self, sample_rate: int = SAMPLE_RATE, seed: int = 0):
        super().__init__(sample_rate, seed)
        self._resonators = [
            signal.iirpeak(f, GRAIN_RESONATOR_Q, fs=sample_rate)
            for f in GRAIN_RESONATOR_HZ
        ]
        self._grain_count = 0

    def _active(self, params: SynthParams) -> bool:
        return params.grain_ioi_s > 0 and _gain_of(params) > 0

    def _interval_samples(self, params: SynthParams) -> float:
        return max(1.0, params.grain_ioi_s * self.sample_rate)

    def _waveform(self, params: SynthParams) -> np.ndarray:
        n = int(GRAIN_DURATION_S * self.sample_rate)
        t = np.arange(n) / self.sample_rate
        excitation = self.rng.standard_normal(n) * np.exp(-t / GRAIN_EXCITE_DECAY_S)
        rung = sum(signal.lfilter(b, a, excitation) for b, a in self._resonators)
        peak = np.max(np.abs(rung))
        if peak > 0:
            rung = rung / peak
        # slow sweep shifts each grain's shimmer phase
        self._grain_count += 1
        phase = TWO_PI * GRAIN_PHASER_RATE_HZ * self._grain_count * params.grain_ioi_s
        shimmer = 1.0 + 0.4 * np.sin(TWO_PI * GRAIN_PHASER_RATE_HZ * t + phase)
        return _gain_of(params) * GRAIN_AMP * rung * shimmer / 1.4


def _dirichlet_cos_sum(theta: np.ndarray, k: int) -> np.ndarray:
    """sum_{j=1..k} cos(j*theta), closed form, safe at theta = 0 mod 2pi."""
    half = theta / 2.0
    denom = np.sin(half)
    safe = np.abs(denom) > 1e-9
    out = np.full_like(theta, float(k))
    num = np.sin((k + 0.5) * theta[safe])
    out[safe] = num / (2.0 * denom[safe]) - 0.5
    return out


class CombBrightnessVoice(Voice):
    """Two flat harmonic combs (55 Hz, and 110 Hz as a differentiated
    80%-duty pulse) crossfaded by the gain pair, swept by an 8th-order
    Butterworth lowpass; overall level is crest-limited so the impulse-like
    full-band comb never clips (comp temperature)."""

    kind = VoiceKind.COMB_BRIGHTNESS

    def __init__(self, sample_rate: int = SAMPLE_RATE, seed: int = 0):
        super().__init__(sample_rate, seed)
        self.phase_low = 0.0
        self.phase_high = 0.0
        self._gain_low = _Slew(sample_rate)
        self._gain_high = _Slew(sample_rate)
        margin = min(COMB_BAND_HZ, sample_rate / 2.0 * 0.96)
        self.k_low = int(margin / COMP_TEMP_LOW_HZ)
        self.k_high = int(margin / COMP_TEMP_HIGH_HZ)
        self._rms_low = math.sqrt(self.k_low / 2.0)
        duty_angle = TWO_PI * COMP_TEMP_PWM_DUTY
        self._rms_high = math.sqrt(
            sum(
                2.0 * math.sin(0.5 * duty_angle * j) ** 2
                for j in range(1, self.k_high + 1)
            )
            / 2.0
        )
        self._duty_angle = duty_angle
        self._sos = None
        self._zi = None
        self._cutoff = None

    def _ensure_filter(self, cutoff: float) -> None:
        cutoff = float(np.clip(cutoff, 10.0, self.sample_rate / 2.0 * 0.98))
        if self._cutoff is not None and abs(cutoff - self._cutoff) < 1e-9:
            return
        self._sos = signal.butter(8, cutoff, fs=self.sample_rate, output="sos")
        if self._zi is None:
            self._zi = signal.sosfilt_zi(self._sos) * 0.0
        self._cutoff = cutoff

    def render(self, params: SynthParams, frames: int) -> np.ndarray:
        self._check(params, frames)
        gain_low = self._gain_low.block(_gain_of(params, 0), frames)
        gain_high = self._gain_high.block(_gain_of(params, 1), frames)

        freq_low = np.full(frames, COMP_TEMP_LOW_HZ)
        freq_high = np.full(frames, COMP_TEMP_HIGH_HZ)
        theta_low, self.phase_low = _integrate_phase(
            self.phase_low, freq_low, self.sample_rate
        )
        theta_high, self.phase_high = _integrate_phase(
            self.phase_high, freq_high, self.sample_rate
        )
        comb_low = _dirichlet_cos_sum(theta_low, self.k_low) / self._rms_low
        edge = (
            _dirichlet_cos_sum(theta_high, self.k_high)
            - _dirichlet_cos_sum(theta_high - self._duty_angle, self.k_high)
        ) / self._rms_high
        premix = gain_low * comb_low + gain_high * edge

        self._ensure_filter(params.lowpass_hz)
        filtered, self._zi = signal.sosfilt(self._sos, premix, zi=self._zi)

        cutoff = self._cutoff
        passed_fraction = np.clip(cutoff / COMB_BAND_HZ, COMP_TEMP_LOW_HZ / COMB_BAND_HZ, 1.0)
        makeup = 1.0 / math.sqrt(passed_fraction)
        crest = math.sqrt(2.0 * np.clip(cutoff / COMP_TEMP_LOW_HZ, 1.0, self.k_low))
        amplitude = min(COMB_RMS, COMB_PEAK_BUDGET / crest)
        return amplitude * makeup * filtered


_VOICE_CLASSES = {
    VoiceKind.TONE: ToneVoice,
    VoiceKind.TONE_AM_FM: ToneAmFmVoice,
    VoiceKind.NOISE_AM: NoiseAmVoice,
    VoiceKind.CLICKS: ClicksVoice,
    VoiceKind.GRAINS: GrainsVoice,
    VoiceKind.COMB_BRIGHTNESS: CombBrightnessVoice,
}


def make_voice(kind: VoiceKind, sample_rate: int = SAMPLE_RATE, seed: int = 0) -> Voice:
    return _VOICE_CLASSES[kind](sample_rate, seed)
