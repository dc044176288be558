"""Signal-side decoding: estimate the mapped feature of a rendered
(sound set, hazard) pair and invert it to a hazard-level estimate.

One estimator per carrier family:

  event rate   envelope peak picking, span-normalised (N - 1) / span;
               peak distance suppresses double maxima inside one event
  pitch        windowed autocorrelation with parabolic interpolation
  mod rate     envelope spectrum peak with parabolic interpolation
  rolloff      frequency below which a fixed fraction of power sits

Peak picking (scipy find_peaks on a smoothed amplitude envelope) rather
than threshold crossing: a click riding on a longer event's tail is
still a local maximum. Click counting first removes everything below
6 kHz, which excises the 2-4 kHz attention chirps entirely; the chirps
are interspersed extras, not part of the rate code. Rates use
(N - 1) / (t_last - t_first); dividing N by the whole duration would
bias low whenever the stream starts late or ends early relative to the
analysis window.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import signal

from sonifleet.audio.params import (
    SoundSet,
    level_from_click_rate,
    level_from_cog_temp_am_rate,
    level_from_comp_gas_am_rate,
    level_from_comp_rad_pitch,
    level_from_comp_temp_cutoff,
    level_from_grain_rate,
)
from sonifleet.audio.render import read_wav
from sonifleet.hazards import HazardType

# envelope and event detection
ENVELOPE_SMOOTH_S = 0.001
CLICK_MIN_SEPARATION_S = 0.003  # > click width, << typical inter-click gap
CLICK_HIGHPASS_HZ = 6000.0  # clicks are broadband; chirps live at 2-4 kHz
GRAIN_MIN_SEPARATION_S = 0.105  # just under the minimum grain interval
GRAIN_SMOOTH_S = 0.002
PEAK_PROMINENCE_FRAC = 0.1

# pitch tracking
PITCH_WINDOW = 4096
PITCH_HOP = 1024
PITCH_BAND_HZ = (150.0, 1200.0)

# envelope modulation
MOD_BAND_HZ = (0.3, 12.0)
MOD_ENV_SMOOTH_S = 0.010
MOD_DECIMATED_RATE_HZ = 200.0

ROLLOFF_FRACTION = 0.95


@dataclass(frozen=True)
class FeatureEstimate:
    """A measured audio feature plus a [0, 1] reliability heuristic."""

    name: str
    value: float
    confidence: float


def amplitude_envelope(
    x: np.ndarray, sample_rate: int, smooth_s: float = ENVELOPE_SMOOTH_S
) -> np.ndarray:
    """Rectified signal under a moving-average window."""
    n = max(1, int(smooth_s * sample_rate))
    return np.convolve(np.abs(x), np.ones(n) / n, mode="same")


def detect_onsets(
    x: np.ndarray,
    sample_rate: int,
    min_separation_s: float,
    smooth_s: float = ENVELOPE_SMOOTH_S,
) -> np.ndarray:
    """Sample indices of event onsets (envelope peaks)."""
    env = amplitude_envelope(x, sample_rate, smooth_s)
    if env.max() <= 0:
        return np.zeros(0, dtype=int)
    prominence = max(
        PEAK_PROMINENCE_FRAC * float(np.percentile(env, 99)),
        0.02 * float(env.max()),
    )
    peaks, _ = signal.find_peaks(
        env,
        distance=max(1, int(min_separation_s * sample_rate)),
        prominence=prominence,
    )
    return peaks


def estimate_event_rate(
    x: np.ndarray,
    sample_rate: int,
    min_separation_s: float,
    smooth_s: float = ENVELOPE_SMOOTH_S,
) -> FeatureEstimate:
    """Events per second from detected onsets."""
    peaks = detect_onsets(x, sample_rate, min_separation_s, smooth_s)
    n = len(peaks)
    if n >= 2:
        span_s = (peaks[-1] - peaks[0]) / sample_rate
        rate = (n - 1) / span_s
    else:
        rate = n * sample_rate / len(x)
    return FeatureEstimate("event_rate_hz", float(rate), n / (n + 4.0))


def _parabolic_offset(ym: float, y0: float, yp: float) -> float:
    denom = ym - 2.0 * y0 + yp
    if denom == 0:
        return 0.0
    return float(np.clip(0.5 * (ym - yp) / denom, -0.5, 0.5))


def estimate_pitch(
    x: np.ndarray,
    sample_rate: int,
    band_hz: tuple[float, float] = PITCH_BAND_HZ,
    window: int = PITCH_WINDOW,
    hop: int = PITCH_HOP,
) -> FeatureEstimate:
    """Median over windowed autocorrelation pitch estimates."""
    lag_lo = max(2, int(sample_rate / band_hz[1]))
    lag_hi = int(sample_rate / band_hz[0])
    taper = np.hanning(window)
    pitches: list[float] = []
    strengths: list[float] = []
    for start in range(0, len(x) - window + 1, hop):
        seg = x[start : start + window] * taper
        ac = signal.correlate(seg, seg, mode="full")[window - 1 :]
        if ac[0] <= 0:
            continue
        k = int(np.argmax(ac[lag_lo:lag_hi])) + lag_lo
        delta = _parabolic_offset(ac[k - 1], ac[k], ac[k + 1])
        pitches.append(sample_rate / (k + delta))
        strengths.append(float(np.clip(ac[k] / ac[0], 0.0, 1.0)))
    if not pitches:
        return FeatureEstimate("pitch_hz", 0.0, 0.0)
    return FeatureEstimate(
        "pitch_hz", float(np.median(pitches)), float(np.median(strengths))
    )


def estimate_mod_rate(
    x: np.ndarray,
    sample_rate: int,
    band_hz: tuple[float, float] = MOD_BAND_HZ,
) -> FeatureEstimate:
    """Dominant envelope modulation rate (amplitude beating)."""
    env = amplitude_envelope(x, sample_rate, MOD_ENV_SMOOTH_S)
    step = max(1, int(sample_rate / MOD_DECIMATED_RATE_HZ))
    env = env[::step]
    rate = sample_rate / step
    env = env - env.mean()
    if not np.any(env):
        return FeatureEstimate("mod_rate_hz", 0.0, 0.0)
    nfft = 1 << int(math.ceil(math.log2(len(env) * 8)))
    spectrum = np.abs(np.fft.rfft(env * np.hanning(len(env)), nfft))
    freqs = np.fft.rfftfreq(nfft, 1.0 / rate)
    band = np.flatnonzero((freqs >= band_hz[0]) & (freqs <= band_hz[1]))
    if len(band) == 0:
        return FeatureEstimate("mod_rate_hz", 0.0, 0.0)
    k = int(band[np.argmax(spectrum[band])])
    peak = float(spectrum[k])
    if peak <= 0:
        return FeatureEstimate("mod_rate_hz", 0.0, 0.0)
    delta = _parabolic_offset(spectrum[k - 1], spectrum[k], spectrum[k + 1])
    value = (k + delta) * rate / nfft
    floor = float(np.median(spectrum[band]))
    confidence = float(np.clip(1.0 - floor / peak, 0.0, 1.0))
    return FeatureEstimate("mod_rate_hz", float(value), confidence)


def estimate_rolloff(
    x: np.ndarray, sample_rate: int, fraction: float = ROLLOFF_FRACTION
) -> FeatureEstimate:
    """Frequency below which `fraction` of total power lies."""
    spectrum = np.abs(np.fft.rfft(x * np.hanning(len(x)))) ** 2
    total = float(spectrum.sum())
    if total <= 0:
        return FeatureEstimate("rolloff_hz", 0.0, 0.0)
    cumulative = np.cumsum(spectrum)
    k = int(np.searchsorted(cumulative, fraction * total))
    return FeatureEstimate("rolloff_hz", k * sample_rate / len(x), 1.0)


# --- feature -> level ---------------------------------------------------


def measure_feature(
    x: np.ndarray, sample_rate: int, sound_set: SoundSet, hazard: HazardType
) -> FeatureEstimate:
    """The mapped feature for this pair, measured from audio."""
    if sound_set is SoundSet.COG:
        if hazard is HazardType.RADIATION:
            # count clicks above the chirp band so interspersed chirps
            # neither add events nor mask neighbouring clicks; zero-phase
            # filtering keeps onset positions put
            sos = signal.butter(
                6, CLICK_HIGHPASS_HZ, btype="highpass", fs=sample_rate, output="sos"
            )
            return estimate_event_rate(
                signal.sosfiltfilt(sos, x), sample_rate, CLICK_MIN_SEPARATION_S
            )
        if hazard is HazardType.FLAMMABLE_GAS:
            return estimate_event_rate(
                x, sample_rate, GRAIN_MIN_SEPARATION_S, GRAIN_SMOOTH_S
            )
        return estimate_mod_rate(x, sample_rate)
    if hazard is HazardType.RADIATION:
        return estimate_pitch(x, sample_rate)
    if hazard is HazardType.FLAMMABLE_GAS:
        return estimate_mod_rate(x, sample_rate)
    return estimate_rolloff(x, sample_rate)


def invert_level(
    sound_set: SoundSet, hazard: HazardType, feature_value: float
) -> float:
    """Analytic inverse of the level-to-feature map, clipped to [0, 1]."""
    if feature_value <= 0:
        return 0.0
    if sound_set is SoundSet.COG:
        if hazard is HazardType.RADIATION:
            raw = level_from_click_rate(feature_value)
        elif hazard is HazardType.FLAMMABLE_GAS:
            raw = level_from_grain_rate(feature_value)
        else:
            raw = level_from_cog_temp_am_rate(feature_value)
    elif hazard is HazardType.RADIATION:
        raw = level_from_comp_rad_pitch(feature_value)
    elif hazard is HazardType.FLAMMABLE_GAS:
        raw = level_from_comp_gas_am_rate(feature_value)
    else:
        raw = level_from_comp_temp_cutoff(feature_value)
    return float(np.clip(raw, 0.0, 1.0))


def decode_level(
    x: np.ndarray, sample_rate: int, sound_set: SoundSet, hazard: HazardType
) -> tuple[float, FeatureEstimate]:
    """Estimated hazard level plus the feature it came from. Absent or
    unmeasurable signal decodes as level 0 with confidence 0."""
    feature = measure_feature(x, sample_rate, sound_set, hazard)
    if feature.confidence <= 0 or feature.value <= 0:
        return 0.0, FeatureEstimate(feature.name, feature.value, 0.0)
    return invert_level(sound_set, hazard, feature.value), feature


def decode_trace(
    x: np.ndarray,
    sample_rate: int,
    sound_set: SoundSet,
    hazard: HazardType,
    window_s: float = 2.0,
    hop_s: float = 0.25,
) -> tuple[np.ndarray, np.ndarray]:
    """Sliding-window decode: (window centre times, level estimates)."""
    win = int(window_s * sample_rate)
    hop = max(1, int(hop_s * sample_rate))
    if len(x) < win:
        raise ValueError("signal shorter than one analysis window")
    times, levels = [], []
    for start in range(0, len(x) - win + 1, hop):
        level, _ = decode_level(x[start : start + win], sample_rate, sound_set, hazard)
        times.append((start + win / 2) / sample_rate)
        levels.append(level)
    return np.asarray(times), np.asarray(levels)


# --- file and batch interface -------------------------------------------


def decode_file(
    path: str | Path, sound_set: SoundSet, hazard: HazardType
) -> dict:
    """Decode one mono WAV into a CSV-ready result row."""
    samples, rate = read_wav(path)
    if samples.ndim > 1:
        samples = samples.mean(axis=1)
    level, feature = decode_level(samples, rate, sound_set, hazard)
    return {
        "path": str(path),
        "sound_set": sound_set.value,
        "hazard": hazard.value,
        "feature": feature.name,
        "feature_value": round(feature.value, 6),
        "confidence": round(feature.confidence, 6),
        "level": round(level, 6),
    }


RESULT_FIELDS = (
    "path",
    "sound_set",
    "hazard",
    "feature",
    "feature_value",
    "confidence",
    "level",
)


def write_results_csv(path: str | Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=RESULT_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
