"""Earcons and alert audio: first-encounter notifications (snippets of the
matching RTL voice), interaction grunts, medium rising/falling figures,
looped high-priority alerts locked to the shared phase clock, and the
flanger applied above the top threshold."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from sonifleet.audio.params import SAMPLE_RATE, SoundSet, rtl_params
from sonifleet.audio.voices import make_voice
from sonifleet.hazards import HazardType

NOTIFICATION_LEVEL = 0.7
NOTIFICATION_DURATION_S = 0.8
NOTIFICATION_COOLDOWN_S = 10.0

GRUNT_DURATION_S = 0.25
MEDIUM_NOTE_S = 0.12

LOOP_NOTE_S = 0.090
LOOP_GAP_S = 0.030
LOOP_NOTES = 5
LOOP_PERIOD_S = LOOP_NOTES * (LOOP_NOTE_S + LOOP_GAP_S)  # 600 ms

# deliberately off any musical scale
_LOOP_BASE_HZ = {
    HazardType.RADIATION: 518.0,
    HazardType.TEMPERATURE: 611.0,
    HazardType.FLAMMABLE_GAS: 437.0,
}
_LOOP_STEP_RATIO = 1.17

FLANGER_VOICES = 4
FLANGER_RATE_HZ = 0.25
FLANGER_BASE_DELAY_S = (0.0012, 0.0025, 0.0041, 0.0058)
FLANGER_DEPTH_S = 0.0008
FLANGER_MIX = 0.5


def _fade(x: np.ndarray, sample_rate: int, attack_s=0.010, release_s=0.10) -> np.ndarray:
    n = len(x)
    out = x.copy()
    a = min(n, int(attack_s * sample_rate))
    r = min(n, int(release_s * sample_rate))
    if a:
        out[:a] *= np.linspace(0.0, 1.0, a)
    if r:
        out[-r:] *= np.linspace(1.0, 0.0, r)
    return out


def notification(
    sound_set: SoundSet,
    hazard: HazardType,
    sample_rate: int = SAMPLE_RATE,
    seed: int = 0,
) -> np.ndarray:
    """Short snippet of the (set, hazard) RTL voice at a fixed reference
    level, faded in and out; under one second."""
    params = rtl_params(sound_set, hazard, NOTIFICATION_LEVEL)
    voice = make_voice(params.voice, sample_rate, seed)
    frames = int(NOTIFICATION_DURATION_S * sample_rate)
    return _fade(voice.render(params, frames), sample_rate)


@dataclass
class NotificationScheduler:
    """Rate-limits first-encounter notifications per (robot, hazard)."""

    cooldown_s: float = NOTIFICATION_COOLDOWN_S
    _last: dict[tuple[str, HazardType], float] = field(default_factory=dict)

    def should_fire(self, robot_id: str, hazard: HazardType, now_s: float) -> bool:
        key = (robot_id, hazard)
        last = self._last.get(key)
        if last is not None and now_s - last < self.cooldown_s:
            return False
        self._last[key] = now_s
        return True


def grunt(sample_rate: int = SAMPLE_RATE) -> np.ndarray:
    """Tonal grunt preceding a high alert: a short three-harmonic tone
    with a downward bend."""
    n = int(GRUNT_DURATION_S * sample_rate)
    t = np.arange(n) / sample_rate
    f0 = 140.0 - 30.0 * (t / GRUNT_DURATION_S)
    phase = 2 * np.pi * np.cumsum(f0) / sample_rate
    tone = (
        0.6 * np.sin(phase)
        + 0.3 * np.sin(2 * phase + 0.5)
        + 0.15 * np.sin(3 * phase + 1.1)
    )
    envelope = np.exp(-t / 0.09)
    return _fade(0.8 * tone * envelope, sample_rate, attack_s=0.004, release_s=0.05)


def medium_earcon(rising: bool, sample_rate: int = SAMPLE_RATE) -> np.ndarray:
    """Two-note figure; interval direction mirrors the priority change."""
    notes = (392.0, 554.0) if rising else (554.0, 392.0)
    parts = []
    for f in notes:
        n = int(MEDIUM_NOTE_S * sample_rate)
        t = np.arange(n) / sample_rate
        tone = np.sin(2 * np.pi * f * t) * np.exp(-t / 0.08)
        parts.append(_fade(0.6 * tone, sample_rate, attack_s=0.005, release_s=0.03))
    return np.concatenate(parts)


def _render_loop(hazard: HazardType, sample_rate: int) -> np.ndarray:
    """One period of the ascending five-note high-alert arpeggio."""
    period = int(round(LOOP_PERIOD_S * sample_rate))
    out = np.zeros(period)
    note_n = int(LOOP_NOTE_S * sample_rate)
    slot_n = int((LOOP_NOTE_S + LOOP_GAP_S) * sample_rate)
    base = _LOOP_BASE_HZ[hazard]
    t = np.arange(note_n) / sample_rate
    for i in range(LOOP_NOTES):
        f = base * _LOOP_STEP_RATIO**i
        tone = np.sin(2 * np.pi * f * t) + 0.35 * np.sin(2 * np.pi * 2.01 * f * t)
        tone *= np.exp(-t / 0.05)
        tone = _fade(tone, sample_rate, attack_s=0.003, release_s=0.02)
        start = i * slot_n
        out[start : start + note_n] += 0.55 * tone
    return out


class HighAlertLoop:
    """Looped alert audio sliced from a precomputed period at the offset
    given by the shared phase clock, so every concurrently active alert
    renders sample-aligned."""

    def __init__(self, sample_rate: int = SAMPLE_RATE):
        self.sample_rate = sample_rate
        self._loops: dict[HazardType, np.ndarray] = {}

    def block(self, hazard: HazardType, phase_clock_s: float, frames: int) -> np.ndarray:
        loop = self._loops.get(hazard)
        if loop is None:
            loop = self._loops.setdefault(hazard, _render_loop(hazard, self.sample_rate))
        period = len(loop)
        start = int(round(phase_clock_s * self.sample_rate)) % period
        idx = (start + np.arange(frames)) % period
        return loop[idx]


class Flanger:
    """Multi-voice modulated comb applied to the alert bus while any
    channel sits above the flanger threshold."""

    def __init__(self, sample_rate: int = SAMPLE_RATE):
        self.sample_rate = sample_rate
        max_delay = max(FLANGER_BASE_DELAY_S) + FLANGER_DEPTH_S
        self._history = np.zeros(int(max_delay * sample_rate) + 2)
        self._clock = 0  # samples processed

    def process(self, block: np.ndarray) -> np.ndarray:
        n = len(block)
        buf = np.concatenate((self._history, block))
        base_idx = len(self._history) + np.arange(n, dtype=float)
        t = (self._clock + np.arange(n)) / self.sample_rate
        wet = np.zeros(n)
        for v in range(FLANGER_VOICES):
            phase = 2 * np.pi * (FLANGER_RATE_HZ * t + v / FLANGER_VOICES)
            delay_s = FLANGER_BASE_DELAY_S[v] + FLANGER_DEPTH_S * 0.5 * (
                1 + np.sin(phase)
            )
            pos = base_idx - delay_s * self.sample_rate
            wet += np.interp(pos, np.arange(len(buf), dtype=float), buf)
        wet /= FLANGER_VOICES
        self._history = buf[-len(self._history) :]
        self._clock += n
        return (1 - FLANGER_MIX) * block + FLANGER_MIX * wet
