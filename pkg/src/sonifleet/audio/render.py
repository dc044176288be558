"""Offline rendering: level trajectories to mono audio, RIFF/WAVE output,
and JSON sidecar manifests for reproducibility."""

from __future__ import annotations

import json
import wave
from pathlib import Path
from typing import Callable

import numpy as np

from sonifleet.audio.params import (
    BLOCK_FRAMES,
    SAMPLE_RATE,
    SoundSet,
    rtl_params,
)
from sonifleet.audio.voices import make_voice
from sonifleet.hazards import HazardType

LevelFn = Callable[[float], float]


def render_trajectory(
    sound_set: SoundSet,
    hazard: HazardType,
    level_fn: LevelFn,
    duration_s: float,
    sample_rate: int = SAMPLE_RATE,
    seed: int = 0,
    block_frames: int = BLOCK_FRAMES,
) -> np.ndarray:
    """Drive one RTL voice with level_fn(t) sampled at each block start.
    Deterministic for a given seed; unspatialised mono."""
    if duration_s <= 0:
        raise ValueError("duration_s must be > 0")
    total = int(round(duration_s * sample_rate))
    voice = make_voice(rtl_params(sound_set, hazard, 0.0).voice, sample_rate, seed)
    out = np.zeros(total)
    pos = 0
    while pos < total:
        n = min(block_frames, total - pos)
        level = float(np.clip(level_fn(pos / sample_rate), 0.0, 1.0))
        params = rtl_params(sound_set, hazard, level)
        out[pos : pos + n] = voice.render(params, n)
        pos += n
    return out


def constant_level(level: float) -> LevelFn:
    return lambda t: level


def write_wav(path: str | Path, samples: np.ndarray, sample_rate: int = SAMPLE_RATE) -> None:
    """16-bit PCM; mono for 1-D input, stereo for (n, 2)."""
    samples = np.asarray(samples)
    if samples.ndim == 1:
        channels = 1
        frames = samples[:, None]
    elif samples.ndim == 2 and samples.shape[1] in (1, 2):
        channels = samples.shape[1]
        frames = samples
    else:
        raise ValueError(f"expected mono or stereo, got shape {samples.shape}")
    pcm = (np.clip(frames, -1.0, 1.0) * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(channels)
        handle.setsampwidth(2)
        handle.setframerate(sample_rate)
        handle.writeframes(pcm.tobytes())


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Inverse of write_wav: float samples in [-1, 1] plus sample rate."""
    with wave.open(str(path), "rb") as handle:
        rate = handle.getframerate()
        channels = handle.getnchannels()
        raw = handle.readframes(handle.getnframes())
    data = np.frombuffer(raw, dtype="<i2").astype(float) / 32767.0
    if channels > 1:
        data = data.reshape(-1, channels)
    return data, rate


def write_manifest(
    path: str | Path,
    sound_set: SoundSet,
    hazard: HazardType,
    seed: int,
    duration_s: float,
    levels: list[float] | dict,
    sample_rate: int = SAMPLE_RATE,
    extra: dict | None = None,
) -> None:
    """Sidecar recording everything needed to reproduce a render."""
    manifest = {
        "sound_set": sound_set.value,
        "hazard": hazard.value,
        "seed": seed,
        "duration_s": duration_s,
        "sample_rate": sample_rate,
        "levels": levels,
    }
    if extra:
        manifest.update(extra)
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
