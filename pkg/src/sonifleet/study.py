"""Machine replica of the sonification evaluation: hidden-Gaussian
trials on a left-right-left traversal, a decoder-driven listener, and
an absolute-error scoring pipeline with sound-wise 3-sigma participant
filtering followed by a square-root transform.

The trial hides a Gaussian hazard profile along a 1-D track spanning
positions -1 to +1. The listener (the signal decoder) hears a traversal
sweep and answers with the position where the sonified level peaked.
Sigma and sweep duration are configurable per trial; the defaults are
this package's reference protocol.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from sonifleet.audio.params import SAMPLE_RATE, SoundSet
from sonifleet.audio.render import render_trajectory, write_wav
from sonifleet.decoding import decode_trace
from sonifleet.hazards import HazardType

DEFAULT_SIGMA = 0.35
DEFAULT_DURATION_S = 16.0
DEFAULT_TRIALS_PER_SOUND = 3
OUTLIER_SIGMA = 3.0

RESPONSE_WINDOW_S = 2.0
RESPONSE_HOP_S = 0.25

SOUND_ORDER = [(ss, hz) for ss in SoundSet for hz in HazardType]


@dataclass(frozen=True)
class TrialSpec:
    """One stimulus: a hidden Gaussian profile and its render seed."""

    trial_id: str
    seed: int
    mu: float
    sigma: float
    duration_s: float
    sound_set: SoundSet
    hazard: HazardType

    def __post_init__(self):
        if not -1.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must be in [-1, 1], got {self.mu}")
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.duration_s <= 0:
            raise ValueError("duration_s must be > 0")

    def to_dict(self) -> dict:
        return {
            "trial_id": self.trial_id,
            "seed": self.seed,
            "mu": self.mu,
            "sigma": self.sigma,
            "duration_s": self.duration_s,
            "sound_set": self.sound_set.value,
            "hazard": self.hazard.value,
        }


def sweep_position(t: float | np.ndarray, duration_s: float):
    """Traversal position at time t: -1 to +1 and back over duration_s."""
    half = duration_s / 2.0
    t = np.clip(t, 0.0, duration_s)
    outbound = -1.0 + 2.0 * t / half
    inbound = 1.0 - 2.0 * (t - half) / half
    return np.where(t <= half, outbound, inbound)


def trial_level(trial: TrialSpec, position: float | np.ndarray):
    """Hidden profile: exp(-(position - mu)^2 / (2 sigma^2)), peak 1 at mu."""
    return np.exp(-((position - trial.mu) ** 2) / (2.0 * trial.sigma**2))


def peak_times(trial: TrialSpec) -> tuple[float, float]:
    """The two traversal times at which the sweep crosses mu."""
    half = trial.duration_s / 2.0
    first = (trial.mu + 1.0) / 2.0 * half
    return first, trial.duration_s - first


def gen_trials(
    seed: int,
    n_per_sound: int = DEFAULT_TRIALS_PER_SOUND,
    sigma: float = DEFAULT_SIGMA,
    duration_s: float = DEFAULT_DURATION_S,
) -> list[TrialSpec]:
    """n trials per (set, hazard) block, independently seeded centres;
    trial order within each block and the block order are both shuffled
    deterministically by the seed."""
    if n_per_sound < 1:
        raise ValueError("n_per_sound must be >= 1")
    rng = np.random.default_rng(seed)
    blocks: list[list[TrialSpec]] = []
    for ss, hz in SOUND_ORDER:
        block = [
            TrialSpec(
                trial_id=f"{ss.value}-{hz.value}-{k}",
                seed=int(rng.integers(0, 2**31)),
                mu=float(rng.uniform(-1.0, 1.0)),
                sigma=sigma,
                duration_s=duration_s,
                sound_set=ss,
                hazard=hz,
            )
            for k in range(n_per_sound)
        ]
        blocks.append([block[i] for i in rng.permutation(n_per_sound)])
    order = rng.permutation(len(blocks))
    return [trial for bi in order for trial in blocks[bi]]


def run_trial(
    trial: TrialSpec, sample_rate: int = SAMPLE_RATE
) -> tuple[np.ndarray, float]:
    """Render the stimulus; returns (audio, answer key mu)."""
    level_fn = lambda t: float(
        trial_level(trial, sweep_position(t, trial.duration_s))
    )
    audio = render_trajectory(
        trial.sound_set,
        trial.hazard,
        level_fn,
        trial.duration_s,
        sample_rate=sample_rate,
        seed=trial.seed,
    )
    return audio, trial.mu


RESPONSE_GRID = np.linspace(-1.0, 1.0, 401)
_WINDOW_SAMPLES = 33


def machine_response(
    trial: TrialSpec,
    audio: np.ndarray,
    sample_rate: int = SAMPLE_RATE,
    window_s: float = RESPONSE_WINDOW_S,
    hop_s: float = RESPONSE_HOP_S,
) -> float:
    """The decoder plays participant: decode a windowed level trace,
    then pick the profile centre whose predicted trace correlates best.

    A raw argmax over windows mis-answers centres near the track ends,
    where one analysis window straddles both traversal crossings; the
    participant knows the traversal protocol, so matching the full
    predicted response curve is the honest analogue of a listener
    replaying the sweep in their head."""
    times, levels = decode_trace(
        audio, sample_rate, trial.sound_set, trial.hazard, window_s, hop_s
    )
    centred = levels - levels.mean()
    if not np.any(centred):
        return 0.0
    offsets = np.linspace(-window_s / 2.0, window_s / 2.0, _WINDOW_SAMPLES)
    pos = sweep_position(times[:, None] + offsets[None, :], trial.duration_s)
    diff = pos[None, :, :] - RESPONSE_GRID[:, None, None]
    predicted = np.exp(-(diff**2) / (2.0 * trial.sigma**2)).mean(axis=2)
    predicted -= predicted.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(predicted, axis=1)
    norms[norms == 0] = 1.0
    scores = predicted @ centred / norms
    k = int(np.argmax(scores))
    if 0 < k < len(scores) - 1:
        ym, y0, yp = scores[k - 1], scores[k], scores[k + 1]
        denom = ym - 2.0 * y0 + yp
        if denom != 0:
            k = k + float(np.clip(0.5 * (ym - yp) / denom, -0.5, 0.5))
    step = RESPONSE_GRID[1] - RESPONSE_GRID[0]
    return float(RESPONSE_GRID[0] + k * step)


# --- scoring ------------------------------------------------------------


@dataclass(frozen=True)
class ScoreRow:
    """Per-sound error summary after filtering and transform."""

    sound_set: SoundSet
    hazard: HazardType
    n_participants: int
    mean_abs_error: float
    mean_sqrt_error: float
    sd_sqrt_error: float


def score(
    responses: list[float],
    keys: list[float],
    grouping: list[tuple[str, SoundSet, HazardType]],
) -> tuple[list[ScoreRow], list[str]]:
    """Per-participant per-sound mean |response - key|, sound-wise
    3-sigma outlier flags (sample SD) that drop flagged participants
    entirely, then a square-root transform; returns per-sound rows plus
    the removed participant ids."""
    if not len(responses) == len(keys) == len(grouping):
        raise ValueError("responses, keys and grouping must align")
    per: dict[tuple[str, SoundSet, HazardType], list[float]] = {}
    for response, key, (participant, ss, hz) in zip(responses, keys, grouping):
        per.setdefault((participant, ss, hz), []).append(abs(response - key))
    # sorted reductions keep the pipeline permutation-invariant bit for bit
    means = {
        group: float(np.mean(sorted(errs))) for group, errs in per.items()
    }

    flagged: set[str] = set()
    for ss, hz in SOUND_ORDER:
        cohort = sorted(
            (p, m) for (p, s, h), m in means.items() if (s, h) == (ss, hz)
        )
        if len(cohort) < 2:
            continue
        values = np.array([m for _, m in cohort])
        centre = values.mean()
        spread = values.std(ddof=1)
        for participant, value in cohort:
            if abs(value - centre) > OUTLIER_SIGMA * spread:
                flagged.add(participant)

    rows: list[ScoreRow] = []
    for ss, hz in SOUND_ORDER:
        kept = [
            m
            for (p, s, h), m in sorted(
                means.items(), key=lambda kv: (kv[0][0], kv[0][1].value, kv[0][2].value)
            )
            if (s, h) == (ss, hz) and p not in flagged
        ]
        if not kept:
            continue
        transformed = np.sqrt(kept)
        rows.append(
            ScoreRow(
                sound_set=ss,
                hazard=hz,
                n_participants=len(kept),
                mean_abs_error=float(np.mean(kept)),
                mean_sqrt_error=float(transformed.mean()),
                sd_sqrt_error=float(transformed.std(ddof=1))
                if len(kept) > 1
                else 0.0,
            )
        )
    return rows, sorted(flagged)


# --- batch orchestration -------------------------------------------------

TRIAL_FIELDS = (
    "participant",
    "trial_id",
    "sound_set",
    "hazard",
    "mu",
    "sigma",
    "duration_s",
    "seed",
    "response",
    "abs_error",
)

SCORE_FIELDS = (
    "sound_set",
    "hazard",
    "n_participants",
    "mean_abs_error",
    "mean_sqrt_error",
    "sd_sqrt_error",
)


def run_study(
    seed: int,
    out_dir: str | Path,
    participants: int = 2,
    n_per_sound: int = DEFAULT_TRIALS_PER_SOUND,
    sigma: float = DEFAULT_SIGMA,
    duration_s: float = DEFAULT_DURATION_S,
    write_audio: bool = True,
    sample_rate: int = SAMPLE_RATE,
) -> dict:
    """Full pipeline: trials, stimuli, machine responses, score table.
    Writes trials.csv, scores.csv, manifest.json and (optionally) the
    stimulus WAV files under out_dir. Deterministic for a given seed."""
    if participants < 1:
        raise ValueError("participants must be >= 1")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stimuli_dir = out / "stimuli"
    if write_audio:
        stimuli_dir.mkdir(exist_ok=True)

    trial_rows: list[dict] = []
    responses: list[float] = []
    keys: list[float] = []
    grouping: list[tuple[str, SoundSet, HazardType]] = []
    for p in range(participants):
        participant = f"p{p:02d}"
        for trial in gen_trials(seed + p, n_per_sound, sigma, duration_s):
            audio, key = run_trial(trial, sample_rate)
            response = machine_response(trial, audio, sample_rate)
            if write_audio:
                write_wav(
                    stimuli_dir / f"{participant}-{trial.trial_id}.wav",
                    audio,
                    sample_rate,
                )
            responses.append(response)
            keys.append(key)
            grouping.append((participant, trial.sound_set, trial.hazard))
            trial_rows.append(
                {
                    "participant": participant,
                    "trial_id": trial.trial_id,
                    "sound_set": trial.sound_set.value,
                    "hazard": trial.hazard.value,
                    "mu": round(trial.mu, 6),
                    "sigma": trial.sigma,
                    "duration_s": trial.duration_s,
                    "seed": trial.seed,
                    "response": round(response, 6),
                    "abs_error": round(abs(response - key), 6),
                }
            )

    rows, removed = score(responses, keys, grouping)
    with open(out / "trials.csv", "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=TRIAL_FIELDS)
        writer.writeheader()
        writer.writerows(trial_rows)
    with open(out / "scores.csv", "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=SCORE_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {
                    "sound_set": row.sound_set.value,
                    "hazard": row.hazard.value,
                    "n_participants": row.n_participants,
                    "mean_abs_error": round(row.mean_abs_error, 6),
                    "mean_sqrt_error": round(row.mean_sqrt_error, 6),
                    "sd_sqrt_error": round(row.sd_sqrt_error, 6),
                }
            )
    manifest = {
        "seed": seed,
        "participants": participants,
        "n_per_sound": n_per_sound,
        "sigma": sigma,
        "duration_s": duration_s,
        "sample_rate": sample_rate,
        "removed_participants": removed,
        "n_trials": len(trial_rows),
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )
    return manifest
