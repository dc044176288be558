"""Scene mixing: inverse-distance gain, constant-power stereo panning,
headlocked UI category, high-alert ducking (gain cut plus lowpass on all
non-alert streams), Self-RTL coverage gating, flanger on the alert bus,
and a final brick-wall limiter."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import signal

from sonifleet.audio.earcons import Flanger
from sonifleet.audio.params import SAMPLE_RATE
from sonifleet.hazards import GridSpec

REF_DIST_M = 2.0
DUCK_DB = -12.0
DUCK_LOWPASS_HZ = 2000.0
DUCK_GAIN = 10.0 ** (DUCK_DB / 20.0)


class MixCategory(Enum):
    RTL = "rtl"
    NOTIFICATION = "notification"
    ALERT = "alert"
    UI = "ui"


@dataclass
class SceneSource:
    source_id: str
    block: np.ndarray  # mono
    category: MixCategory
    position: tuple[float, float] | None = None  # None: headlocked


def distance_gain(distance: float, ref_dist: float = REF_DIST_M) -> float:
    return min(1.0, ref_dist / distance) if distance > 0 else 1.0


def pan_gains(azimuth: float) -> tuple[float, float]:
    """Constant-power pan from the signed lateral component; azimuth is
    radians left-positive relative to the listener's facing."""
    lateral = math.sin(azimuth)  # [-1 right? no: +1 = full left]
    angle = (1.0 - lateral) * math.pi / 4.0  # left=0 .. right=pi/2
    return math.cos(angle), math.sin(angle)


class Mixer:
    """Stateful stereo mixer; per-source filter and gain memory keeps
    block-to-block transitions click-free."""

    def __init__(self, sample_rate: int = SAMPLE_RATE, ref_dist: float = REF_DIST_M):
        self.sample_rate = sample_rate
        self.ref_dist = ref_dist
        self._duck_sos = signal.butter(
            4, DUCK_LOWPASS_HZ, fs=sample_rate, output="sos"
        )
        self._duck_zi: dict[str, np.ndarray] = {}
        self._prev_gains: dict[str, tuple[float, float]] = {}
        self._flangers = (Flanger(sample_rate), Flanger(sample_rate))

    def _target_gains(
        self,
        source: SceneSource,
        listener_pos: tuple[float, float],
        listener_heading: float,
    ) -> tuple[float, float]:
        if source.position is None or source.category is MixCategory.UI:
            g = 1.0 / math.sqrt(2.0)
            return g, g
        dx = source.position[0] - listener_pos[0]
        dy = source.position[1] - listener_pos[1]
        gain = distance_gain(math.hypot(dx, dy), self.ref_dist)
        azimuth = math.atan2(dy, dx) - listener_heading
        left, right = pan_gains(azimuth)
        return gain * left, gain * right

    def _ramped(self, source_id: str, target: tuple[float, float], frames: int):
        prev = self._prev_gains.get(source_id, target)
        self._prev_gains[source_id] = target
        left = np.linspace(prev[0], target[0], frames)
        right = np.linspace(prev[1], target[1], frames)
        return left, right

    def mix(
        self,
        sources: list[SceneSource],
        listener_pos: tuple[float, float],
        listener_heading: float = 0.0,
        *,
        high_alert_active: bool = False,
        flanger_active: bool = False,
        self_rtl: bool = False,
        coverage: np.ndarray | None = None,
        grid: GridSpec | None = None,
    ) -> np.ndarray:
        """Mix one block of mono sources into stereo (frames, 2)."""
        if not sources:
            return np.zeros((0, 2))
        frames = len(sources[0].block)
        main = np.zeros((frames, 2))
        alert_bus = np.zeros((frames, 2))

        listener_covered = True
        if self_rtl and coverage is not None and grid is not None:
            ix, iy = grid.tile_of(listener_pos[0], listener_pos[1])
            listener_covered = bool(
                grid.in_bounds(ix, iy) and coverage[iy, ix]
            )

        for source in sources:
            if len(source.block) != frames:
                raise ValueError("all source blocks must share one length")
            mono = np.asarray(source.block, dtype=float)
            left_t, right_t = self._target_gains(
                source, listener_pos, listener_heading
            )

            if (
                self_rtl
                and source.category is MixCategory.RTL
                and not listener_covered
            ):
                left_t = right_t = 0.0  # untraversed tile: no data to sonify

            ducked = high_alert_active and source.category is not MixCategory.ALERT
            if ducked:
                zi = self._duck_zi.get(source.source_id)
                if zi is None:
                    zi = signal.sosfilt_zi(self._duck_sos) * 0.0
                mono, zi = signal.sosfilt(self._duck_sos, mono, zi=zi)
                self._duck_zi[source.source_id] = zi
                left_t *= DUCK_GAIN
                right_t *= DUCK_GAIN
            else:
                self._duck_zi.pop(source.source_id, None)

            left, right = self._ramped(source.source_id, (left_t, right_t), frames)
            target = alert_bus if source.category is MixCategory.ALERT else main
            target[:, 0] += mono * left
            target[:, 1] += mono * right

        if flanger_active:
            alert_bus = np.column_stack(
                [f.process(alert_bus[:, i]) for i, f in enumerate(self._flangers)]
            )
        return np.clip(main + alert_bus, -1.0, 1.0)
