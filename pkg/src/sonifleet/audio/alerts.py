"""Priority-alert state machine.

Per (robot, hazard) channel: a medium earcon fires when the priority
crosses 0.5 (different earcons for rising and falling), a two-stage grunt
plus a looped high alert start above 0.9, and a flanger joins above 0.95.
Falling edges are debounced with a 0.03 hysteresis band under each
threshold. All concurrently active high-alert loops are driven from one
shared phase clock so they stay sample-aligned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from sonifleet.hazards import HazardType

MEDIUM_THRESHOLD = 0.5
HIGH_THRESHOLD = 0.9
FLANGER_THRESHOLD = 0.95
HYSTERESIS = 0.03


class AlertEventKind(Enum):
    MEDIUM_RISING = "medium_rising"
    MEDIUM_FALLING = "medium_falling"
    GRUNT = "grunt"
    HIGH_ENTER = "high_enter"
    HIGH_EXIT = "high_exit"
    FLANGER_ENTER = "flanger_enter"
    FLANGER_EXIT = "flanger_exit"


@dataclass(frozen=True)
class AlertEvent:
    kind: AlertEventKind
    robot_id: str
    hazard: HazardType


@dataclass
class ChannelState:
    priority: float = 0.0
    medium_armed: bool = False
    high_active: bool = False
    flanger_active: bool = False


@dataclass
class AlertState:
    """All alert channels plus the global loop phase clock (seconds)."""

    channels: dict[tuple[str, HazardType], ChannelState] = field(default_factory=dict)
    phase_clock: float = 0.0

    def channel(self, robot_id: str, hazard: HazardType) -> ChannelState:
        return self.channels.setdefault((robot_id, hazard), ChannelState())

    def advance_clock(self, dt: float) -> None:
        self.phase_clock += dt

    @property
    def any_high_active(self) -> bool:
        return any(c.high_active for c in self.channels.values())

    @property
    def any_flanger_active(self) -> bool:
        return any(c.flanger_active for c in self.channels.values())

    def update(
        self, priorities: dict[tuple[str, HazardType], float]
    ) -> list[AlertEvent]:
        """Apply new priority values; return threshold-crossing events.

        Within one update, rising events come in ascending threshold order
        and falling events in descending order (flanger, high, medium).
        """
        events: list[AlertEvent] = []
        for (robot_id, hazard), p in priorities.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"priority must be in [0, 1], got {p}")
            c = self.channel(robot_id, hazard)
            c.priority = p

            if not c.medium_armed and p > MEDIUM_THRESHOLD:
                c.medium_armed = True
                events.append(AlertEvent(AlertEventKind.MEDIUM_RISING, robot_id, hazard))
            if not c.high_active and p > HIGH_THRESHOLD:
                c.high_active = True
                events.append(AlertEvent(AlertEventKind.GRUNT, robot_id, hazard))
                events.append(AlertEvent(AlertEventKind.HIGH_ENTER, robot_id, hazard))
            if not c.flanger_active and p > FLANGER_THRESHOLD:
                c.flanger_active = True
                events.append(AlertEvent(AlertEventKind.FLANGER_ENTER, robot_id, hazard))

            if c.flanger_active and p < FLANGER_THRESHOLD - HYSTERESIS:
                c.flanger_active = False
                events.append(AlertEvent(AlertEventKind.FLANGER_EXIT, robot_id, hazard))
            if c.high_active and p < HIGH_THRESHOLD - HYSTERESIS:
                c.high_active = False
                events.append(AlertEvent(AlertEventKind.HIGH_EXIT, robot_id, hazard))
            if c.medium_armed and p < MEDIUM_THRESHOLD - HYSTERESIS:
                c.medium_armed = False
                events.append(
                    AlertEvent(AlertEventKind.MEDIUM_FALLING, robot_id, hazard)
                )
        return events
