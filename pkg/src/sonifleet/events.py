"""Simulation events emitted by the tick loop.

Events are plain frozen records so a run's event sequence can be compared
for equality and serialized deterministically for replay logs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from sonifleet.hazards import HazardType


class EventKind(Enum):
    HAZARD_FIRST_ENCOUNTER = "hazard_first_encounter"
    GRUNT = "grunt"
    MEDIUM_ALERT_RISING = "medium_alert_rising"
    MEDIUM_ALERT_FALLING = "medium_alert_falling"
    HIGH_ALERT_ENTER = "high_alert_enter"
    HIGH_ALERT_EXIT = "high_alert_exit"
    FLANGER_ENTER = "flanger_enter"
    FLANGER_EXIT = "flanger_exit"
    WAYPOINT_REACHED = "waypoint_reached"
    OBJECT_REVEALED = "object_revealed"
    PATH_BLOCKED = "path_blocked"
    MARKER_PLACED = "marker_placed"
    ROBOT_DISABLED = "robot_disabled"


@dataclass(frozen=True)
class SimEvent:
    kind: EventKind
    tick: int
    robot_id: str | None = None
    hazard: HazardType | None = None
    data: tuple[tuple[str, object], ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "tick": self.tick}
        if self.robot_id is not None:
            out["robot"] = self.robot_id
        if self.hazard is not None:
            out["hazard"] = self.hazard.value
        out.update(dict(self.data))
        return out


def event(kind: EventKind, tick: int, robot_id=None, hazard=None, **data) -> SimEvent:
    return SimEvent(kind, tick, robot_id, hazard, tuple(sorted(data.items())))
