"""World model for the tick simulation: grid occupancy and traversal
costs, robots with routes and waypoint overrides, taggable objects,
hazard markers, and the traversal-coverage mask."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from sonifleet.hazards import GridSpec, HazardType

CLEAR_ALL = "clear_all"

UNTAGGED_COLOR = (128, 128, 128)

Position = tuple[float, float]


class RobotMode(Enum):
    AUTONOMOUS = "autonomous"
    RTL = "rtl"
    WAYPOINT = "waypoint"


@dataclass
class SimConstants:
    """Scenario constants block; every number here is overridable from
    the scenario file."""

    cost_gain: float = 9.0  # max-hazard tile costs 1 + cost_gain
    decay_rate: float = 0.02  # health loss /s at level 1.0
    sensor_radius: float = 3.0
    marker_exclusion_radius: float = 3.0
    marker_level_threshold: float = 0.5
    robot_speed: float = 1.0
    tick_rate: float = 20.0
    priority_weight_external: float = 0.6
    priority_weight_internal: float = 0.4


@dataclass
class TaggableObject:
    id: str
    footprint: tuple[tuple[int, int], ...]
    revealed: bool = False
    tags: set[HazardType] = field(default_factory=set)

    @property
    def display_color(self) -> tuple[int, int, int]:
        """Additive light-mix of tag colours; untagged objects keep the
        voxel grey."""
        if not self.tags:
            return UNTAGGED_COLOR
        r = g = b = 0
        for tag in self.tags:
            cr, cg, cb = tag.color
            r, g, b = min(255, r + cr), min(255, g + cg), min(255, b + cb)
        return (r, g, b)


def apply_tag(obj: TaggableObject, tag: HazardType | str) -> tuple[int, int, int]:
    """Add a hazard tag (idempotent) or clear all tags; returns the
    resulting display colour. Hidden objects cannot be tagged."""
    if not obj.revealed:
        raise ValueError(f"object {obj.id} is not revealed")
    if tag == CLEAR_ALL:
        obj.tags.clear()
    elif isinstance(tag, HazardType):
        obj.tags.add(tag)
    else:
        raise ValueError(f"unknown tag {tag!r}")
    return obj.display_color


@dataclass(frozen=True)
class HazardMarker:
    position: Position
    hazard: HazardType
    created_tick: int


@dataclass
class Robot:
    id: str
    position: Position
    heading: float = 0.0
    speed: float = 1.0
    route: tuple[Position, ...] = ()
    route_index: int = 0
    waypoints: list[Position] = field(default_factory=list)
    mode: RobotMode = RobotMode.AUTONOMOUS
    health: float = 1.0
    priority: dict[HazardType, float] = field(
        default_factory=lambda: {h: 0.0 for h in HazardType}
    )
    sensor_radius: float = 3.0
    # navigation state
    path: list[tuple[int, int]] = field(default_factory=list)
    path_blocked: bool = False
    halted: bool = False  # waypoint-control hold until 'go'
    encountered: dict[HazardType, bool] = field(
        default_factory=lambda: {h: False for h in HazardType}
    )

    @property
    def operative(self) -> bool:
        return self.health > 0.0

    def current_goal(self) -> Position | None:
        """Next navigation target: pending waypoints first, then the
        checkpoint route (which cycles)."""
        if self.waypoints:
            return self.waypoints[0]
        if self.route:
            return self.route[self.route_index % len(self.route)]
        return None


def compute_priority(
    levels: dict[HazardType, float], health: float, constants: SimConstants
) -> dict[HazardType, float]:
    """Blend external hazard exposure with internal health into a
    normalised per-hazard danger score."""
    w_ext = constants.priority_weight_external
    w_int = constants.priority_weight_internal
    out = {}
    for h, level in levels.items():
        if not (0.0 <= level <= 1.0 and 0.0 <= health <= 1.0):
            raise ValueError("levels and health must be in [0, 1]")
        out[h] = min(1.0, max(0.0, w_ext * level + w_int * (1.0 - health)))
    return out


@dataclass
class GridWorld:
    grid: GridSpec
    cost: np.ndarray
    blocked: np.ndarray
    coverage: np.ndarray
    objects: list[TaggableObject] = field(default_factory=list)
    markers: list[HazardMarker] = field(default_factory=list)

    @classmethod
    def empty(cls, grid: GridSpec) -> "GridWorld":
        shape = (grid.height, grid.width)
        return cls(
            grid=grid,
            cost=np.ones(shape),
            blocked=np.zeros(shape, dtype=bool),
            coverage=np.zeros(shape, dtype=bool),
        )

    def object_by_id(self, object_id: str) -> TaggableObject:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise KeyError(object_id)

    def place_marker(
        self, position: Position, hazard: HazardType, tick: int, exclusion_radius: float
    ) -> bool:
        """Add a marker unless any existing marker (of any type) lies
        within the exclusion radius."""
        for m in self.markers:
            if math.dist(m.position, position) <= exclusion_radius:
                return False
        self.markers.append(HazardMarker(position, hazard, tick))
        return True

    def inflate_cost(self, tile: tuple[int, int], level: float, cost_gain: float) -> bool:
        """Raise the tile cost to 1 + cost_gain * level; costs never
        decrease. Returns whether the cost changed."""
        ix, iy = tile
        new_cost = 1.0 + cost_gain * level
        if new_cost > self.cost[iy, ix]:
            self.cost[iy, ix] = new_cost
            return True
        return False

    def reveal_object(self, obj: TaggableObject) -> None:
        obj.revealed = True
        for ix, iy in obj.footprint:
            if self.grid.in_bounds(ix, iy):
                self.blocked[iy, ix] = True

    def hidden_objects_near(self, position: Position, radius: float):
        """Hidden objects with any footprint tile centre within radius."""
        found = []
        for obj in self.objects:
            if obj.revealed:
                continue
            for ix, iy in obj.footprint:
                cx, cy, _ = self.grid.tile_center(ix, iy)
                if math.dist((cx, cy), position) <= radius:
                    found.append(obj)
                    break
        return found
