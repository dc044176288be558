"""Tick simulation: robot navigation on the cost grid, sensing, reveal,
markers, health, priorities, and the operator command surface.

Per-tick order (each phase sees the previous phase's effects):
move -> sense -> first-encounter events -> cost inflation -> reveal ->
markers -> health decay -> priorities -> alert machine. Navigation is
tile-quantised: robots drive between tile centres, so goals snap to the
centre of their tile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from sonifleet.audio.alerts import AlertEventKind, AlertState
from sonifleet.events import EventKind, SimEvent, event
from sonifleet.hazards import HazardField, HazardType
from sonifleet.pathing import plan_path
from sonifleet.scenario import Avatar, Scenario, build_world
from sonifleet.world import (
    CLEAR_ALL,
    GridWorld,
    Robot,
    RobotMode,
    SimConstants,
    apply_tag,
    compute_priority,
)

_ALERT_TO_SIM = {
    AlertEventKind.MEDIUM_RISING: EventKind.MEDIUM_ALERT_RISING,
    AlertEventKind.MEDIUM_FALLING: EventKind.MEDIUM_ALERT_FALLING,
    AlertEventKind.GRUNT: EventKind.GRUNT,
    AlertEventKind.HIGH_ENTER: EventKind.HIGH_ALERT_ENTER,
    AlertEventKind.HIGH_EXIT: EventKind.HIGH_ALERT_EXIT,
    AlertEventKind.FLANGER_ENTER: EventKind.FLANGER_ENTER,
    AlertEventKind.FLANGER_EXIT: EventKind.FLANGER_EXIT,
}

_ROTATE_STEP_DEG = 45.0


class Simulation:
    """Owns one scenario run. All mutation flows through step() and
    apply_command(); rejected commands leave state untouched."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.grid = scenario.grid
        self.constants: SimConstants = scenario.constants
        self.field: HazardField = scenario.field
        self.world: GridWorld = build_world(scenario)
        self.robots: list[Robot] = [
            replace(
                r,
                waypoints=list(r.waypoints),
                priority={h: 0.0 for h in HazardType},
                path=[],
                encountered={h: False for h in HazardType},
            )
            for r in scenario.robots
        ]
        self.avatar = Avatar(scenario.avatar.position, scenario.avatar.heading_deg)
        self.tick = 0
        self.selected: str | None = None
        self.self_rtl = False
        self.alerts = AlertState()
        self._goal_cache: dict[str, tuple[float, float] | None] = {}
        for r in self.robots:
            ix, iy = self._tile_of(r.position)
            self.world.coverage[iy, ix] = True

    # -- helpers ---------------------------------------------------------

    def robot_by_id(self, robot_id: str) -> Robot:
        for r in self.robots:
            if r.id == robot_id:
                return r
        raise KeyError(robot_id)

    def _tile_of(self, position) -> tuple[int, int]:
        return self.grid.tile_of(position[0], position[1])

    def _center(self, tile: tuple[int, int]) -> tuple[float, float]:
        cx, cy, _ = self.grid.tile_center(*tile)
        return (cx, cy)

    def _sense(self, robot: Robot) -> dict[HazardType, float]:
        x, y = robot.position
        point = (x, y, self.grid.sample_height)
        return {h: self.field.level_at(point, h) for h in HazardType}

    # -- navigation ------------------------------------------------------

    def _ensure_path(self, robot: Robot, events: list[SimEvent]) -> None:
        """Plan toward the robot's current goal if the goal changed, the
        path ran out, or the path was invalidated by new obstacles."""
        goal = robot.current_goal()
        cached = self._goal_cache.get(robot.id)
        invalid = any(
            self.world.blocked[iy, ix] for ix, iy in robot.path
        )
        if goal == cached and robot.path and not invalid:
            return
        self._goal_cache[robot.id] = goal
        if goal is None:
            robot.path = []
            robot.path_blocked = False
            return
        start = self._tile_of(robot.position)
        goal_tile = self._tile_of(goal)
        path = plan_path(self.world.cost, self.world.blocked, start, goal_tile)
        if path:
            robot.path = path[1:] if path[0] == start else list(path)
            if robot.path_blocked:
                robot.path_blocked = False
        else:
            robot.path = []
            if not robot.path_blocked:
                robot.path_blocked = True
                events.append(
                    event(EventKind.PATH_BLOCKED, self.tick, robot.id, goal=list(goal))
                )

    def _arrive(self, robot: Robot, events: list[SimEvent]) -> None:
        """Goal tile reached: retire the waypoint or advance the route."""
        if robot.waypoints:
            done = robot.waypoints.pop(0)
            events.append(
                event(
                    EventKind.WAYPOINT_REACHED,
                    self.tick,
                    robot.id,
                    position=list(done),
                )
            )
        elif robot.route:
            robot.route_index = (robot.route_index + 1) % len(robot.route)
        self._goal_cache[robot.id] = None  # force replan to next goal

    def _move(self, robot: Robot, dt: float, events: list[SimEvent]) -> None:
        if not robot.operative or robot.halted:
            return
        budget = robot.speed * dt
        # several short hops may fit in one tick's travel budget; arrivals
        # are bounded so a route whose checkpoints all share the robot's
        # tile cannot spin forever
        arrivals = 0
        max_arrivals = len(robot.waypoints) + len(robot.route) + 2
        while budget > 1e-12:
            self._ensure_path(robot, events)
            if not robot.path:
                goal = robot.current_goal()
                if (
                    goal is not None
                    and self._tile_of(robot.position) == self._tile_of(goal)
                    and arrivals < max_arrivals
                ):
                    arrivals += 1
                    self._arrive(robot, events)
                    continue
                break
            target = self._center(robot.path[0])
            dist = math.dist(robot.position, target)
            if dist > 0:
                robot.heading = math.atan2(
                    target[1] - robot.position[1], target[0] - robot.position[0]
                )
            if dist <= budget:
                robot.position = target
                budget -= dist
                tile = robot.path.pop(0)
                self.world.coverage[tile[1], tile[0]] = True
            else:
                frac = budget / dist
                x, y = robot.position
                robot.position = (
                    x + (target[0] - x) * frac,
                    y + (target[1] - y) * frac,
                )
                budget = 0.0

    # -- tick ------------------------------------------------------------

    def step(self, dt: float | None = None) -> list[SimEvent]:
        if dt is None:
            dt = 1.0 / self.constants.tick_rate
        if dt <= 0:
            raise ValueError("dt must be > 0")
        events: list[SimEvent] = []
        c = self.constants

        for robot in self.robots:
            self._move(robot, dt, events)

        levels_by_robot: dict[str, dict[HazardType, float]] = {}
        for robot in self.robots:
            if not robot.operative:
                continue
            levels = self._sense(robot)
            levels_by_robot[robot.id] = levels

            for hazard, level in levels.items():
                if level > 0.0 and not robot.encountered[hazard]:
                    robot.encountered[hazard] = True
                    events.append(
                        event(
                            EventKind.HAZARD_FIRST_ENCOUNTER,
                            self.tick,
                            robot.id,
                            hazard,
                            level=round(level, 6),
                        )
                    )
                elif level == 0.0:
                    robot.encountered[hazard] = False

            max_level = max(levels.values())
            tile = self._tile_of(robot.position)
            if self.world.inflate_cost(tile, max_level, c.cost_gain):
                robot.path = []  # cost change: detecting robot replans

            revealed = self.world.hidden_objects_near(robot.position, robot.sensor_radius)
            for obj in revealed:
                self.world.reveal_object(obj)
                events.append(
                    event(EventKind.OBJECT_REVEALED, self.tick, robot.id, object=obj.id)
                )
            if revealed:
                blocked_tiles = {t for o in revealed for t in o.footprint}
                for other in self.robots:
                    kept = [
                        w for w in other.waypoints if self._tile_of(w) not in blocked_tiles
                    ]
                    if len(kept) != len(other.waypoints):
                        other.waypoints[:] = kept
                        other.path = []
                    if any(t in blocked_tiles for t in other.path):
                        other.path = []

            if max_level > c.marker_level_threshold:
                dominant = max(levels, key=lambda h: (levels[h], h.value))
                if self.world.place_marker(
                    robot.position, dominant, self.tick, c.marker_exclusion_radius
                ):
                    events.append(
                        event(
                            EventKind.MARKER_PLACED,
                            self.tick,
                            robot.id,
                            dominant,
                            position=list(robot.position),
                        )
                    )

            new_health = max(0.0, robot.health - c.decay_rate * dt * max_level)
            if new_health == 0.0 and robot.health > 0.0:
                events.append(event(EventKind.ROBOT_DISABLED, self.tick, robot.id))
                if self.selected == robot.id:
                    self._deselect()
            robot.health = new_health

        priorities: dict[tuple[str, HazardType], float] = {}
        for robot in self.robots:
            if robot.operative:
                robot.priority = compute_priority(
                    levels_by_robot[robot.id], robot.health, c
                )
            else:
                # a disabled robot's feed goes silent
                robot.priority = {h: 0.0 for h in HazardType}
            for hazard, p in robot.priority.items():
                priorities[(robot.id, hazard)] = p

        self.alerts.advance_clock(dt)
        for alert_event in self.alerts.update(priorities):
            events.append(
                event(
                    _ALERT_TO_SIM[alert_event.kind],
                    self.tick,
                    alert_event.robot_id,
                    alert_event.hazard,
                )
            )

        self.tick += 1
        return events

    # -- commands --------------------------------------------------------

    def _deselect(self) -> None:
        if self.selected is None:
            return
        robot = self.robot_by_id(self.selected)
        robot.mode = RobotMode.AUTONOMOUS
        robot.halted = False  # deselection implies go
        self.selected = None

    def apply_command(self, command: dict) -> tuple[bool, str | None]:
        """Returns (accepted, reason). A rejected command has no effect."""
        kind = command.get("type")
        handler = {
            "select_robot": self._cmd_select_robot,
            "self_rtl": self._cmd_self_rtl,
            "set_waypoints": self._cmd_set_waypoints,
            "clear_waypoint": self._cmd_clear_waypoint,
            "go": self._cmd_go,
            "tag": self._cmd_tag,
            "move_avatar": self._cmd_move_avatar,
            "rotate_avatar": self._cmd_rotate_avatar,
        }.get(kind)
        if handler is None:
            return False, f"unknown command type {kind!r}"
        return handler(command)

    def _cmd_select_robot(self, command) -> tuple[bool, str | None]:
        robot_id = command.get("robot")
        try:
            robot = self.robot_by_id(robot_id)
        except KeyError:
            return False, f"no robot {robot_id!r}"
        if not robot.operative:
            return False, f"robot {robot_id} is disabled"
        if self.self_rtl:
            self.self_rtl = False
        if self.selected == robot_id:
            if robot.mode is RobotMode.RTL:
                robot.mode = RobotMode.WAYPOINT
                robot.halted = True  # waits for go
            else:
                self._deselect()
        else:
            self._deselect()
            self.selected = robot_id
            robot.mode = RobotMode.RTL
        return True, None

    def _cmd_self_rtl(self, command) -> tuple[bool, str | None]:
        if self.self_rtl:
            self.self_rtl = False
        else:
            self._deselect()
            self.self_rtl = True
        return True, None

    def _cmd_set_waypoints(self, command) -> tuple[bool, str | None]:
        robot_id = command.get("robot")
        if self.selected != robot_id:
            return False, "robot is not selected"
        robot = self.robot_by_id(robot_id)
        if robot.mode is not RobotMode.WAYPOINT:
            return False, "robot is not in waypoint control"
        raw = command.get("waypoints")
        if not isinstance(raw, list):
            return False, "waypoints must be a list of [x, y]"
        points = []
        for p in raw:
            if not (isinstance(p, (list, tuple)) and len(p) == 2):
                return False, f"bad waypoint {p!r}"
            x, y = float(p[0]), float(p[1])
            tile = self.grid.tile_of(x, y)
            if not self.grid.in_bounds(*tile):
                return False, f"waypoint {p!r} outside grid"
            if self.world.blocked[tile[1], tile[0]]:
                return False, f"waypoint {p!r} on a blocked tile"
            points.append((x, y))
        robot.waypoints[:] = points
        robot.path = []
        return True, None

    def _cmd_clear_waypoint(self, command) -> tuple[bool, str | None]:
        robot_id = command.get("robot")
        if self.selected != robot_id:
            return False, "robot is not selected"
        robot = self.robot_by_id(robot_id)
        if robot.mode is not RobotMode.WAYPOINT:
            return False, "robot is not in waypoint control"
        index = command.get("index")
        if not isinstance(index, int) or isinstance(index, bool):
            return False, "index must be an integer"
        if not 1 <= index <= len(robot.waypoints):  # waypoints are numbered from 1
            return False, f"no waypoint {index}"
        del robot.waypoints[index - 1]
        robot.path = []
        return True, None

    def _cmd_go(self, command) -> tuple[bool, str | None]:
        robot_id = command.get("robot")
        if self.selected != robot_id:
            return False, "robot is not selected"
        robot = self.robot_by_id(robot_id)
        if robot.mode is not RobotMode.WAYPOINT:
            return False, "robot is not in waypoint control"
        robot.halted = False
        return True, None

    def _cmd_tag(self, command) -> tuple[bool, str | None]:
        object_id = command.get("object")
        try:
            obj = self.world.object_by_id(object_id)
        except KeyError:
            return False, f"no object {object_id!r}"
        raw_tag = command.get("tag")
        if raw_tag == CLEAR_ALL:
            tag = CLEAR_ALL
        else:
            try:
                tag = HazardType(raw_tag)
            except ValueError:
                return False, f"unknown tag {raw_tag!r}"
        if not obj.revealed:
            return False, f"object {object_id} is not revealed"
        apply_tag(obj, tag)
        return True, None

    def _cmd_move_avatar(self, command) -> tuple[bool, str | None]:
        raw = command.get("position")
        if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
            return False, "position must be [x, y]"
        x, y = float(raw[0]), float(raw[1])
        if not self.grid.in_bounds(*self.grid.tile_of(x, y)):
            return False, "position outside grid"
        self.avatar.position = (x, y)
        return True, None

    def _cmd_rotate_avatar(self, command) -> tuple[bool, str | None]:
        steps = command.get("steps", 1)
        if not isinstance(steps, int) or isinstance(steps, bool):
            return False, "steps must be an integer"
        self.avatar.heading_deg = (
            self.avatar.heading_deg + _ROTATE_STEP_DEG * steps
        ) % 360.0
        return True, None

    # -- observation -----------------------------------------------------

    def snapshot(self) -> dict:
        """JSON-ready world snapshot; tick counters increase strictly."""
        cov_y, cov_x = self.world.coverage.nonzero()
        return {
            "tick": self.tick,
            "selected": self.selected,
            "self_rtl": self.self_rtl,
            "avatar": {
                "position": list(self.avatar.position),
                "heading_deg": self.avatar.heading_deg,
            },
            "robots": [
                {
                    "id": r.id,
                    "position": [r.position[0], r.position[1]],
                    "heading": r.heading,
                    "mode": r.mode.value,
                    "health": r.health,
                    "operative": r.operative,
                    "halted": r.halted,
                    "priority": {h.value: p for h, p in r.priority.items()},
                    "waypoints": [list(w) for w in r.waypoints],
                    "path": [list(t) for t in r.path],
                    "path_blocked": r.path_blocked,
                }
                for r in self.robots
            ],
            "objects": [
                {
                    "id": o.id,
                    "footprint": [list(t) for t in o.footprint],
                    "revealed": o.revealed,
                    "tags": sorted(t.value for t in o.tags),
                    "color": list(o.display_color),
                }
                for o in self.world.objects
            ],
            "markers": [
                {
                    "position": list(m.position),
                    "hazard": m.hazard.value,
                    "tick": m.created_tick,
                }
                for m in self.world.markers
            ],
            "coverage": [[int(x), int(y)] for x, y in zip(cov_x, cov_y)],
        }


def run_scripted(
    scenario: Scenario,
    script: list[tuple[int, dict]],
    ticks: int,
) -> tuple[Simulation, list[SimEvent], list[dict]]:
    """Headless replay: apply script commands at their ticks, step the
    simulation, and collect events plus the command acceptance log."""
    sim = Simulation(scenario)
    events: list[SimEvent] = []
    log: list[dict] = []
    pending = list(script)
    for _ in range(ticks):
        while pending and pending[0][0] <= sim.tick:
            tick, command = pending.pop(0)
            accepted, reason = sim.apply_command(command)
            entry = {"tick": sim.tick, "command": command, "accepted": accepted}
            if reason:
                entry["reason"] = reason
            log.append(entry)
        events.extend(sim.step())
    return sim, events, log
