"""Scenario files: JSON schema, loading, validation, and world-state
construction.

Schema (all lengths in meters, positions in world coordinates):

    {
      "name": "demo",
      "seed": 42,
      "grid": {"width": 40, "height": 40, "tile_size": 1.0,
               "origin": [0.0, 0.0], "sample_height": 0.5},
      "constants": {"cost_gain": 9.0, "decay_rate": 0.02, ...},
      "spheres": [{"center": [x, y, z], "radius": 6.0, "peak": 1.0,
                   "hazard": "radiation"}],
      "objects": [{"id": "barrel-1", "footprint": [[ix, iy], ...]}],
      "robots": [{"id": "r1", "start": [x, y], "speed": 1.0,
                  "route": [[x, y], ...]}],
      "avatar": {"position": [x, y], "heading_deg": 0.0}
    }

Command scripts for scripted replays:

    {"commands": [{"tick": 40, "command": {"type": "select_robot",
                                           "robot": "r1"}}]}
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from sonifleet.hazards import GridSpec, HazardField, HazardSphere, HazardType
from sonifleet.world import GridWorld, Robot, SimConstants, TaggableObject


@dataclass
class Avatar:
    position: tuple[float, float] = (0.0, 0.0)
    heading_deg: float = 0.0


@dataclass
class Scenario:
    name: str
    seed: int
    grid: GridSpec
    constants: SimConstants
    field: HazardField
    objects: list[TaggableObject] = field(default_factory=list)
    robots: list[Robot] = field(default_factory=list)
    avatar: Avatar = field(default_factory=Avatar)


class ScenarioError(ValueError):
    """Malformed scenario file."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioError(message)


def _vec(value, n: int, where: str) -> tuple[float, ...]:
    _require(
        isinstance(value, (list, tuple)) and len(value) == n,
        f"{where}: expected {n} numbers, got {value!r}",
    )
    _require(
        all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value),
        f"{where}: entries must be numbers",
    )
    return tuple(float(v) for v in value)


def load_scenario(source: str | Path | dict) -> Scenario:
    """Parse + validate a scenario from a path or an already-decoded dict."""
    if isinstance(source, dict):
        raw = source
    else:
        raw = json.loads(Path(source).read_text())
    _require(isinstance(raw, dict), "scenario root must be an object")

    name = raw.get("name", "unnamed")
    seed = raw.get("seed", 0)
    _require(isinstance(seed, int) and not isinstance(seed, bool), "seed must be an integer")

    g = raw.get("grid")
    _require(isinstance(g, dict), "missing grid object")
    _require(
        isinstance(g.get("width"), int) and isinstance(g.get("height"), int),
        "grid width/height must be integers",
    )
    _require(g["width"] > 0 and g["height"] > 0, "grid dimensions must be positive")
    tile_size = float(g.get("tile_size", 1.0))
    _require(tile_size > 0, "grid tile_size must be > 0")
    origin = _vec(g.get("origin", [0.0, 0.0]), 2, "grid.origin")
    grid = GridSpec(
        width=g["width"],
        height=g["height"],
        tile_size=tile_size,
        origin=origin,
        sample_height=float(g.get("sample_height", 0.0)),
    )

    constants = SimConstants()
    extra = raw.get("constants", {})
    _require(isinstance(extra, dict), "constants must be an object")
    known = {f.name for f in dataclasses.fields(SimConstants)}
    for key, value in extra.items():
        _require(key in known, f"unknown constant {key!r}")
        _require(
            isinstance(value, (int, float)) and not isinstance(value, bool),
            f"constant {key!r} must be a number",
        )
        setattr(constants, key, float(value))
    _require(constants.tick_rate > 0, "tick_rate must be > 0")
    _require(constants.robot_speed > 0, "robot_speed must be > 0")
    _require(constants.cost_gain >= 0, "cost_gain must be >= 0")

    spheres = []
    for i, s in enumerate(raw.get("spheres", [])):
        where = f"spheres[{i}]"
        _require(isinstance(s, dict), f"{where}: must be an object")
        hazard_name = s.get("hazard")
        try:
            hazard = HazardType(hazard_name)
        except ValueError:
            raise ScenarioError(
                f"{where}: unknown hazard {hazard_name!r}; expected one of "
                f"{[h.value for h in HazardType]}"
            ) from None
        center = _vec(s.get("center"), 3, f"{where}.center")
        try:
            spheres.append(
                HazardSphere(
                    center=center,
                    radius=float(s.get("radius", 0.0)),
                    peak=float(s.get("peak", 1.0)),
                    hazard=hazard,
                )
            )
        except ValueError as exc:
            raise ScenarioError(f"{where}: {exc}") from None
    hazard_field = HazardField(spheres=tuple(spheres))

    objects = []
    seen_ids: set[str] = set()
    for i, o in enumerate(raw.get("objects", [])):
        where = f"objects[{i}]"
        _require(isinstance(o, dict), f"{where}: must be an object")
        oid = o.get("id")
        _require(isinstance(oid, str) and oid, f"{where}: id must be a non-empty string")
        _require(oid not in seen_ids, f"{where}: duplicate object id {oid!r}")
        seen_ids.add(oid)
        footprint = o.get("footprint")
        _require(
            isinstance(footprint, list) and footprint, f"{where}: footprint must be non-empty"
        )
        tiles = []
        for j, t in enumerate(footprint):
            tx, ty = _vec(t, 2, f"{where}.footprint[{j}]")
            ix, iy = int(tx), int(ty)
            _require(grid.in_bounds(ix, iy), f"{where}.footprint[{j}]: tile outside grid")
            tiles.append((ix, iy))
        objects.append(TaggableObject(id=oid, footprint=tuple(tiles)))

    robots = []
    seen_ids = set()
    for i, r in enumerate(raw.get("robots", [])):
        where = f"robots[{i}]"
        _require(isinstance(r, dict), f"{where}: must be an object")
        rid = r.get("id")
        _require(isinstance(rid, str) and rid, f"{where}: id must be a non-empty string")
        _require(rid not in seen_ids, f"{where}: duplicate robot id {rid!r}")
        seen_ids.add(rid)
        start = _vec(r.get("start"), 2, f"{where}.start")
        _require(
            grid.in_bounds(*grid.tile_of(start[0], start[1])),
            f"{where}.start: outside grid",
        )
        route = tuple(
            _vec(p, 2, f"{where}.route[{j}]") for j, p in enumerate(r.get("route", []))
        )
        for j, p in enumerate(route):
            _require(
                grid.in_bounds(*grid.tile_of(p[0], p[1])),
                f"{where}.route[{j}]: outside grid",
            )
        robots.append(
            Robot(
                id=rid,
                position=start,
                speed=float(r.get("speed", constants.robot_speed)),
                route=route,
                sensor_radius=constants.sensor_radius,
            )
        )
    _require(bool(robots), "scenario needs at least one robot")

    av = raw.get("avatar", {})
    _require(isinstance(av, dict), "avatar must be an object")
    avatar = Avatar(
        position=_vec(av.get("position", [0.0, 0.0]), 2, "avatar.position"),
        heading_deg=float(av.get("heading_deg", 0.0)),
    )

    return Scenario(
        name=name,
        seed=seed,
        grid=grid,
        constants=constants,
        field=hazard_field,
        objects=objects,
        robots=robots,
        avatar=avatar,
    )


def build_world(scenario: Scenario) -> GridWorld:
    """Fresh mutable world for one run of the scenario."""
    world = GridWorld.empty(scenario.grid)
    world.objects = [
        TaggableObject(id=o.id, footprint=o.footprint) for o in scenario.objects
    ]
    return world


def load_command_script(source: str | Path | dict) -> list[tuple[int, dict]]:
    """Replay script: ordered (tick, command) pairs."""
    if isinstance(source, dict):
        raw = source
    else:
        raw = json.loads(Path(source).read_text())
    _require(isinstance(raw, dict) and isinstance(raw.get("commands"), list),
             "command script must be {\"commands\": [...]}")
    out = []
    for i, entry in enumerate(raw["commands"]):
        where = f"commands[{i}]"
        _require(isinstance(entry, dict), f"{where}: must be an object")
        tick = entry.get("tick")
        _require(
            isinstance(tick, int) and not isinstance(tick, bool) and tick >= 0,
            f"{where}: tick must be a non-negative integer",
        )
        command = entry.get("command")
        _require(
            isinstance(command, dict) and isinstance(command.get("type"), str),
            f"{where}: command must be an object with a string 'type'",
        )
        out.append((tick, command))
    out.sort(key=lambda pair: pair[0])
    return out
