/**
 * Input mapping: pointer and keyboard gestures become either simulation
 * commands (sent to the server, applied only once acknowledged) or pure
 * local view changes. Nothing here mutates world state.
 */

import type { SnapshotState } from "./protocol.js";
import type { Camera, UiState } from "./state.js";
import { TAG_TO_COMMAND, selectedRobot } from "./state.js";

export type InputAction =
  | { kind: "command"; command: Record<string, unknown> }
  | { kind: "cycle_tag" }
  | { kind: "toggle_debug" }
  | { kind: "none" };

export const ROBOT_HIT_RADIUS = 0.55;

export function screenToWorld(
  camera: Camera,
  view: { width: number; height: number },
  sx: number,
  sy: number,
): [number, number] {
  return [
    (sx - view.width / 2) / camera.scale + camera.x,
    (sy - view.height / 2) / camera.scale + camera.y,
  ];
}

function robotAt(snapshot: SnapshotState, wx: number, wy: number): string | null {
  let best: string | null = null;
  let bestDist = ROBOT_HIT_RADIUS;
  for (const robot of snapshot.robots) {
    const d = Math.hypot(robot.position[0] - wx, robot.position[1] - wy);
    if (d <= bestDist) {
      best = robot.id;
      bestDist = d;
    }
  }
  return best;
}

function objectAt(snapshot: SnapshotState, wx: number, wy: number): string | null {
  const tx = Math.floor(wx);
  const ty = Math.floor(wy);
  for (const obj of snapshot.objects) {
    if (!obj.revealed) continue;
    if (obj.footprint.some(([x, y]) => x === tx && y === ty)) return obj.id;
  }
  return null;
}

/** Primary click: robots take priority (selection cycle), then revealed
 * objects (apply the active tag), then ground. A ground click appends a
 * waypoint when the selected robot is in waypoint mode and otherwise
 * teleports the avatar. */
export function primaryClick(state: UiState, wx: number, wy: number): InputAction {
  const snapshot = state.snapshot;
  if (snapshot === null) return { kind: "none" };

  const robot = robotAt(snapshot, wx, wy);
  if (robot !== null) {
    return { kind: "command", command: { type: "select_robot", robot } };
  }

  const object = objectAt(snapshot, wx, wy);
  if (object !== null) {
    return {
      kind: "command",
      command: { type: "tag", object, tag: TAG_TO_COMMAND[state.activeTag] },
    };
  }

  const selected = selectedRobot(state);
  if (selected !== null && selected.mode === "waypoint") {
    const waypoints = [...selected.waypoints.map((w) => [...w]), [wx, wy]];
    return {
      kind: "command",
      command: { type: "set_waypoints", robot: selected.id, waypoints },
    };
  }
  return { kind: "command", command: { type: "move_avatar", position: [wx, wy] } };
}

/** Secondary click on a waypoint removes it (1-indexed on the wire). */
export function secondaryClick(state: UiState, wx: number, wy: number): InputAction {
  const selected = selectedRobot(state);
  if (selected === null) return { kind: "none" };
  for (let i = 0; i < selected.waypoints.length; i++) {
    const [x, y] = selected.waypoints[i];
    if (Math.hypot(x - wx, y - wy) <= 0.4) {
      return {
        kind: "command",
        command: { type: "clear_waypoint", robot: selected.id, index: i + 1 },
      };
    }
  }
  return { kind: "none" };
}

/** Keyboard map: t cycles the tag color, r toggles Self-RTL, g releases
 * a halted robot, q/e rotate the avatar by 45 degree steps, d toggles
 * the debug overlay. */
export function keyAction(state: UiState, key: string): InputAction {
  switch (key) {
    case "t":
      return { kind: "cycle_tag" };
    case "d":
      return { kind: "toggle_debug" };
    case "r":
      return { kind: "command", command: { type: "self_rtl" } };
    case "g": {
      const selected = selectedRobot(state);
      if (selected === null) return { kind: "none" };
      return { kind: "command", command: { type: "go", robot: selected.id } };
    }
    case "q":
      return { kind: "command", command: { type: "rotate_avatar", steps: -1 } };
    case "e":
      return { kind: "command", command: { type: "rotate_avatar", steps: 1 } };
    default:
      return { kind: "none" };
  }
}
