/**
 * Operator console view state. Everything about the world comes from the
 * latest acknowledged server snapshot and synth frame; the only local
 * state is the camera, the active tag color, the debug overlay toggle,
 * and connection bookkeeping. Reducers are pure so the rendered UI is a
 * function of (snapshot, local view) and nothing else.
 */

import type {
  RobotState,
  ServerMessage,
  SnapshotState,
  SynthFrame,
} from "./protocol.js";
import { PROTOCOL_VERSION } from "./protocol.js";
import type { Hazard, SoundSet } from "./dsp/params.js";

export type ConnectionStatus = "connecting" | "open" | "lost";

export type TagColor = "red" | "green" | "blue" | "clear";

/** Fixed cycling order for the active tag color. */
export const TAG_CYCLE: readonly TagColor[] = ["red", "green", "blue", "clear"];

/** Tag colors follow the hazard display colors: red marks temperature,
 * green radiation, blue flammable gas; clear wipes the object's tags. */
export const TAG_TO_COMMAND: Record<TagColor, Hazard | "clear_all"> = {
  red: "temperature",
  green: "radiation",
  blue: "flammable_gas",
  clear: "clear_all",
};

/** Priority above which a robot outline turns red; matches the alert
 * machine's high threshold. */
export const HIGH_PRIORITY = 0.9;

export interface Camera {
  x: number;
  y: number;
  scale: number;
}

export interface UiState {
  connection: ConnectionStatus;
  controlHeld: boolean;
  controlYours: boolean;
  scenario: string;
  soundSet: SoundSet;
  snapshot: SnapshotState | null;
  frame: SynthFrame | null;
  activeTag: TagColor;
  camera: Camera;
  debugOverlay: boolean;
  lastError: string | null;
  lastRejection: string | null;
}

export function initialState(): UiState {
  return {
    connection: "connecting",
    controlHeld: false,
    controlYours: false,
    scenario: "",
    soundSet: "cog",
    snapshot: null,
    frame: null,
    activeTag: "red",
    camera: { x: 0, y: 0, scale: 32 },
    debugOverlay: false,
    lastError: null,
    lastRejection: null,
  };
}

/** Fold one server message into the view state. */
export function reduce(state: UiState, message: ServerMessage): UiState {
  switch (message.type) {
    case "welcome": {
      if (message.protocol !== PROTOCOL_VERSION) {
        return {
          ...state,
          lastError: `protocol ${message.protocol} != ${PROTOCOL_VERSION}`,
        };
      }
      const soundSet: SoundSet = message.sound_set === "comp" ? "comp" : "cog";
      return { ...state, scenario: message.scenario, soundSet };
    }
    case "control":
      return { ...state, controlHeld: message.held, controlYours: message.yours };
    case "snapshot": {
      // snapshots arrive in tick order; drop anything stale
      if (state.snapshot !== null && message.state.tick <= state.snapshot.tick) {
        return state;
      }
      return { ...state, snapshot: message.state };
    }
    case "synth_frame":
      return { ...state, frame: message };
    case "ack":
      return message.accepted
        ? { ...state, lastRejection: null }
        : { ...state, lastRejection: message.reason ?? "rejected" };
    case "error":
      return { ...state, lastError: message.message };
    case "events":
      return state;
  }
}

export function setConnection(state: UiState, connection: ConnectionStatus): UiState {
  if (connection === state.connection) return state;
  // a dropped link invalidates control; the server frees the slot
  if (connection !== "open") {
    return { ...state, connection, controlHeld: false, controlYours: false };
  }
  return { ...state, connection };
}

export function cycleTag(state: UiState): UiState {
  const i = TAG_CYCLE.indexOf(state.activeTag);
  return { ...state, activeTag: TAG_CYCLE[(i + 1) % TAG_CYCLE.length] };
}

export function toggleDebugOverlay(state: UiState): UiState {
  return { ...state, debugOverlay: !state.debugOverlay };
}

export function panCamera(state: UiState, dx: number, dy: number): UiState {
  const camera = { ...state.camera, x: state.camera.x + dx, y: state.camera.y + dy };
  return { ...state, camera };
}

export function zoomCamera(state: UiState, factor: number): UiState {
  const scale = Math.min(256, Math.max(4, state.camera.scale * factor));
  return { ...state, camera: { ...state.camera, scale } };
}

/** The single selected robot, straight from the snapshot; the server
 * enforces that at most one is selected. */
export function selectedRobot(state: UiState): RobotState | null {
  const snap = state.snapshot;
  if (snap === null || snap.selected === null) return null;
  return snap.robots.find((r) => r.id === snap.selected) ?? null;
}

/** Robots whose alert channels sit above the high threshold, from the
 * latest synth frame; falls back to snapshot priorities so a red
 * outline never waits on audio-path traffic. */
export function highAlertRobots(state: UiState): Set<string> {
  const out = new Set<string>();
  for (const alert of state.frame?.alerts ?? []) {
    if (alert.high_active) out.add(alert.robot);
  }
  for (const robot of state.snapshot?.robots ?? []) {
    if (Object.values(robot.priority).some((p) => p > HIGH_PRIORITY)) {
      out.add(robot.id);
    }
  }
  return out;
}

export type OutlineColor = "red" | "orange" | "green" | null;

/** Status outline: red for a high alert, orange in RTL, green in
 * waypoint mode, none when autonomous and calm. */
export function outlineColor(
  robot: RobotState,
  highAlert: ReadonlySet<string>,
): OutlineColor {
  if (highAlert.has(robot.id)) return "red";
  if (robot.mode === "rtl") return "orange";
  if (robot.mode === "waypoint") return "green";
  return null;
}
