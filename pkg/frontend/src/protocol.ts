/**
 * Wire protocol for the teleop session channel, version 1.
 *
 * Messages are JSON objects with a `type` tag. The client sends
 * acquire_control, release_control, and command (seq-wrapped simulation
 * command dicts, each answered by an ack). The server sends welcome,
 * control, ack, snapshot, events, synth_frame, and error. Audio never
 * crosses the wire; synth_frame carries per-voice parameters and the
 * client synthesizes locally.
 */

export const PROTOCOL_VERSION = 1;

export class ProtocolError extends Error {}

export type VoiceKind =
  | "clicks"
  | "grains"
  | "tone_am_fm"
  | "tone"
  | "noise_am"
  | "comb_brightness";

const VOICE_KINDS: readonly VoiceKind[] = [
  "clicks",
  "grains",
  "tone_am_fm",
  "tone",
  "noise_am",
  "comb_brightness",
];

/** Per-voice control parameters; fields unused by a voice stay zero. */
export interface SynthParams {
  voice: VoiceKind;
  fundamental_hz: number;
  click_rate_hz: number;
  chirp_probability: number;
  am_rate_hz: number;
  fm_rate_hz: number;
  fm_depth_hz: number;
  lowpass_hz: number;
  gains: number[];
  grain_ioi_s: number;
}

export interface VoiceFrame {
  hazard: string;
  level: number;
  params: SynthParams;
}

export interface AlertFrame {
  robot: string;
  hazard: string;
  priority: number;
  high_active: boolean;
  flanger_active: boolean;
}

export interface AcquireControl {
  type: "acquire_control";
}

export interface ReleaseControl {
  type: "release_control";
}

export interface CommandMessage {
  type: "command";
  seq: number;
  command: Record<string, unknown>;
}

export interface Welcome {
  type: "welcome";
  protocol: number;
  scenario: string;
  sound_set: string;
  tick_rate: number;
}

export interface ControlState {
  type: "control";
  held: boolean;
  yours: boolean;
}

export interface Ack {
  type: "ack";
  seq: number;
  accepted: boolean;
  reason: string | null;
}

export interface SnapshotMessage {
  type: "snapshot";
  state: SnapshotState;
}

export interface EventsMessage {
  type: "events";
  tick: number;
  events: SimEvent[];
}

export interface SynthFrame {
  type: "synth_frame";
  tick: number;
  sound_set: string;
  self_rtl: boolean;
  coverage_ok: boolean;
  source: [number, number] | null;
  voices: VoiceFrame[];
  alerts: AlertFrame[];
  phase_clock: number;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage =
  | Welcome
  | ControlState
  | Ack
  | SnapshotMessage
  | EventsMessage
  | SynthFrame
  | ErrorMessage;

export type ClientMessage = AcquireControl | ReleaseControl | CommandMessage;

export type Message = ServerMessage | ClientMessage;

/** Snapshot payload shapes, as produced by the simulation each tick. */
export interface RobotState {
  id: string;
  position: [number, number];
  heading_deg: number;
  mode: "autonomous" | "rtl" | "waypoint";
  health: number;
  operative: boolean;
  halted: boolean;
  priority: Record<string, number>;
  waypoints: [number, number][];
  path: [number, number][];
  path_blocked: boolean;
}

export interface ObjectState {
  id: string;
  footprint: [number, number][];
  revealed: boolean;
  tags: string[];
  color: [number, number, number];
}

export interface MarkerState {
  position: [number, number];
  hazard: string;
  tick: number;
}

export interface SnapshotState {
  tick: number;
  selected: string | null;
  self_rtl: boolean;
  avatar: { position: [number, number]; heading_deg: number };
  robots: RobotState[];
  objects: ObjectState[];
  markers: MarkerState[];
  coverage: [number, number][];
}

export interface SimEvent {
  kind: string;
  [key: string]: unknown;
}

function fail(reason: string): never {
  throw new ProtocolError(reason);
}

function asObject(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(`${what} must be a JSON object`);
  }
  return value as Record<string, unknown>;
}

function asNumber(value: unknown, what: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    fail(`${what} must be a finite number`);
  }
  return value;
}

function asBoolean(value: unknown, what: string): boolean {
  if (typeof value !== "boolean") fail(`${what} must be a boolean`);
  return value;
}

function asString(value: unknown, what: string): string {
  if (typeof value !== "string") fail(`${what} must be a string`);
  return value;
}

export function paramsFromWire(payload: unknown): SynthParams {
  const obj = asObject(payload, "synth params");
  const voice = asString(obj.voice, "voice") as VoiceKind;
  if (!VOICE_KINDS.includes(voice)) fail(`unknown voice ${obj.voice}`);
  const gains = obj.gains;
  if (!Array.isArray(gains)) fail("gains must be a list");
  return {
    voice,
    fundamental_hz: asNumber(obj.fundamental_hz, "fundamental_hz"),
    click_rate_hz: asNumber(obj.click_rate_hz, "click_rate_hz"),
    chirp_probability: asNumber(obj.chirp_probability, "chirp_probability"),
    am_rate_hz: asNumber(obj.am_rate_hz, "am_rate_hz"),
    fm_rate_hz: asNumber(obj.fm_rate_hz, "fm_rate_hz"),
    fm_depth_hz: asNumber(obj.fm_depth_hz, "fm_depth_hz"),
    lowpass_hz: asNumber(obj.lowpass_hz, "lowpass_hz"),
    gains: gains.map((g, i) => asNumber(g, `gains[${i}]`)),
    grain_ioi_s: asNumber(obj.grain_ioi_s, "grain_ioi_s"),
  };
}

export function paramsToWire(params: SynthParams): Record<string, unknown> {
  return { ...params, gains: [...params.gains] };
}

/** Parse one server message; rejects unknown types and malformed fields. */
export function decodeServer(text: string): ServerMessage {
  let payload: unknown;
  try {
    payload = JSON.parse(text);
  } catch {
    fail("message is not valid JSON");
  }
  const obj = asObject(payload, "message");
  const type = asString(obj.type, "type");
  switch (type) {
    case "welcome":
      return {
        type,
        protocol: asNumber(obj.protocol, "protocol"),
        scenario: asString(obj.scenario, "scenario"),
        sound_set: asString(obj.sound_set, "sound_set"),
        tick_rate: asNumber(obj.tick_rate, "tick_rate"),
      };
    case "control":
      return {
        type,
        held: asBoolean(obj.held, "held"),
        yours: asBoolean(obj.yours, "yours"),
      };
    case "ack":
      return {
        type,
        seq: asNumber(obj.seq, "seq"),
        accepted: asBoolean(obj.accepted, "accepted"),
        reason: obj.reason === null ? null : asString(obj.reason, "reason"),
      };
    case "snapshot": {
      const state = asObject(obj.state, "state");
      asNumber(state.tick, "state.tick");
      return { type, state: state as unknown as SnapshotState };
    }
    case "events": {
      if (!Array.isArray(obj.events)) fail("events must be a list");
      return {
        type,
        tick: asNumber(obj.tick, "tick"),
        events: obj.events as SimEvent[],
      };
    }
    case "synth_frame": {
      if (!Array.isArray(obj.voices)) fail("voices must be a list");
      if (!Array.isArray(obj.alerts)) fail("alerts must be a list");
      const voices = obj.voices.map((v) => {
        const vo = asObject(v, "voice");
        return {
          hazard: asString(vo.hazard, "hazard"),
          level: asNumber(vo.level, "level"),
          params: paramsFromWire(vo.params),
        };
      });
      const alerts = obj.alerts.map((a) => {
        const ao = asObject(a, "alert");
        return {
          robot: asString(ao.robot, "robot"),
          hazard: asString(ao.hazard, "hazard"),
          priority: asNumber(ao.priority, "priority"),
          high_active: asBoolean(ao.high_active, "high_active"),
          flanger_active: asBoolean(ao.flanger_active, "flanger_active"),
        };
      });
      const source = obj.source;
      if (source !== null && !Array.isArray(source)) {
        fail("source must be null or [x, y]");
      }
      return {
        type,
        tick: asNumber(obj.tick, "tick"),
        sound_set: asString(obj.sound_set, "sound_set"),
        self_rtl: asBoolean(obj.self_rtl, "self_rtl"),
        coverage_ok: asBoolean(obj.coverage_ok, "coverage_ok"),
        source:
          source === null
            ? null
            : [asNumber(source[0], "source.x"), asNumber(source[1], "source.y")],
        voices,
        alerts,
        phase_clock: asNumber(obj.phase_clock, "phase_clock"),
      };
    }
    case "error":
      return { type, message: asString(obj.message, "message") };
    default:
      fail(`unknown message type ${type}`);
  }
}

export function encodeClient(message: ClientMessage): string {
  return JSON.stringify(message);
}
