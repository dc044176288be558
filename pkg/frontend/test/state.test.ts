import { describe, expect, it } from "vitest";

import { keyAction, primaryClick, screenToWorld, secondaryClick } from "../src/input.js";
import { renderMap, rgb } from "../src/map.js";
import type { RobotState, SnapshotState, SynthFrame } from "../src/protocol.js";
import {
  TAG_CYCLE,
  cycleTag,
  highAlertRobots,
  initialState,
  outlineColor,
  reduce,
  selectedRobot,
  setConnection,
  type UiState,
} from "../src/state.js";
import { RecordingContext } from "./recording.js";

function makeRobot(over: Partial<RobotState> = {}): RobotState {
  return {
    id: "r1",
    position: [2.5, 2.5],
    heading_deg: 0,
    mode: "autonomous",
    health: 1,
    operative: true,
    halted: false,
    priority: { radiation: 0, temperature: 0, flammable_gas: 0 },
    waypoints: [],
    path: [],
    path_blocked: false,
    ...over,
  };
}

function makeSnapshot(over: Partial<SnapshotState> = {}): SnapshotState {
  return {
    tick: 1,
    selected: null,
    self_rtl: false,
    avatar: { position: [1.5, 1.5], heading_deg: 0 },
    robots: [makeRobot()],
    objects: [],
    markers: [],
    coverage: [[1, 1]],
    ...over,
  };
}

function withSnapshot(snapshot: SnapshotState): UiState {
  return reduce(initialState(), { type: "snapshot", state: snapshot });
}

describe("view state reducers", () => {
  it("cycles the tag color in a fixed order and wraps", () => {
    let state = initialState();
    const seen = [state.activeTag];
    for (let i = 0; i < TAG_CYCLE.length; i++) {
      state = cycleTag(state);
      seen.push(state.activeTag);
    }
    expect(seen).toEqual(["red", "green", "blue", "clear", "red"]);
  });

  it("keeps only the newest snapshot and drops stale ticks", () => {
    let state = withSnapshot(makeSnapshot({ tick: 5 }));
    state = reduce(state, { type: "snapshot", state: makeSnapshot({ tick: 4 }) });
    expect(state.snapshot?.tick).toBe(5);
    state = reduce(state, { type: "snapshot", state: makeSnapshot({ tick: 6 }) });
    expect(state.snapshot?.tick).toBe(6);
  });

  it("does not mutate the previous state", () => {
    const before = initialState();
    const frozen = JSON.stringify(before);
    reduce(before, { type: "control", held: true, yours: true });
    cycleTag(before);
    setConnection(before, "lost");
    expect(JSON.stringify(before)).toBe(frozen);
  });

  it("drops control claims when the link is lost", () => {
    let state = reduce(initialState(), { type: "control", held: true, yours: true });
    state = setConnection(state, "open");
    expect(state.controlYours).toBe(true);
    state = setConnection(state, "lost");
    expect(state.controlHeld).toBe(false);
    expect(state.controlYours).toBe(false);
  });

  it("tracks rejection reasons from acks", () => {
    let state = reduce(initialState(), {
      type: "ack",
      seq: 1,
      accepted: false,
      reason: "no robot",
    });
    expect(state.lastRejection).toBe("no robot");
    state = reduce(state, { type: "ack", seq: 2, accepted: true, reason: null });
    expect(state.lastRejection).toBeNull();
  });
});

describe("status outlines", () => {
  it("keeps exactly one robot selected, straight from the snapshot", () => {
    const state = withSnapshot(
      makeSnapshot({
        selected: "r2",
        robots: [makeRobot(), makeRobot({ id: "r2", mode: "rtl" })],
      }),
    );
    expect(selectedRobot(state)?.id).toBe("r2");
  });

  it("colors a priority 0.92 robot red even without audio traffic", () => {
    const robot = makeRobot({ priority: { radiation: 0.92 } });
    const state = withSnapshot(makeSnapshot({ robots: [robot] }));
    expect(outlineColor(robot, highAlertRobots(state))).toBe("red");
  });

  it("colors RTL orange, waypoint green, calm autonomous none", () => {
    const none = new Set<string>();
    expect(outlineColor(makeRobot({ mode: "rtl" }), none)).toBe("orange");
    expect(outlineColor(makeRobot({ mode: "waypoint" }), none)).toBe("green");
    expect(outlineColor(makeRobot(), none)).toBe(null);
  });

  it("prefers the alert channel state from the synth frame", () => {
    const frame: SynthFrame = {
      type: "synth_frame",
      tick: 2,
      sound_set: "cog",
      self_rtl: false,
      coverage_ok: true,
      source: null,
      voices: [],
      alerts: [
        {
          robot: "r1",
          hazard: "radiation",
          priority: 0.91,
          high_active: true,
          flanger_active: false,
        },
      ],
      phase_clock: 0.1,
    };
    const robot = makeRobot({ mode: "rtl", priority: { radiation: 0.89 } });
    let state = withSnapshot(makeSnapshot({ robots: [robot] }));
    state = reduce(state, frame);
    // hysteresis holds the channel high below the threshold; the
    // outline follows the authoritative channel, not the raw priority
    expect(outlineColor(robot, highAlertRobots(state))).toBe("red");
  });
});

describe("input mapping", () => {
  const object = {
    id: "crate-x",
    footprint: [[3, 2]] as [number, number][],
    revealed: true,
    tags: [],
    color: [128, 128, 128] as [number, number, number],
  };

  it("round-trips screen and world coordinates", () => {
    const camera = { x: 5, y: 7, scale: 32 };
    const view = { width: 800, height: 600 };
    const [wx, wy] = screenToWorld(camera, view, 400, 300);
    expect(wx).toBeCloseTo(5);
    expect(wy).toBeCloseTo(7);
  });

  it("clicking a robot requests the selection cycle", () => {
    const state = withSnapshot(makeSnapshot());
    const action = primaryClick(state, 2.4, 2.6);
    expect(action).toEqual({
      kind: "command",
      command: { type: "select_robot", robot: "r1" },
    });
  });

  it("clicking a revealed object applies the active tag color", () => {
    const state = withSnapshot(makeSnapshot({ objects: [object] }));
    expect(primaryClick(state, 3.5, 2.5)).toEqual({
      kind: "command",
      command: { type: "tag", object: "crate-x", tag: "temperature" },
    });
    const greenState = cycleTag(state);
    expect(primaryClick(greenState, 3.5, 2.5)).toEqual({
      kind: "command",
      command: { type: "tag", object: "crate-x", tag: "radiation" },
    });
    const clearState = cycleTag(cycleTag(greenState));
    expect(primaryClick(clearState, 3.5, 2.5)).toEqual({
      kind: "command",
      command: { type: "tag", object: "crate-x", tag: "clear_all" },
    });
  });

  it("ignores unrevealed objects and teleports instead", () => {
    const hidden = { ...object, revealed: false };
    const state = withSnapshot(makeSnapshot({ objects: [hidden] }));
    expect(primaryClick(state, 3.5, 2.5)).toEqual({
      kind: "command",
      command: { type: "move_avatar", position: [3.5, 2.5] },
    });
  });

  it("appends a waypoint for a selected robot in waypoint mode", () => {
    const robot = makeRobot({
      mode: "waypoint",
      waypoints: [[4.5, 4.5]],
    });
    const state = withSnapshot(makeSnapshot({ selected: "r1", robots: [robot] }));
    expect(primaryClick(state, 6.5, 7.5)).toEqual({
      kind: "command",
      command: {
        type: "set_waypoints",
        robot: "r1",
        waypoints: [
          [4.5, 4.5],
          [6.5, 7.5],
        ],
      },
    });
  });

  it("secondary click clears the nearest waypoint, 1-indexed", () => {
    const robot = makeRobot({
      mode: "waypoint",
      waypoints: [
        [4.5, 4.5],
        [6.5, 7.5],
      ],
    });
    const state = withSnapshot(makeSnapshot({ selected: "r1", robots: [robot] }));
    expect(secondaryClick(state, 6.4, 7.4)).toEqual({
      kind: "command",
      command: { type: "clear_waypoint", robot: "r1", index: 2 },
    });
    expect(secondaryClick(state, 9.0, 9.0)).toEqual({ kind: "none" });
  });

  it("maps keys to self-RTL, go, rotate, and tag cycling", () => {
    const robot = makeRobot({ mode: "waypoint", halted: true });
    const state = withSnapshot(makeSnapshot({ selected: "r1", robots: [robot] }));
    expect(keyAction(state, "r")).toEqual({
      kind: "command",
      command: { type: "self_rtl" },
    });
    expect(keyAction(state, "g")).toEqual({
      kind: "command",
      command: { type: "go", robot: "r1" },
    });
    expect(keyAction(state, "e")).toEqual({
      kind: "command",
      command: { type: "rotate_avatar", steps: 1 },
    });
    expect(keyAction(state, "q")).toEqual({
      kind: "command",
      command: { type: "rotate_avatar", steps: -1 },
    });
    expect(keyAction(state, "t")).toEqual({ kind: "cycle_tag" });
    expect(keyAction(state, "z")).toEqual({ kind: "none" });
  });
});

describe("map rendering", () => {
  const view = { width: 640, height: 480 };

  it("fills revealed objects with the server's mixed color", () => {
    const object = {
      id: "crate-x",
      footprint: [[3, 2]] as [number, number][],
      revealed: true,
      tags: ["radiation", "temperature"],
      color: [255, 255, 0] as [number, number, number],
    };
    const state = setConnection(
      withSnapshot(makeSnapshot({ objects: [object] })),
      "open",
    );
    const ctx = new RecordingContext();
    renderMap(ctx, state, view);
    const fills = ctx.ops.filter(
      (op) => op.op === "fillRect" && op.fillStyle === "rgb(255,255,0)",
    );
    expect(fills.length).toBe(1);
  });

  it("omits unrevealed objects entirely", () => {
    const object = {
      id: "crate-x",
      footprint: [[3, 2]] as [number, number][],
      revealed: false,
      tags: [],
      color: [128, 128, 128] as [number, number, number],
    };
    const state = setConnection(
      withSnapshot(makeSnapshot({ objects: [object] })),
      "open",
    );
    const ctx = new RecordingContext();
    renderMap(ctx, state, view);
    expect(
      ctx.ops.some(
        (op) => op.op === "fillRect" && op.fillStyle === "rgb(128,128,128)",
      ),
    ).toBe(false);
  });

  it("draws the red outline for a high-alert robot", () => {
    const robot = makeRobot({ priority: { radiation: 0.92 } });
    const state = setConnection(withSnapshot(makeSnapshot({ robots: [robot] })), "open");
    const ctx = new RecordingContext();
    renderMap(ctx, state, view);
    const redStrokes = ctx.ops.filter(
      (op) => op.op === "stroke" && op.strokeStyle === "rgb(255,59,48)",
    );
    expect(redStrokes.length).toBe(1);
  });

  it("numbers waypoints from one", () => {
    const robot = makeRobot({
      mode: "waypoint",
      waypoints: [
        [4.5, 4.5],
        [6.5, 7.5],
      ],
    });
    const state = setConnection(
      withSnapshot(makeSnapshot({ selected: "r1", robots: [robot] })),
      "open",
    );
    const ctx = new RecordingContext();
    renderMap(ctx, state, view);
    const labels = ctx.ops.filter((op) => op.op === "fillText").map((op) => op.text);
    expect(labels).toContain("1");
    expect(labels).toContain("2");
  });

  it("greys the console while disconnected", () => {
    const state = setConnection(withSnapshot(makeSnapshot()), "lost");
    const ctx = new RecordingContext();
    renderMap(ctx, state, view);
    const texts = ctx.ops.filter((op) => op.op === "fillText");
    expect(texts.some((op) => op.text?.includes("connection lost"))).toBe(true);
  });

  it("formats rgb triples for canvas styles", () => {
    expect(rgb([255, 255, 0])).toBe("rgb(255,255,0)");
  });
});
