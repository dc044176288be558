/**
 * Top-down map renderer. Draws only what the latest acknowledged
 * snapshot contains: coverage, revealed objects in their tag-mixed
 * colors, markers, waypoint numbers, robots with status outlines, and
 * the avatar. Renders through a minimal 2D-context interface so tests
 * can record draw calls without a browser canvas.
 */

import type { SnapshotState } from "./protocol.js";
import { type UiState, highAlertRobots, outlineColor } from "./state.js";

/** Subset of CanvasRenderingContext2D the renderer needs; style unions
 * match the DOM types so a real context satisfies the interface. */
export interface Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  textBaseline: CanvasTextBaseline;
  globalAlpha: number;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

export const OUTLINE_STYLES = {
  red: "rgb(255,59,48)",
  orange: "rgb(255,149,0)",
  green: "rgb(52,199,89)",
} as const;

const BACKGROUND = "rgb(17,20,24)";
const GRID_LINE = "rgb(42,47,54)";
const COVERAGE = "rgb(80,160,255)";
const ROBOT_BODY = "rgb(207,216,227)";
const ROBOT_DISABLED = "rgb(85,85,85)";
const AVATAR = "rgb(255,214,10)";
const WAYPOINT = "rgb(52,199,89)";
const TEXT = "rgb(235,238,242)";

const HAZARD_STYLES: Record<string, string> = {
  radiation: "rgb(0,255,0)",
  temperature: "rgb(255,0,0)",
  flammable_gas: "rgb(0,0,255)",
};

export function rgb(color: [number, number, number]): string {
  return `rgb(${color[0]},${color[1]},${color[2]})`;
}

export interface Viewport {
  width: number;
  height: number;
}

class Projector {
  constructor(
    private readonly camera: { x: number; y: number; scale: number },
    private readonly view: Viewport,
  ) {}

  x(wx: number): number {
    return (wx - this.camera.x) * this.camera.scale + this.view.width / 2;
  }

  y(wy: number): number {
    return (wy - this.camera.y) * this.camera.scale + this.view.height / 2;
  }

  get scale(): number {
    return this.camera.scale;
  }
}

function gridExtent(snapshot: SnapshotState): [number, number] {
  let maxX = 0;
  let maxY = 0;
  const consider = (x: number, y: number) => {
    maxX = Math.max(maxX, x + 1);
    maxY = Math.max(maxY, y + 1);
  };
  for (const [x, y] of snapshot.coverage) consider(x, y);
  for (const robot of snapshot.robots) consider(robot.position[0], robot.position[1]);
  for (const obj of snapshot.objects) {
    for (const [x, y] of obj.footprint) consider(x, y);
  }
  consider(snapshot.avatar.position[0], snapshot.avatar.position[1]);
  return [Math.ceil(maxX), Math.ceil(maxY)];
}

function drawGrid(ctx: Draw2D, p: Projector, snapshot: SnapshotState): void {
  const [nx, ny] = gridExtent(snapshot);
  ctx.strokeStyle = GRID_LINE;
  ctx.lineWidth = 1;
  for (let ix = 0; ix <= nx; ix++) {
    ctx.beginPath();
    ctx.moveTo(p.x(ix), p.y(0));
    ctx.lineTo(p.x(ix), p.y(ny));
    ctx.stroke();
  }
  for (let iy = 0; iy <= ny; iy++) {
    ctx.beginPath();
    ctx.moveTo(p.x(0), p.y(iy));
    ctx.lineTo(p.x(nx), p.y(iy));
    ctx.stroke();
  }
}

function drawCoverage(
  ctx: Draw2D,
  p: Projector,
  snapshot: SnapshotState,
): void {
  // in Self-RTL the traversed tiles are the sonifiable data, so the
  // trail is emphasised rather than merely hinted
  ctx.globalAlpha = snapshot.self_rtl ? 0.4 : 0.15;
  ctx.fillStyle = COVERAGE;
  for (const [x, y] of snapshot.coverage) {
    ctx.fillRect(p.x(x), p.y(y), p.scale, p.scale);
  }
  ctx.globalAlpha = 1;
}

function drawObjects(ctx: Draw2D, p: Projector, snapshot: SnapshotState): void {
  for (const obj of snapshot.objects) {
    if (!obj.revealed) continue;
    ctx.fillStyle = rgb(obj.color);
    ctx.strokeStyle = GRID_LINE;
    ctx.lineWidth = 2;
    for (const [x, y] of obj.footprint) {
      ctx.fillRect(p.x(x), p.y(y), p.scale, p.scale);
      ctx.strokeRect(p.x(x), p.y(y), p.scale, p.scale);
    }
  }
}

function drawMarkers(ctx: Draw2D, p: Projector, snapshot: SnapshotState): void {
  const r = p.scale * 0.28;
  for (const marker of snapshot.markers) {
    const cx = p.x(marker.position[0]);
    const cy = p.y(marker.position[1]);
    ctx.fillStyle = HAZARD_STYLES[marker.hazard] ?? TEXT;
    ctx.beginPath();
    ctx.moveTo(cx, cy - r);
    ctx.lineTo(cx + r, cy + r);
    ctx.lineTo(cx - r, cy + r);
    ctx.closePath();
    ctx.fill();
  }
}

function drawWaypoints(ctx: Draw2D, p: Projector, snapshot: SnapshotState): void {
  for (const robot of snapshot.robots) {
    robot.waypoints.forEach(([wx, wy], i) => {
      const cx = p.x(wx);
      const cy = p.y(wy);
      ctx.fillStyle = WAYPOINT;
      ctx.globalAlpha = 0.8;
      ctx.beginPath();
      ctx.arc(cx, cy, p.scale * 0.22, 0, 2 * Math.PI);
      ctx.fill();
      ctx.globalAlpha = 1;
      ctx.fillStyle = TEXT;
      ctx.font = `${Math.max(10, p.scale * 0.35)}px sans-serif`;
      ctx.textAlign = "center";
      ctx.textBaseline = "middle";
      ctx.fillText(String(i + 1), cx, cy);
    });
    if (robot.path.length > 1) {
      ctx.strokeStyle = WAYPOINT;
      ctx.globalAlpha = 0.5;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(p.x(robot.path[0][0] + 0.5), p.y(robot.path[0][1] + 0.5));
      for (const [tx, ty] of robot.path.slice(1)) {
        ctx.lineTo(p.x(tx + 0.5), p.y(ty + 0.5));
      }
      ctx.stroke();
      ctx.globalAlpha = 1;
    }
  }
}

function drawRobots(ctx: Draw2D, p: Projector, state: UiState): void {
  const snapshot = state.snapshot!;
  const highAlert = highAlertRobots(state);
  const r = p.scale * 0.35;
  for (const robot of snapshot.robots) {
    const cx = p.x(robot.position[0]);
    const cy = p.y(robot.position[1]);
    ctx.fillStyle = robot.operative ? ROBOT_BODY : ROBOT_DISABLED;
    ctx.beginPath();
    ctx.arc(cx, cy, r, 0, 2 * Math.PI);
    ctx.fill();

    const heading = (robot.heading_deg * Math.PI) / 180;
    ctx.strokeStyle = BACKGROUND;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(cx, cy);
    ctx.lineTo(cx + r * Math.cos(heading), cy + r * Math.sin(heading));
    ctx.stroke();

    const outline = outlineColor(robot, highAlert);
    if (outline !== null) {
      ctx.strokeStyle = OUTLINE_STYLES[outline];
      ctx.lineWidth = 3;
      ctx.beginPath();
      ctx.arc(cx, cy, r + 3, 0, 2 * Math.PI);
      ctx.stroke();
    }
    if (snapshot.selected === robot.id) {
      ctx.strokeStyle = TEXT;
      ctx.lineWidth = 1.5;
      ctx.beginPath();
      ctx.arc(cx, cy, r + 7, 0, 2 * Math.PI);
      ctx.stroke();
    }

    ctx.fillStyle = TEXT;
    ctx.font = `${Math.max(10, p.scale * 0.3)}px sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(robot.id, cx, cy - r - 8);

    if (state.debugOverlay) {
      // overlay shows what the operator's data actually is: per-robot
      // sensed priorities, not ground-truth fields
      let row = 0;
      for (const [hazard, value] of Object.entries(robot.priority)) {
        ctx.fillStyle = HAZARD_STYLES[hazard] ?? TEXT;
        ctx.fillRect(cx + r + 4, cy - r + row * 5, 20 * value, 3);
        row += 1;
      }
    }
  }
}

function drawAvatar(ctx: Draw2D, p: Projector, snapshot: SnapshotState): void {
  const cx = p.x(snapshot.avatar.position[0]);
  const cy = p.y(snapshot.avatar.position[1]);
  const heading = (snapshot.avatar.heading_deg * Math.PI) / 180;
  const r = p.scale * 0.32;
  ctx.fillStyle = AVATAR;
  ctx.beginPath();
  ctx.moveTo(cx + r * Math.cos(heading), cy + r * Math.sin(heading));
  ctx.lineTo(
    cx + r * 0.7 * Math.cos(heading + 2.5),
    cy + r * 0.7 * Math.sin(heading + 2.5),
  );
  ctx.lineTo(
    cx + r * 0.7 * Math.cos(heading - 2.5),
    cy + r * 0.7 * Math.sin(heading - 2.5),
  );
  ctx.closePath();
  ctx.fill();
  if (snapshot.self_rtl) {
    ctx.strokeStyle = AVATAR;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(cx, cy, r + 4, 0, 2 * Math.PI);
    ctx.stroke();
  }
}

/** Render one frame of the operator map from acknowledged state. */
export function renderMap(ctx: Draw2D, state: UiState, view: Viewport): void {
  ctx.globalAlpha = 1;
  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, view.width, view.height);
  const snapshot = state.snapshot;
  if (snapshot !== null) {
    const p = new Projector(state.camera, view);
    drawGrid(ctx, p, snapshot);
    drawCoverage(ctx, p, snapshot);
    drawObjects(ctx, p, snapshot);
    drawMarkers(ctx, p, snapshot);
    drawWaypoints(ctx, p, snapshot);
    drawRobots(ctx, p, state);
    drawAvatar(ctx, p, snapshot);
  }
  if (state.connection !== "open") {
    // greyed-out console while the session link is down
    ctx.globalAlpha = 0.55;
    ctx.fillStyle = BACKGROUND;
    ctx.fillRect(0, 0, view.width, view.height);
    ctx.globalAlpha = 1;
    ctx.fillStyle = TEXT;
    ctx.font = "16px sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(
      state.connection === "connecting" ? "connecting..." : "connection lost, retrying...",
      view.width / 2,
      view.height / 2,
    );
  }
}
