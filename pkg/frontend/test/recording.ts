/** Recording Draw2D implementation: captures draw calls with the style
 * active at call time so tests can assert on rendered output without a
 * browser canvas. */

import type { Draw2D } from "../src/map.js";

export interface DrawOp {
  op: string;
  fillStyle: string;
  strokeStyle: string;
  args: number[];
  text?: string;
}

export class RecordingContext implements Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern = "";
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  lineWidth = 1;
  font = "";
  textAlign: CanvasTextAlign = "start";
  textBaseline: CanvasTextBaseline = "alphabetic";
  globalAlpha = 1;
  ops: DrawOp[] = [];

  private push(op: string, args: number[], text?: string): void {
    this.ops.push({
      op,
      fillStyle: String(this.fillStyle),
      strokeStyle: String(this.strokeStyle),
      args,
      text,
    });
  }

  fillRect(x: number, y: number, w: number, h: number): void {
    this.push("fillRect", [x, y, w, h]);
  }

  strokeRect(x: number, y: number, w: number, h: number): void {
    this.push("strokeRect", [x, y, w, h]);
  }

  beginPath(): void {
    this.push("beginPath", []);
  }

  moveTo(x: number, y: number): void {
    this.push("moveTo", [x, y]);
  }

  lineTo(x: number, y: number): void {
    this.push("lineTo", [x, y]);
  }

  arc(x: number, y: number, r: number, a0: number, a1: number): void {
    this.push("arc", [x, y, r, a0, a1]);
  }

  closePath(): void {
    this.push("closePath", []);
  }

  fill(): void {
    this.push("fill", []);
  }

  stroke(): void {
    this.push("stroke", []);
  }

  fillText(text: string, x: number, y: number): void {
    this.push("fillText", [x, y], text);
  }
}
