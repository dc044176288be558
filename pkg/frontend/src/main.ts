/**
 * Browser bootstrap: binds the session client, the canvas renderer, the
 * input map, and the audio engine together. The audio context starts on
 * the first user gesture and pulls stereo blocks from the engine, which
 * consumes the synth_frame parameter queue.
 */

import { SessionClient } from "./client.js";
import { AudioEngine } from "./dsp/engine.js";
import { keyAction, primaryClick, screenToWorld, secondaryClick } from "./input.js";
import { renderMap } from "./map.js";
import {
  cycleTag,
  panCamera,
  toggleDebugOverlay,
  zoomCamera,
  type UiState,
} from "./state.js";
import type { InputAction } from "./input.js";

const params = new URLSearchParams(window.location.search);
const url =
  params.get("server") ?? `ws://${window.location.hostname || "localhost"}:8765`;

const canvas = document.getElementById("map") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const status = document.getElementById("status")!;

const client = new SessionClient(url, {
  socketFactory: (u) => new WebSocket(u),
});

const engine = new AudioEngine();
let audioStarted = false;

function startAudio(): void {
  if (audioStarted) return;
  audioStarted = true;
  const audio = new AudioContext({ sampleRate: engine.sampleRate });
  const node = audio.createScriptProcessor(1024, 0, 2);
  node.onaudioprocess = (ev) => {
    const [left, right] = engine.renderBlock(ev.outputBuffer.length);
    ev.outputBuffer.getChannelData(0).set(Float32Array.from(left));
    ev.outputBuffer.getChannelData(1).set(Float32Array.from(right));
  };
  node.connect(audio.destination);
  void audio.resume();
}

client.onServerMessage = (message) => {
  if (message.type === "synth_frame") engine.applyFrame(message);
  if (message.type === "snapshot") engine.applySnapshot(message.state);
  if (message.type === "events") engine.applyEvents(message, client.state.soundSet);
};

function describe(state: UiState): string {
  const bits = [
    `link: ${state.connection}`,
    `control: ${state.controlYours ? "yours" : state.controlHeld ? "taken" : "free"}`,
    `tag: ${state.activeTag}`,
  ];
  if (state.scenario) bits.push(`scenario: ${state.scenario} (${state.soundSet})`);
  const snap = state.snapshot;
  if (snap) {
    bits.push(`tick ${snap.tick}`);
    bits.push(snap.selected ? `selected ${snap.selected}` : "no selection");
    if (snap.self_rtl) bits.push("self-RTL");
  }
  if (state.lastRejection) bits.push(`rejected: ${state.lastRejection}`);
  if (state.lastError) bits.push(`error: ${state.lastError}`);
  return bits.join("  |  ");
}

function dispatch(action: InputAction): void {
  switch (action.kind) {
    case "command":
      client.sendCommand(action.command).catch(() => {
        // rejection reasons surface through the ack in the status bar
      });
      break;
    case "cycle_tag":
      client.state = cycleTag(client.state);
      break;
    case "toggle_debug":
      client.state = toggleDebugOverlay(client.state);
      break;
    case "none":
      break;
  }
}

function viewport(): { width: number; height: number } {
  return { width: canvas.width, height: canvas.height };
}

canvas.addEventListener("click", (ev) => {
  startAudio();
  const rect = canvas.getBoundingClientRect();
  const [wx, wy] = screenToWorld(
    client.state.camera,
    viewport(),
    ev.clientX - rect.left,
    ev.clientY - rect.top,
  );
  dispatch(primaryClick(client.state, wx, wy));
});

canvas.addEventListener("contextmenu", (ev) => {
  ev.preventDefault();
  const rect = canvas.getBoundingClientRect();
  const [wx, wy] = screenToWorld(
    client.state.camera,
    viewport(),
    ev.clientX - rect.left,
    ev.clientY - rect.top,
  );
  dispatch(secondaryClick(client.state, wx, wy));
});

window.addEventListener("keydown", (ev) => {
  if (ev.key === "ArrowLeft") client.state = panCamera(client.state, -1, 0);
  else if (ev.key === "ArrowRight") client.state = panCamera(client.state, 1, 0);
  else if (ev.key === "ArrowUp") client.state = panCamera(client.state, 0, -1);
  else if (ev.key === "ArrowDown") client.state = panCamera(client.state, 0, 1);
  else dispatch(keyAction(client.state, ev.key));
});

canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  client.state = zoomCamera(client.state, ev.deltaY < 0 ? 1.15 : 1 / 1.15);
});

function resize(): void {
  canvas.width = canvas.clientWidth;
  canvas.height = canvas.clientHeight;
}
window.addEventListener("resize", resize);
resize();

function frame(): void {
  // recenter on first snapshot so the scene is in view
  const snap = client.state.snapshot;
  if (snap && client.state.camera.x === 0 && client.state.camera.y === 0) {
    client.state = {
      ...client.state,
      camera: {
        ...client.state.camera,
        x: snap.avatar.position[0],
        y: snap.avatar.position[1],
      },
    };
  }
  renderMap(ctx, client.state, viewport());
  status.textContent = describe(client.state);
  requestAnimationFrame(frame);
}

client.connect();
requestAnimationFrame(frame);
