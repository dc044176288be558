/**
 * Client audio graph core: consumes acknowledged synth_frame and events
 * messages and renders stereo blocks. Pure sample-domain code with no
 * WebAudio dependency so the same engine runs in the browser callback
 * and in offline tests; applying the same frame twice is inaudible.
 */

import type {
  EventsMessage,
  SnapshotState,
  SynthFrame,
  SynthParams,
} from "../protocol.js";
import type { Hazard, SoundSet } from "./params.js";
import { SAMPLE_RATE, rtlParams } from "./params.js";
import { HighAlertLoop, grunt, mediumEarcon } from "./earcons.js";
import { Mixer, type SceneSource } from "./mixer.js";
import { Voice, makeVoice } from "./voices.js";

export const NOTIFICATION_LEVEL = 0.7;
export const NOTIFICATION_DURATION_S = 0.8;

const DEG = Math.PI / 180;

interface OneShot {
  sourceId: string;
  samples: Float64Array;
  cursor: number;
}

function fadeEdges(x: Float64Array, sampleRate: number): Float64Array {
  const a = Math.min(x.length, Math.trunc(0.01 * sampleRate));
  const r = Math.min(x.length, Math.trunc(0.1 * sampleRate));
  for (let i = 0; i < a; i++) x[i] *= a > 1 ? i / (a - 1) : 0;
  for (let i = 0; i < r; i++) x[x.length - r + i] *= r > 1 ? 1 - i / (r - 1) : 0;
  return x;
}

export class AudioEngine {
  private readonly mixer: Mixer;
  private readonly loop: HighAlertLoop;
  private readonly voices = new Map<string, Voice>();
  private frame: SynthFrame | null = null;
  private snapshot: SnapshotState | null = null;
  private oneShots: OneShot[] = [];
  private samplesSinceFrame = 0;
  private oneShotSeq = 0;

  constructor(readonly sampleRate: number = SAMPLE_RATE) {
    this.mixer = new Mixer(sampleRate);
    this.loop = new HighAlertLoop(sampleRate);
  }

  /** Adopt the latest parameter frame. Identical reapplication keeps
   * every voice target and the phase base unchanged. */
  applyFrame(frame: SynthFrame): void {
    if (this.frame === null || frame.phase_clock !== this.frame.phase_clock) {
      this.samplesSinceFrame = 0;
    }
    this.frame = frame;
  }

  applySnapshot(state: SnapshotState): void {
    this.snapshot = state;
  }

  /** Queue one-shot earcons for this tick's simulation events. */
  applyEvents(message: EventsMessage, soundSet: SoundSet): void {
    for (const ev of message.events) {
      switch (ev.kind) {
        case "grunt":
          this.pushOneShot(grunt(this.sampleRate));
          break;
        case "medium_alert_rising":
          this.pushOneShot(mediumEarcon(true, this.sampleRate));
          break;
        case "medium_alert_falling":
          this.pushOneShot(mediumEarcon(false, this.sampleRate));
          break;
        case "hazard_first_encounter":
          if (typeof ev.hazard === "string") {
            this.pushOneShot(
              this.notification(soundSet, ev.hazard as Hazard),
            );
          }
          break;
        default:
          break;
      }
    }
  }

  /** Short snippet of the (set, hazard) RTL voice at a fixed reference
   * level, faded in and out; under one second. */
  private notification(soundSet: SoundSet, hazard: Hazard): Float64Array {
    const params = rtlParams(soundSet, hazard, NOTIFICATION_LEVEL);
    const voice = makeVoice(params.voice, this.sampleRate, 7);
    const frames = Math.trunc(NOTIFICATION_DURATION_S * this.sampleRate);
    return fadeEdges(voice.render(params, frames), this.sampleRate);
  }

  private pushOneShot(samples: Float64Array): void {
    this.oneShotSeq += 1;
    this.oneShots.push({
      sourceId: `oneshot:${this.oneShotSeq}`,
      samples,
      cursor: 0,
    });
  }

  private voiceFor(hazard: string, params: SynthParams): Voice {
    const key = `${hazard}:${params.voice}`;
    let voice = this.voices.get(key);
    if (voice === undefined) {
      voice = makeVoice(params.voice, this.sampleRate, key.length);
      this.voices.set(key, voice);
    }
    return voice;
  }

  /** Render one stereo block from the latest acknowledged state. */
  renderBlock(frames: number): [Float64Array, Float64Array] {
    const frame = this.frame;
    if (frame === null) {
      return [new Float64Array(frames), new Float64Array(frames)];
    }
    const sources: SceneSource[] = [];
    for (const vf of frame.voices) {
      const voice = this.voiceFor(vf.hazard, vf.params);
      sources.push({
        sourceId: `rtl:${vf.hazard}`,
        block: voice.render(vf.params, frames),
        category: "rtl",
        position: frame.source,
      });
    }

    // the shared phase clock plus local sample time keeps concurrently
    // active alert loops sample-aligned across robots
    const clock = frame.phase_clock + this.samplesSinceFrame / this.sampleRate;
    const robotPos = new Map<string, [number, number]>();
    for (const robot of this.snapshot?.robots ?? []) {
      robotPos.set(robot.id, robot.position);
    }
    let highActive = false;
    let flangerActive = false;
    for (const alert of frame.alerts) {
      highActive ||= alert.high_active;
      flangerActive ||= alert.flanger_active;
      if (!alert.high_active) continue;
      sources.push({
        sourceId: `alert:${alert.robot}:${alert.hazard}`,
        block: this.loop.block(alert.hazard as Hazard, clock, frames),
        category: "alert",
        position: robotPos.get(alert.robot) ?? null,
      });
    }

    const keep: OneShot[] = [];
    for (const shot of this.oneShots) {
      const n = Math.min(frames, shot.samples.length - shot.cursor);
      const block = new Float64Array(frames);
      block.set(shot.samples.subarray(shot.cursor, shot.cursor + n));
      shot.cursor += n;
      sources.push({
        sourceId: shot.sourceId,
        block,
        category: "notification",
        position: null,
      });
      if (shot.cursor < shot.samples.length) keep.push(shot);
    }
    this.oneShots = keep;

    if (sources.length === 0) {
      this.samplesSinceFrame += frames;
      return [new Float64Array(frames), new Float64Array(frames)];
    }

    const avatar = this.snapshot?.avatar;
    const listener: [number, number] = avatar ? avatar.position : [0, 0];
    const heading = avatar ? avatar.heading_deg * DEG : 0;
    const out = this.mixer.mix(sources, listener, heading, {
      highAlertActive: highActive,
      flangerActive,
      selfRtl: frame.self_rtl,
      listenerCovered: frame.coverage_ok,
    });
    this.samplesSinceFrame += frames;
    return out;
  }
}
