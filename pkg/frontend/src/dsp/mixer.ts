/**
 * Client-side stereo mixer mirroring the session host's gain, pan, and
 * ducking contract: inverse-distance roll-off with a near-field plateau,
 * constant-power panning from the signed lateral component, a -12 dB
 * duck plus 2 kHz lowpass on non-alert sources while a high alert is
 * active, and a hard mute of RTL audio on untraversed tiles in Self-RTL.
 */

import { ButterworthLowpass } from "./voices.js";
import { Flanger } from "./earcons.js";

export const REF_DIST_M = 2.0;
export const DUCK_DB = -12.0;
export const DUCK_GAIN = 10 ** (DUCK_DB / 20);
export const DUCK_LOWPASS_HZ = 2000.0;

export type MixCategory = "rtl" | "notification" | "alert" | "ui";

export interface SceneSource {
  sourceId: string;
  block: Float64Array;
  category: MixCategory;
  /** World position; null renders head-locked. */
  position: [number, number] | null;
}

export function distanceGain(distance: number, refDist = REF_DIST_M): number {
  return distance > 0 ? Math.min(1, refDist / distance) : 1;
}

/** Constant-power pan from the signed lateral component; azimuth is
 * radians left-positive relative to the listener's facing. */
export function panGains(azimuth: number): [number, number] {
  const lateral = Math.sin(azimuth);
  const angle = ((1 - lateral) * Math.PI) / 4;
  return [Math.cos(angle), Math.sin(angle)];
}

export interface MixFlags {
  highAlertActive?: boolean;
  flangerActive?: boolean;
  selfRtl?: boolean;
  listenerCovered?: boolean;
}

/** Stateful stereo mixer; per-source filter and gain memory keeps
 * block-to-block transitions click-free. */
export class Mixer {
  private readonly duckFilters = new Map<string, ButterworthLowpass>();
  private readonly prevGains = new Map<string, [number, number]>();
  private readonly flangers: [Flanger, Flanger];

  constructor(
    readonly sampleRate: number,
    readonly refDist = REF_DIST_M,
  ) {
    this.flangers = [new Flanger(sampleRate), new Flanger(sampleRate)];
  }

  private targetGains(
    source: SceneSource,
    listenerPos: [number, number],
    listenerHeading: number,
  ): [number, number] {
    if (source.position === null || source.category === "ui") {
      const g = 1 / Math.SQRT2;
      return [g, g];
    }
    const dx = source.position[0] - listenerPos[0];
    const dy = source.position[1] - listenerPos[1];
    const gain = distanceGain(Math.hypot(dx, dy), this.refDist);
    const azimuth = Math.atan2(dy, dx) - listenerHeading;
    const [left, right] = panGains(azimuth);
    return [gain * left, gain * right];
  }

  /** Mix one block of mono sources into [left, right]. */
  mix(
    sources: SceneSource[],
    listenerPos: [number, number],
    listenerHeading = 0,
    flags: MixFlags = {},
  ): [Float64Array, Float64Array] {
    const frames = sources.length ? sources[0].block.length : 0;
    const mainL = new Float64Array(frames);
    const mainR = new Float64Array(frames);
    const alertL = new Float64Array(frames);
    const alertR = new Float64Array(frames);
    const covered = flags.listenerCovered ?? true;

    for (const source of sources) {
      if (source.block.length !== frames) {
        throw new Error("all source blocks must share one length");
      }
      let mono = source.block;
      let [leftT, rightT] = this.targetGains(source, listenerPos, listenerHeading);

      if (flags.selfRtl && source.category === "rtl" && !covered) {
        leftT = rightT = 0; // untraversed tile: no data to sonify
      }

      const ducked = Boolean(flags.highAlertActive) && source.category !== "alert";
      if (ducked) {
        let filter = this.duckFilters.get(source.sourceId);
        if (filter === undefined) {
          filter = new ButterworthLowpass(this.sampleRate, 4);
          filter.setCutoff(DUCK_LOWPASS_HZ);
          this.duckFilters.set(source.sourceId, filter);
        }
        mono = mono.slice();
        filter.process(mono);
        leftT *= DUCK_GAIN;
        rightT *= DUCK_GAIN;
      } else {
        this.duckFilters.delete(source.sourceId);
      }

      const prev = this.prevGains.get(source.sourceId) ?? [leftT, rightT];
      this.prevGains.set(source.sourceId, [leftT, rightT]);
      const outL = source.category === "alert" ? alertL : mainL;
      const outR = source.category === "alert" ? alertR : mainR;
      const step = frames > 1 ? 1 / (frames - 1) : 0;
      for (let i = 0; i < frames; i++) {
        const f = i * step;
        outL[i] += mono[i] * (prev[0] + (leftT - prev[0]) * f);
        outR[i] += mono[i] * (prev[1] + (rightT - prev[1]) * f);
      }
    }

    if (flags.flangerActive) {
      this.flangers[0].process(alertL);
      this.flangers[1].process(alertR);
    }
    const left = new Float64Array(frames);
    const right = new Float64Array(frames);
    for (let i = 0; i < frames; i++) {
      left[i] = Math.max(-1, Math.min(1, mainL[i] + alertL[i]));
      right[i] = Math.max(-1, Math.min(1, mainR[i] + alertR[i]));
    }
    return [left, right];
  }
}
