/**
 * Client alert audio: interaction grunts, medium rising/falling figures,
 * looped high-priority alerts locked to the shared phase clock, and the
 * flanger applied above the top threshold. Constants match the session
 * host so both ends describe the same earcon table.
 */

import type { Hazard } from "./params.js";
import { TWO_PI } from "./voices.js";

export const GRUNT_DURATION_S = 0.25;
export const MEDIUM_NOTE_S = 0.12;

export const LOOP_NOTE_S = 0.09;
export const LOOP_GAP_S = 0.03;
export const LOOP_NOTES = 5;
export const LOOP_PERIOD_S = LOOP_NOTES * (LOOP_NOTE_S + LOOP_GAP_S);

// deliberately off any musical scale
const LOOP_BASE_HZ: Record<Hazard, number> = {
  radiation: 518.0,
  temperature: 611.0,
  flammable_gas: 437.0,
};
const LOOP_STEP_RATIO = 1.17;

export const FLANGER_VOICES = 4;
export const FLANGER_RATE_HZ = 0.25;
export const FLANGER_BASE_DELAY_S = [0.0012, 0.0025, 0.0041, 0.0058] as const;
export const FLANGER_DEPTH_S = 0.0008;
export const FLANGER_MIX = 0.5;

function fade(
  x: Float64Array,
  sampleRate: number,
  attackS = 0.01,
  releaseS = 0.1,
): Float64Array {
  const n = x.length;
  const a = Math.min(n, Math.trunc(attackS * sampleRate));
  const r = Math.min(n, Math.trunc(releaseS * sampleRate));
  for (let i = 0; i < a; i++) x[i] *= a > 1 ? i / (a - 1) : 0;
  for (let i = 0; i < r; i++) {
    x[n - r + i] *= r > 1 ? 1 - i / (r - 1) : 0;
  }
  return x;
}

/** Tonal grunt preceding a high alert: a short three-harmonic tone with
 * a downward bend. */
export function grunt(sampleRate: number): Float64Array {
  const n = Math.trunc(GRUNT_DURATION_S * sampleRate);
  const out = new Float64Array(n);
  let phase = 0;
  for (let i = 0; i < n; i++) {
    const t = i / sampleRate;
    const f0 = 140 - 30 * (t / GRUNT_DURATION_S);
    phase += (TWO_PI * f0) / sampleRate;
    const tone =
      0.6 * Math.sin(phase) +
      0.3 * Math.sin(2 * phase + 0.5) +
      0.15 * Math.sin(3 * phase + 1.1);
    out[i] = 0.8 * tone * Math.exp(-t / 0.09);
  }
  return fade(out, sampleRate, 0.004, 0.05);
}

/** Two-note figure; interval direction mirrors the priority change. */
export function mediumEarcon(rising: boolean, sampleRate: number): Float64Array {
  const notes = rising ? [392.0, 554.0] : [554.0, 392.0];
  const noteN = Math.trunc(MEDIUM_NOTE_S * sampleRate);
  const out = new Float64Array(noteN * notes.length);
  notes.forEach((f, k) => {
    const part = new Float64Array(noteN);
    for (let i = 0; i < noteN; i++) {
      const t = i / sampleRate;
      part[i] = 0.6 * Math.sin(TWO_PI * f * t) * Math.exp(-t / 0.08);
    }
    out.set(fade(part, sampleRate, 0.005, 0.03), k * noteN);
  });
  return out;
}

/** One period of the ascending five-note high-alert arpeggio. */
function renderLoop(hazard: Hazard, sampleRate: number): Float64Array {
  const period = Math.round(LOOP_PERIOD_S * sampleRate);
  const out = new Float64Array(period);
  const noteN = Math.trunc(LOOP_NOTE_S * sampleRate);
  const slotN = Math.trunc((LOOP_NOTE_S + LOOP_GAP_S) * sampleRate);
  const base = LOOP_BASE_HZ[hazard];
  for (let k = 0; k < LOOP_NOTES; k++) {
    const f = base * LOOP_STEP_RATIO ** k;
    const tone = new Float64Array(noteN);
    for (let i = 0; i < noteN; i++) {
      const t = i / sampleRate;
      tone[i] =
        (Math.sin(TWO_PI * f * t) + 0.35 * Math.sin(TWO_PI * 2.01 * f * t)) *
        Math.exp(-t / 0.05);
    }
    fade(tone, sampleRate, 0.003, 0.02);
    const start = k * slotN;
    for (let i = 0; i < noteN && start + i < period; i++) {
      out[start + i] += 0.55 * tone[i];
    }
  }
  return out;
}

/** Looped alert audio sliced from a precomputed period at the offset
 * given by the shared phase clock, so every concurrently active alert
 * renders sample-aligned. */
export class HighAlertLoop {
  private readonly loops = new Map<Hazard, Float64Array>();

  constructor(readonly sampleRate: number) {}

  block(hazard: Hazard, phaseClockS: number, frames: number): Float64Array {
    let loop = this.loops.get(hazard);
    if (loop === undefined) {
      loop = renderLoop(hazard, this.sampleRate);
      this.loops.set(hazard, loop);
    }
    const period = loop.length;
    const start =
      ((Math.round(phaseClockS * this.sampleRate) % period) + period) % period;
    const out = new Float64Array(frames);
    for (let i = 0; i < frames; i++) out[i] = loop[(start + i) % period];
    return out;
  }
}

/** Multi-voice modulated comb applied to the alert bus while any channel
 * sits above the flanger threshold. Processes in place. */
export class Flanger {
  private history: Float64Array;
  private clock = 0;

  constructor(readonly sampleRate: number) {
    const maxDelay = Math.max(...FLANGER_BASE_DELAY_S) + FLANGER_DEPTH_S;
    this.history = new Float64Array(Math.trunc(maxDelay * sampleRate) + 2);
  }

  process(block: Float64Array): void {
    const n = block.length;
    const h = this.history.length;
    const buf = new Float64Array(h + n);
    buf.set(this.history);
    buf.set(block, h);
    for (let i = 0; i < n; i++) {
      const t = (this.clock + i) / this.sampleRate;
      let wet = 0;
      for (let v = 0; v < FLANGER_VOICES; v++) {
        const phase = TWO_PI * (FLANGER_RATE_HZ * t + v / FLANGER_VOICES);
        const delayS =
          FLANGER_BASE_DELAY_S[v] + FLANGER_DEPTH_S * 0.5 * (1 + Math.sin(phase));
        const pos = h + i - delayS * this.sampleRate;
        const i0 = Math.floor(pos);
        const frac = pos - i0;
        wet += buf[i0] * (1 - frac) + buf[i0 + 1] * frac;
      }
      wet /= FLANGER_VOICES;
      block[i] = (1 - FLANGER_MIX) * block[i] + FLANGER_MIX * wet;
    }
    this.history = buf.slice(buf.length - h);
    this.clock += n;
  }
}
