/**
 * Client-side voice bank: six stateful mono renderers matching the
 * reference renderer's constants table. Each voice consumes SynthParams
 * blocks; parameter changes ramp over at most PARAM_RAMP_S so replaying
 * an identical frame is inaudible.
 */

import type { SynthParams, VoiceKind } from "../protocol.js";
import {
  CHIRP_DURATION_S,
  CHIRP_F0,
  CHIRP_F1,
  CLICK_JITTER_FRAC,
  COG_TEMP_AM_DEPTH,
  COMP_TEMP_LOW_HZ,
  COMP_TEMP_HIGH_HZ,
  COMP_TEMP_PWM_DUTY,
  GRAIN_DURATION_S,
  GRAIN_PHASER_RATE_HZ,
  GRAIN_RESONATOR_HZ,
  GRAIN_RESONATOR_Q,
  PARAM_RAMP_S,
  SAMPLE_RATE,
} from "./params.js";

export const TWO_PI = 2 * Math.PI;

export const CLICK_DURATION_S = 0.0015;
export const CLICK_DECAY_S = 0.0004;
export const CLICK_AMP = 0.9;
export const CHIRP_AMP = 0.5;
export const GRAIN_AMP = 0.75;
export const GRAIN_EXCITE_DECAY_S = 0.03;
export const TONE_AMP = 0.8;
export const NOISE_AMP = 0.35;
export const COMB_BAND_HZ = 23_000;
export const COMB_RMS = 0.06;
export const COMB_PEAK_BUDGET = 0.7;

/** Deterministic 32-bit PRNG; the stream only shapes noise textures. */
export class Rng {
  private s: number;
  private spare: number | null = null;

  constructor(seed: number) {
    this.s = seed >>> 0 || 1;
  }

  random(): number {
    let t = (this.s += 0x6d2b79f5);
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  }

  uniform(lo: number, hi: number): number {
    return lo + (hi - lo) * this.random();
  }

  standardNormal(): number {
    if (this.spare !== null) {
      const v = this.spare;
      this.spare = null;
      return v;
    }
    let u = 0;
    while (u === 0) u = this.random();
    const r = Math.sqrt(-2 * Math.log(u));
    const a = TWO_PI * this.random();
    this.spare = r * Math.sin(a);
    return r * Math.cos(a);
  }
}

/** Per-block linear ramp toward the latest target, completing within
 * PARAM_RAMP_S. The first observed value is adopted without a ramp. */
class Slew {
  private readonly rampFrames: number;
  private value: number | null = null;

  constructor(sampleRate: number) {
    this.rampFrames = Math.max(1, Math.round(PARAM_RAMP_S * sampleRate));
  }

  block(target: number, frames: number): Float64Array {
    const out = new Float64Array(frames).fill(target);
    if (this.value === null || this.value === target) {
      this.value = target;
      return out;
    }
    const n = Math.min(frames, this.rampFrames);
    const start = this.value;
    for (let i = 0; i < n; i++) out[i] = start + ((target - start) * i) / n;
    this.value = target;
    return out;
  }
}

/** Pre-increment phases for each sample plus the carried phase. */
function integratePhase(
  phase0: number,
  freq: ArrayLike<number>,
  sampleRate: number,
): { phases: Float64Array; next: number } {
  const n = freq.length;
  const phases = new Float64Array(n);
  let acc = phase0;
  for (let i = 0; i < n; i++) {
    phases[i] = acc;
    acc += (TWO_PI * freq[i]) / sampleRate;
  }
  return { phases, next: acc % TWO_PI };
}

function gainOf(params: SynthParams, index = 0): number {
  return params.gains.length > index ? params.gains[index] : 0;
}

/** Direct-form-II-transposed second-order section with persistent state. */
class Biquad {
  b0 = 1;
  b1 = 0;
  b2 = 0;
  a1 = 0;
  a2 = 0;
  private z1 = 0;
  private z2 = 0;

  process(x: Float64Array): void {
    const { b0, b1, b2, a1, a2 } = this;
    let { z1, z2 } = this;
    for (let i = 0; i < x.length; i++) {
      const xin = x[i];
      const y = b0 * xin + z1;
      z1 = b1 * xin - a1 * y + z2;
      z2 = b2 * xin - a2 * y;
      x[i] = y;
    }
    this.z1 = z1;
    this.z2 = z2;
  }

  /** Bilinear-transformed analog lowpass section with quality factor q. */
  setLowpass(cutoffHz: number, q: number, sampleRate: number): void {
    const k = Math.tan((Math.PI * cutoffHz) / sampleRate);
    const k2 = k * k;
    const d = k2 + k / q + 1;
    this.b0 = k2 / d;
    this.b1 = (2 * k2) / d;
    this.b2 = k2 / d;
    this.a1 = (2 * (k2 - 1)) / d;
    this.a2 = (k2 - k / q + 1) / d;
  }

  /** Unity-gain resonator at w0 with bandwidth w0/q. */
  setPeak(freqHz: number, q: number, sampleRate: number): void {
    const w0 = (Math.PI * 2 * freqHz) / sampleRate;
    const bw = w0 / q;
    const beta = Math.tan(bw / 2);
    const gain = 1 / (1 + beta);
    this.b0 = 1 - gain;
    this.b1 = 0;
    this.b2 = -(1 - gain);
    this.a1 = -2 * gain * Math.cos(w0);
    this.a2 = 2 * gain - 1;
  }
}

/** Butterworth lowpass of order 2 * qs.length as cascaded biquads. */
export class ButterworthLowpass {
  private readonly sections: Biquad[];
  private readonly qs: number[];
  private cutoff: number | null = null;

  constructor(
    private readonly sampleRate: number,
    order: number,
  ) {
    if (order % 2 !== 0) throw new RangeError("order must be even");
    this.qs = [];
    for (let k = 0; k < order / 2; k++) {
      this.qs.push(1 / (2 * Math.cos(((2 * k + 1) * Math.PI) / (2 * order))));
    }
    this.sections = this.qs.map(() => new Biquad());
  }

  /** Retune without resetting filter state; a no-op at equal cutoff. */
  setCutoff(cutoffHz: number): void {
    if (this.cutoff !== null && Math.abs(cutoffHz - this.cutoff) < 1e-9) return;
    this.sections.forEach((s, i) =>
      s.setLowpass(cutoffHz, this.qs[i], this.sampleRate),
    );
    this.cutoff = cutoffHz;
  }

  process(x: Float64Array): void {
    for (const s of this.sections) s.process(x);
  }
}

export abstract class Voice {
  abstract readonly kind: VoiceKind;
  protected readonly rng: Rng;

  constructor(
    readonly sampleRate: number = SAMPLE_RATE,
    seed = 0,
  ) {
    this.rng = new Rng(seed);
  }

  abstract render(params: SynthParams, frames: number): Float64Array;

  protected check(params: SynthParams, frames: number): void {
    if (params.voice !== this.kind) {
      throw new Error(`${this.kind} voice got params for ${params.voice}`);
    }
    if (frames <= 0) throw new RangeError("frames must be > 0");
  }
}

/** Pure sine (comp radiation pitch carrier). */
export class ToneVoice extends Voice {
  readonly kind = "tone";
  private phase = 0;
  private readonly freq: Slew;
  private readonly gain: Slew;

  constructor(sampleRate: number = SAMPLE_RATE, seed = 0) {
    super(sampleRate, seed);
    this.freq = new Slew(sampleRate);
    this.gain = new Slew(sampleRate);
  }

  render(params: SynthParams, frames: number): Float64Array {
    this.check(params, frames);
    const freq = this.freq.block(params.fundamental_hz, frames);
    const gain = this.gain.block(gainOf(params), frames);
    const { phases, next } = integratePhase(this.phase, freq, this.sampleRate);
    this.phase = next;
    const out = new Float64Array(frames);
    for (let i = 0; i < frames; i++) {
      out[i] = TONE_AMP * gain[i] * Math.sin(phases[i]);
    }
    return out;
  }
}

/** Fixed-pitch sine with amplitude LFO and unison-rate vibrato
 * (cog temperature). */
export class ToneAmFmVoice extends Voice {
  readonly kind = "tone_am_fm";
  private carrierPhase = 0;
  private modPhase = 0;
  private amPhase = 0;
  private readonly amRate: Slew;
  private readonly fmDepth: Slew;
  private readonly gain: Slew;

  constructor(sampleRate: number = SAMPLE_RATE, seed = 0) {
    super(sampleRate, seed);
    this.amRate = new Slew(sampleRate);
    this.fmDepth = new Slew(sampleRate);
    this.gain = new Slew(sampleRate);
  }

  render(params: SynthParams, frames: number): Float64Array {
    this.check(params, frames);
    const amRate = this.amRate.block(params.am_rate_hz, frames);
    const fmDepth = this.fmDepth.block(params.fm_depth_hz, frames);
    const gain = this.gain.block(gainOf(params), frames);

    const modFreq = new Float64Array(frames).fill(params.fm_rate_hz);
    const mod = integratePhase(this.modPhase, modFreq, this.sampleRate);
    this.modPhase = mod.next;
    const instFreq = new Float64Array(frames);
    for (let i = 0; i < frames; i++) {
      instFreq[i] = params.fundamental_hz + fmDepth[i] * Math.sin(mod.phases[i]);
    }
    const carrier = integratePhase(this.carrierPhase, instFreq, this.sampleRate);
    this.carrierPhase = carrier.next;
    const am = integratePhase(this.amPhase, amRate, this.sampleRate);
    this.amPhase = am.next;

    const half = COG_TEMP_AM_DEPTH / 2;
    const out = new Float64Array(frames);
    for (let i = 0; i < frames; i++) {
      const envelope = 1 - half + half * Math.cos(am.phases[i]);
      out[i] = TONE_AMP * gain[i] * envelope * Math.sin(carrier.phases[i]);
    }
    return out;
  }
}

/** White noise under a raised-cosine amplitude LFO (comp gas beating). */
export class NoiseAmVoice extends Voice {
  readonly kind = "noise_am";
  private amPhase = 0;
  private readonly amRate: Slew;
  private readonly gain: Slew;

  constructor(sampleRate: number = SAMPLE_RATE, seed = 0) {
    super(sampleRate, seed);
    this.amRate = new Slew(sampleRate);
    this.gain = new Slew(sampleRate);
  }

  render(params: SynthParams, frames: number): Float64Array {
    this.check(params, frames);
    const amRate = this.amRate.block(params.am_rate_hz, frames);
    const gain = this.gain.block(gainOf(params), frames);
    const am = integratePhase(this.amPhase, amRate, this.sampleRate);
    this.amPhase = am.next;
    const out = new Float64Array(frames);
    for (let i = 0; i < frames; i++) {
      const envelope = 0.5 * (1 - Math.cos(am.phases[i]));
      // soft tail clamp keeps rare outlier samples inside +-1 overall
      const z = this.rng.standardNormal();
      const noise = Math.max(-2.5, Math.min(2.5, z)) / 2.5;
      out[i] = NOISE_AMP * gain[i] * envelope * noise;
    }
    return out;
  }
}

/** Shared machinery for event voices (clicks, grains): a schedule of
 * onsets whose waveforms may overhang the block boundary. */
abstract class OnsetVoice extends Voice {
  private untilNext = 0;
  private tail = new Float64Array(0);

  protected abstract intervalSamples(params: SynthParams): number;
  protected abstract waveform(params: SynthParams): Float64Array;
  protected abstract active(params: SynthParams): boolean;

  render(params: SynthParams, frames: number): Float64Array {
    this.check(params, frames);
    const out = new Float64Array(frames);
    const nTail = Math.min(frames, this.tail.length);
    if (nTail) {
      for (let i = 0; i < nTail; i++) out[i] += this.tail[i];
      this.tail = this.tail.slice(nTail);
    }
    if (!this.active(params)) {
      // hold the countdown; events resume when the voice is active
      return out;
    }
    while (this.untilNext < frames) {
      const idx = Math.trunc(this.untilNext);
      const wave = this.waveform(params);
      const nFit = Math.min(wave.length, frames - idx);
      for (let i = 0; i < nFit; i++) out[idx + i] += wave[i];
      if (nFit < wave.length) {
        const overhang = wave.length - nFit;
        if (this.tail.length < overhang) {
          const grown = new Float64Array(overhang);
          grown.set(this.tail);
          this.tail = grown;
        }
        for (let i = 0; i < overhang; i++) this.tail[i] += wave[nFit + i];
      }
      this.untilNext += this.intervalSamples(params);
    }
    this.untilNext -= frames;
    return out;
  }
}

/** Geiger-style clicks: grid-anchored jittered onsets, optional attention
 * chirps above the gate level (cog radiation). Click k sits at (k + j_k)
 * periods, so jitters telescope and the realized rate stays pinned to the
 * commanded rate instead of drifting like a renewal process. */
export class ClicksVoice extends OnsetVoice {
  readonly kind = "clicks";
  private jitterPrev = 0;

  protected active(params: SynthParams): boolean {
    return params.click_rate_hz > 0 && gainOf(params) > 0;
  }

  protected intervalSamples(params: SynthParams): number {
    const jitterNext = this.rng.uniform(-CLICK_JITTER_FRAC, CLICK_JITTER_FRAC);
    const meanS = 1 / params.click_rate_hz;
    const interval = (1 + jitterNext - this.jitterPrev) * meanS;
    this.jitterPrev = jitterNext;
    return Math.max(1, interval * this.sampleRate);
  }

  protected waveform(params: SynthParams): Float64Array {
    const gain = gainOf(params);
    const addChirp =
      params.chirp_probability > 0 && this.rng.random() < params.chirp_probability;
    const n = Math.trunc(CLICK_DURATION_S * this.sampleRate);
    const burst = new Float64Array(n);
    let peak = 0;
    for (let i = 0; i < n; i++) {
      const t = i / this.sampleRate;
      burst[i] = this.rng.standardNormal() * Math.exp(-t / CLICK_DECAY_S);
      peak = Math.max(peak, Math.abs(burst[i]));
    }
    if (peak > 0) for (let i = 0; i < n; i++) burst[i] /= peak;
    for (let i = 0; i < n; i++) burst[i] *= gain * CLICK_AMP;
    if (!addChirp) return burst;
    // chirps are interspersed between clicks, not substituted for them:
    // offset half a period so the click train stays intact
    const offset = Math.trunc((0.5 * this.sampleRate) / params.click_rate_hz);
    const m = Math.trunc(CHIRP_DURATION_S * this.sampleRate);
    const out = new Float64Array(Math.max(n, offset + m));
    out.set(burst);
    for (let i = 0; i < m; i++) {
      const tc = i / this.sampleRate;
      const sweep =
        CHIRP_F0 * tc + ((CHIRP_F1 - CHIRP_F0) * tc * tc) / (2 * CHIRP_DURATION_S);
      const hann = 0.5 - 0.5 * Math.cos((TWO_PI * i) / (m - 1));
      out[offset + i] += gain * CHIRP_AMP * hann * Math.sin(TWO_PI * sweep);
    }
    return out;
  }
}

/** Metallic grains: noise bursts rung through an inharmonic resonator
 * bank with a slow phaser-style shimmer (cog gas). */
export class GrainsVoice extends OnsetVoice {
  readonly kind = "grains";
  private grainCount = 0;

  protected active(params: SynthParams): boolean {
    return params.grain_ioi_s > 0 && gainOf(params) > 0;
  }

  protected intervalSamples(params: SynthParams): number {
    return Math.max(1, params.grain_ioi_s * this.sampleRate);
  }

  protected waveform(params: SynthParams): Float64Array {
    const n = Math.trunc(GRAIN_DURATION_S * this.sampleRate);
    const excitation = new Float64Array(n);
    for (let i = 0; i < n; i++) {
      const t = i / this.sampleRate;
      excitation[i] =
        this.rng.standardNormal() * Math.exp(-t / GRAIN_EXCITE_DECAY_S);
    }
    const rung = new Float64Array(n);
    for (const f of GRAIN_RESONATOR_HZ) {
      const resonator = new Biquad();
      resonator.setPeak(f, GRAIN_RESONATOR_Q, this.sampleRate);
      const branch = excitation.slice();
      resonator.process(branch);
      for (let i = 0; i < n; i++) rung[i] += branch[i];
    }
    let peak = 0;
    for (let i = 0; i < n; i++) peak = Math.max(peak, Math.abs(rung[i]));
    if (peak > 0) for (let i = 0; i < n; i++) rung[i] /= peak;
    // slow sweep shifts each grain's shimmer phase
    this.grainCount += 1;
    const phase =
      TWO_PI * GRAIN_PHASER_RATE_HZ * this.grainCount * params.grain_ioi_s;
    const gain = gainOf(params);
    for (let i = 0; i < n; i++) {
      const t = i / this.sampleRate;
      const shimmer = 1 + 0.4 * Math.sin(TWO_PI * GRAIN_PHASER_RATE_HZ * t + phase);
      rung[i] = (gain * GRAIN_AMP * rung[i] * shimmer) / 1.4;
    }
    return rung;
  }
}

/** sum_{j=1..k} cos(j*theta), closed form, safe at theta = 0 mod 2pi. */
function dirichletCosSum(theta: number, k: number): number {
  const denom = Math.sin(theta / 2);
  if (Math.abs(denom) <= 1e-9) return k;
  return Math.sin((k + 0.5) * theta) / (2 * denom) - 0.5;
}

/** Two flat harmonic combs (55 Hz, and 110 Hz as a differentiated
 * 80%-duty pulse) crossfaded by the gain pair, swept by an 8th-order
 * Butterworth lowpass; overall level is crest-limited so the impulse-like
 * full-band comb never clips (comp temperature). */
export class CombBrightnessVoice extends Voice {
  readonly kind = "comb_brightness";
  private phaseLow = 0;
  private phaseHigh = 0;
  private readonly gainLow: Slew;
  private readonly gainHigh: Slew;
  private readonly kLow: number;
  private readonly kHigh: number;
  private readonly rmsLow: number;
  private readonly rmsHigh: number;
  private readonly dutyAngle: number;
  private readonly lowpass: ButterworthLowpass;

  constructor(sampleRate: number = SAMPLE_RATE, seed = 0) {
    super(sampleRate, seed);
    this.gainLow = new Slew(sampleRate);
    this.gainHigh = new Slew(sampleRate);
    const margin = Math.min(COMB_BAND_HZ, (sampleRate / 2) * 0.96);
    this.kLow = Math.trunc(margin / COMP_TEMP_LOW_HZ);
    this.kHigh = Math.trunc(margin / COMP_TEMP_HIGH_HZ);
    this.rmsLow = Math.sqrt(this.kLow / 2);
    this.dutyAngle = TWO_PI * COMP_TEMP_PWM_DUTY;
    let power = 0;
    for (let j = 1; j <= this.kHigh; j++) {
      power += 2 * Math.sin(0.5 * this.dutyAngle * j) ** 2;
    }
    this.rmsHigh = Math.sqrt(power / 2);
    this.lowpass = new ButterworthLowpass(sampleRate, 8);
  }

  render(params: SynthParams, frames: number): Float64Array {
    this.check(params, frames);
    const gainLow = this.gainLow.block(gainOf(params, 0), frames);
    const gainHigh = this.gainHigh.block(gainOf(params, 1), frames);

    const dphiLow = (TWO_PI * COMP_TEMP_LOW_HZ) / this.sampleRate;
    const dphiHigh = (TWO_PI * COMP_TEMP_HIGH_HZ) / this.sampleRate;
    const out = new Float64Array(frames);
    for (let i = 0; i < frames; i++) {
      const combLow = dirichletCosSum(this.phaseLow, this.kLow) / this.rmsLow;
      const edge =
        (dirichletCosSum(this.phaseHigh, this.kHigh) -
          dirichletCosSum(this.phaseHigh - this.dutyAngle, this.kHigh)) /
        this.rmsHigh;
      out[i] = gainLow[i] * combLow + gainHigh[i] * edge;
      this.phaseLow = (this.phaseLow + dphiLow) % TWO_PI;
      this.phaseHigh = (this.phaseHigh + dphiHigh) % TWO_PI;
    }

    const cutoff = Math.min(
      Math.max(params.lowpass_hz, 10),
      (this.sampleRate / 2) * 0.98,
    );
    this.lowpass.setCutoff(cutoff);
    this.lowpass.process(out);

    const passedFraction = Math.min(
      Math.max(cutoff / COMB_BAND_HZ, COMP_TEMP_LOW_HZ / COMB_BAND_HZ),
      1,
    );
    const makeup = 1 / Math.sqrt(passedFraction);
    const crest = Math.sqrt(
      2 * Math.min(Math.max(cutoff / COMP_TEMP_LOW_HZ, 1), this.kLow),
    );
    const amplitude = Math.min(COMB_RMS, COMB_PEAK_BUDGET / crest);
    for (let i = 0; i < frames; i++) out[i] *= amplitude * makeup;
    return out;
  }
}

export function makeVoice(
  kind: VoiceKind,
  sampleRate: number = SAMPLE_RATE,
  seed = 0,
): Voice {
  switch (kind) {
    case "tone":
      return new ToneVoice(sampleRate, seed);
    case "tone_am_fm":
      return new ToneAmFmVoice(sampleRate, seed);
    case "noise_am":
      return new NoiseAmVoice(sampleRate, seed);
    case "clicks":
      return new ClicksVoice(sampleRate, seed);
    case "grains":
      return new GrainsVoice(sampleRate, seed);
    case "comb_brightness":
      return new CombBrightnessVoice(sampleRate, seed);
  }
}
