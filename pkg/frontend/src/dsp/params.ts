/**
 * Level-to-parameter mappings for both sound sets, mirroring the
 * reference renderer's constants table. Forward maps take a hazard
 * level in [0, 1] to voice parameters; the analytic inverses convert
 * measured features back to levels for fidelity checks.
 *
 * Pitch and cutoff maps are logarithmic (matching pitch/brightness
 * perception); all other maps are linear.
 */

import type { SynthParams, VoiceKind } from "../protocol.js";

export type SoundSet = "cog" | "comp";
export type Hazard = "radiation" | "temperature" | "flammable_gas";

export const HAZARDS: readonly Hazard[] = [
  "radiation",
  "temperature",
  "flammable_gas",
];

export const SAMPLE_RATE = 48_000;
export const BLOCK_FRAMES = 256;
export const PARAM_RAMP_S = 0.02;

// cog radiation (Geiger-style clicks)
export const CLICK_RATE_MIN = 3.0;
export const CLICK_RATE_MAX = 40.0;
// each click is displaced up to this fraction of a period from its grid
// slot: locally irregular rhythm, long-run rate locked to the mapping
export const CLICK_JITTER_FRAC = 0.35;
export const CHIRP_LEVEL_GATE = 0.8;
export const CHIRP_PROBABILITY = 0.2;
export const CHIRP_DURATION_S = 0.04;
export const CHIRP_F0 = 2000.0;
export const CHIRP_F1 = 4000.0;

// cog gas (metallic grains)
export const GRAIN_IOI_MAX_S = 1.2;
export const GRAIN_IOI_MIN_S = 0.12;
export const GRAIN_DURATION_S = 0.12;
export const GRAIN_RESONATOR_HZ = [870.0, 1590.0, 2470.0, 3610.0] as const;
export const GRAIN_RESONATOR_Q = 18.0;
export const GRAIN_PHASER_RATE_HZ = 0.35;

// cog temperature (fixed-pitch tone, AM + FM rise)
export const COG_TEMP_FUNDAMENTAL_HZ = 220.0;
export const COG_TEMP_AM_MIN_HZ = 0.5;
export const COG_TEMP_AM_MAX_HZ = 8.0;
export const COG_TEMP_AM_DEPTH = 0.8;
export const COG_TEMP_FM_RATE_HZ = 220.0;
export const COG_TEMP_FM_DEPTH_MAX_HZ = 60.0;

// comp radiation (pure sine over two octaves)
export const COMP_RAD_BASE_HZ = 220.0;
export const COMP_RAD_OCTAVES = 2.0;

// comp gas (white noise, sine amplitude beating)
export const COMP_GAS_AM_MIN_HZ = 0.5;
export const COMP_GAS_AM_MAX_HZ = 10.0;

// comp temperature (brightness)
export const COMP_TEMP_LOW_HZ = 55.0;
export const COMP_TEMP_HIGH_HZ = 110.0;
export const COMP_TEMP_PWM_DUTY = 0.8;
export const COMP_TEMP_LP_MIN_HZ = 100.0;
export const COMP_TEMP_LP_MAX_HZ = 20_000.0;

export function clickRateFor(level: number): number {
  return CLICK_RATE_MIN + (CLICK_RATE_MAX - CLICK_RATE_MIN) * level;
}

export function grainIoiFor(level: number): number {
  return GRAIN_IOI_MAX_S + (GRAIN_IOI_MIN_S - GRAIN_IOI_MAX_S) * level;
}

export function cogTempAmRateFor(level: number): number {
  return COG_TEMP_AM_MIN_HZ + (COG_TEMP_AM_MAX_HZ - COG_TEMP_AM_MIN_HZ) * level;
}

export function compRadPitchFor(level: number): number {
  return COMP_RAD_BASE_HZ * 2 ** (COMP_RAD_OCTAVES * level);
}

export function compGasAmRateFor(level: number): number {
  return COMP_GAS_AM_MIN_HZ + (COMP_GAS_AM_MAX_HZ - COMP_GAS_AM_MIN_HZ) * level;
}

export function compTempCutoffFor(level: number): number {
  return COMP_TEMP_LP_MIN_HZ * (COMP_TEMP_LP_MAX_HZ / COMP_TEMP_LP_MIN_HZ) ** level;
}

export function levelFromClickRate(rate: number): number {
  return (rate - CLICK_RATE_MIN) / (CLICK_RATE_MAX - CLICK_RATE_MIN);
}

export function levelFromGrainRate(rate: number): number {
  const ioi = 1.0 / rate;
  return (GRAIN_IOI_MAX_S - ioi) / (GRAIN_IOI_MAX_S - GRAIN_IOI_MIN_S);
}

export function levelFromCogTempAmRate(rate: number): number {
  return (rate - COG_TEMP_AM_MIN_HZ) / (COG_TEMP_AM_MAX_HZ - COG_TEMP_AM_MIN_HZ);
}

export function levelFromCompRadPitch(pitch: number): number {
  return Math.log2(pitch / COMP_RAD_BASE_HZ) / COMP_RAD_OCTAVES;
}

export function levelFromCompGasAmRate(rate: number): number {
  return (rate - COMP_GAS_AM_MIN_HZ) / (COMP_GAS_AM_MAX_HZ - COMP_GAS_AM_MIN_HZ);
}

export function levelFromCompTempCutoff(cutoff: number): number {
  return (
    Math.log(cutoff / COMP_TEMP_LP_MIN_HZ) /
    Math.log(COMP_TEMP_LP_MAX_HZ / COMP_TEMP_LP_MIN_HZ)
  );
}

function checkLevel(level: number): number {
  if (!(level >= 0 && level <= 1)) {
    throw new RangeError(`hazard level must be in [0, 1], got ${level}`);
  }
  return level;
}

function zeroParams(voice: VoiceKind): SynthParams {
  return {
    voice,
    fundamental_hz: 0,
    click_rate_hz: 0,
    chirp_probability: 0,
    am_rate_hz: 0,
    fm_rate_hz: 0,
    fm_depth_hz: 0,
    lowpass_hz: 0,
    gains: [1],
    grain_ioi_s: 0,
  };
}

/** Deterministic (set, hazard, level) -> voice parameters mapping. */
export function rtlParams(
  soundSet: SoundSet,
  hazard: Hazard,
  level: number,
): SynthParams {
  level = checkLevel(level);
  if (soundSet === "cog") {
    if (hazard === "radiation") {
      return {
        ...zeroParams("clicks"),
        click_rate_hz: clickRateFor(level),
        chirp_probability: level > CHIRP_LEVEL_GATE ? CHIRP_PROBABILITY : 0,
      };
    }
    if (hazard === "flammable_gas") {
      return { ...zeroParams("grains"), grain_ioi_s: grainIoiFor(level) };
    }
    return {
      ...zeroParams("tone_am_fm"),
      fundamental_hz: COG_TEMP_FUNDAMENTAL_HZ,
      am_rate_hz: cogTempAmRateFor(level),
      fm_rate_hz: COG_TEMP_FM_RATE_HZ,
      fm_depth_hz: COG_TEMP_FM_DEPTH_MAX_HZ * level,
    };
  }
  if (hazard === "radiation") {
    return { ...zeroParams("tone"), fundamental_hz: compRadPitchFor(level) };
  }
  if (hazard === "flammable_gas") {
    return { ...zeroParams("noise_am"), am_rate_hz: compGasAmRateFor(level) };
  }
  const crossfade = (level * Math.PI) / 2;
  return {
    ...zeroParams("comb_brightness"),
    lowpass_hz: compTempCutoffFor(level),
    gains: [Math.cos(crossfade), Math.sin(crossfade)],
  };
}
