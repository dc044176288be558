"""Level-to-parameter mappings for both sound sets.

All tunable synthesis constants live in this one table so the designs can
be revised in a single place. Forward maps take a hazard level in [0, 1]
to voice parameters; the matching analytic inverses are used by the
signal decoder.

Mapping summary (primary parameter per set/hazard):

  cog  radiation    click rate, linear 3 -> 40 clicks/s (grid-jittered);
                    attention chirps admitted above level 0.8
  cog  gas          grain inter-onset interval, linear 1.2 s -> 0.12 s
  cog  temperature  fixed 220 Hz tone; amplitude-LFO 0.5 -> 8 Hz and
                    FM depth 0 -> 60 Hz rise with level
  comp radiation    sine pitch, log-mapped over two octaves 220 -> 880 Hz
  comp gas          white noise, sine amplitude-LFO 0.5 -> 10 Hz
  comp temperature  harmonic stacks at 55/110 Hz (80% PWM on the upper),
                    lowpass log-mapped 100 Hz -> 20 kHz, equal-power
                    low/high crossfade

Pitch and cutoff maps are logarithmic (matching pitch/brightness
perception); all other maps are linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from sonifleet.hazards import HazardType


class SoundSet(Enum):
    COG = "cog"
    COMP = "comp"


class VoiceKind(Enum):
    CLICKS = "clicks"
    GRAINS = "grains"
    TONE_AM_FM = "tone_am_fm"
    TONE = "tone"
    NOISE_AM = "noise_am"
    COMB_BRIGHTNESS = "comb_brightness"


# --- constants table ---------------------------------------------------

SAMPLE_RATE = 48_000
BLOCK_FRAMES = 256
PARAM_RAMP_S = 0.020  # parameter changes ramp over at most this long

# cog radiation (Geiger-style clicks)
CLICK_RATE_MIN = 3.0
CLICK_RATE_MAX = 40.0
# each click is displaced up to this fraction of a period from its grid
# slot: locally irregular rhythm, long-run rate locked to the mapping
CLICK_JITTER_FRAC = 0.35
CHIRP_LEVEL_GATE = 0.8
CHIRP_PROBABILITY = 0.2
CHIRP_DURATION_S = 0.040
CHIRP_F0, CHIRP_F1 = 2000.0, 4000.0

# cog gas (metallic grains)
GRAIN_IOI_MAX_S = 1.2
GRAIN_IOI_MIN_S = 0.12
GRAIN_DURATION_S = 0.120
GRAIN_RESONATOR_HZ = (870.0, 1590.0, 2470.0, 3610.0)  # inharmonic, metallic
GRAIN_RESONATOR_Q = 18.0
GRAIN_PHASER_RATE_HZ = 0.35

# cog temperature (fixed-pitch tone, AM + FM rise)
COG_TEMP_FUNDAMENTAL_HZ = 220.0
COG_TEMP_AM_MIN_HZ = 0.5
COG_TEMP_AM_MAX_HZ = 8.0
COG_TEMP_AM_DEPTH = 0.8
COG_TEMP_FM_RATE_HZ = 220.0  # unison ratio keeps the stack harmonic
COG_TEMP_FM_DEPTH_MAX_HZ = 60.0

# comp radiation (pure sine over two octaves)
COMP_RAD_BASE_HZ = 220.0
COMP_RAD_OCTAVES = 2.0

# comp gas (white noise, sine amplitude beating)
COMP_GAS_AM_MIN_HZ = 0.5
COMP_GAS_AM_MAX_HZ = 10.0

# comp temperature (brightness)
COMP_TEMP_LOW_HZ = 55.0
COMP_TEMP_HIGH_HZ = 110.0
COMP_TEMP_PWM_DUTY = 0.8
COMP_TEMP_LP_MIN_HZ = 100.0
COMP_TEMP_LP_MAX_HZ = 20_000.0

FREQ_CEILING_HZ = 20_000.0


@dataclass(frozen=True)
class SynthParams:
    """Per-voice control parameters; fields unused by a voice stay zero."""

    voice: VoiceKind
    fundamental_hz: float = 0.0
    click_rate_hz: float = 0.0
    chirp_probability: float = 0.0
    am_rate_hz: float = 0.0
    fm_rate_hz: float = 0.0
    fm_depth_hz: float = 0.0
    lowpass_hz: float = 0.0
    gains: tuple[float, ...] = field(default_factory=tuple)
    grain_ioi_s: float = 0.0

    def __post_init__(self):
        for name in ("fundamental_hz", "am_rate_hz", "fm_rate_hz", "lowpass_hz"):
            v = getattr(self, name)
            if not 0.0 <= v <= FREQ_CEILING_HZ:
                raise ValueError(f"{name}={v} outside [0, {FREQ_CEILING_HZ}]")
        if any(g < 0 for g in self.gains):
            raise ValueError("gains must be >= 0")


def _check_level(level: float) -> float:
    if not 0.0 <= level <= 1.0:
        raise ValueError(f"hazard level must be in [0, 1], got {level}")
    return float(level)


# --- forward maps ------------------------------------------------------


def click_rate_for(level: float) -> float:
    return CLICK_RATE_MIN + (CLICK_RATE_MAX - CLICK_RATE_MIN) * level


def grain_ioi_for(level: float) -> float:
    return GRAIN_IOI_MAX_S + (GRAIN_IOI_MIN_S - GRAIN_IOI_MAX_S) * level


def cog_temp_am_rate_for(level: float) -> float:
    return COG_TEMP_AM_MIN_HZ + (COG_TEMP_AM_MAX_HZ - COG_TEMP_AM_MIN_HZ) * level


def comp_rad_pitch_for(level: float) -> float:
    return COMP_RAD_BASE_HZ * 2.0 ** (COMP_RAD_OCTAVES * level)


def comp_gas_am_rate_for(level: float) -> float:
    return COMP_GAS_AM_MIN_HZ + (COMP_GAS_AM_MAX_HZ - COMP_GAS_AM_MIN_HZ) * level


def comp_temp_cutoff_for(level: float) -> float:
    return COMP_TEMP_LP_MIN_HZ * (COMP_TEMP_LP_MAX_HZ / COMP_TEMP_LP_MIN_HZ) ** level


# --- analytic inverses (decoder side) ----------------------------------


def level_from_click_rate(rate: float) -> float:
    return (rate - CLICK_RATE_MIN) / (CLICK_RATE_MAX - CLICK_RATE_MIN)


def level_from_grain_rate(rate: float) -> float:
    ioi = 1.0 / rate
    return (GRAIN_IOI_MAX_S - ioi) / (GRAIN_IOI_MAX_S - GRAIN_IOI_MIN_S)


def level_from_cog_temp_am_rate(rate: float) -> float:
    return (rate - COG_TEMP_AM_MIN_HZ) / (COG_TEMP_AM_MAX_HZ - COG_TEMP_AM_MIN_HZ)


def level_from_comp_rad_pitch(pitch: float) -> float:
    return math.log2(pitch / COMP_RAD_BASE_HZ) / COMP_RAD_OCTAVES


def level_from_comp_gas_am_rate(rate: float) -> float:
    return (rate - COMP_GAS_AM_MIN_HZ) / (COMP_GAS_AM_MAX_HZ - COMP_GAS_AM_MIN_HZ)


def level_from_comp_temp_cutoff(cutoff: float) -> float:
    return math.log(cutoff / COMP_TEMP_LP_MIN_HZ) / math.log(
        COMP_TEMP_LP_MAX_HZ / COMP_TEMP_LP_MIN_HZ
    )


# --- the mapping -------------------------------------------------------


def rtl_params(sound_set: SoundSet, hazard: HazardType, level: float) -> SynthParams:
    """Deterministic (set, hazard, level) -> voice parameters mapping."""
    level = _check_level(level)
    if sound_set is SoundSet.COG:
        if hazard is HazardType.RADIATION:
            return SynthParams(
                voice=VoiceKind.CLICKS,
                click_rate_hz=click_rate_for(level),
                chirp_probability=(
                    CHIRP_PROBABILITY if level > CHIRP_LEVEL_GATE else 0.0
                ),
                gains=(1.0,),
            )
        if hazard is HazardType.FLAMMABLE_GAS:
            return SynthParams(
                voice=VoiceKind.GRAINS,
                grain_ioi_s=grain_ioi_for(level),
                gains=(1.0,),
            )
        return SynthParams(
            voice=VoiceKind.TONE_AM_FM,
            fundamental_hz=COG_TEMP_FUNDAMENTAL_HZ,
            am_rate_hz=cog_temp_am_rate_for(level),
            fm_rate_hz=COG_TEMP_FM_RATE_HZ,
            fm_depth_hz=COG_TEMP_FM_DEPTH_MAX_HZ * level,
            gains=(1.0,),
        )
    if hazard is HazardType.RADIATION:
        return SynthParams(
            voice=VoiceKind.TONE,
            fundamental_hz=comp_rad_pitch_for(level),
            gains=(1.0,),
        )
    if hazard is HazardType.FLAMMABLE_GAS:
        return SynthParams(
            voice=VoiceKind.NOISE_AM,
            am_rate_hz=comp_gas_am_rate_for(level),
            gains=(1.0,),
        )
    crossfade = level * math.pi / 2.0
    return SynthParams(
        voice=VoiceKind.COMB_BRIGHTNESS,
        lowpass_hz=comp_temp_cutoff_for(level),
        gains=(math.cos(crossfade), math.sin(crossfade)),
    )


def primary_parameter(sound_set: SoundSet, hazard: HazardType, level: float) -> float:
    """The single mapped parameter that carries the level for a pair;
    used by monotonicity checks and the decoder's window scoring."""
    p = rtl_params(sound_set, hazard, level)
    if p.voice is VoiceKind.CLICKS:
        return p.click_rate_hz
    if p.voice is VoiceKind.GRAINS:
        return 1.0 / p.grain_ioi_s
    if p.voice is VoiceKind.TONE_AM_FM:
        return p.am_rate_hz
    if p.voice is VoiceKind.TONE:
        return p.fundamental_hz
    if p.voice is VoiceKind.NOISE_AM:
        return p.am_rate_hz
    return p.lowpass_hz
