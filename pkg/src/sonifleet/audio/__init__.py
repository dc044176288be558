"""Dual sound-set sonification engine: level-to-parameter mappings,
block-based synthesis voices, alert and earcon machinery, scene mixing,
and the offline renderer."""

from sonifleet.audio.params import SoundSet, SynthParams, VoiceKind, rtl_params

__all__ = ["SoundSet", "SynthParams", "VoiceKind", "rtl_params"]
