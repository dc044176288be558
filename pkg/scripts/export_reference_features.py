"""Export reference-renderer feature measurements at a fixed level for
the browser client's synthesis fidelity test.

For every (sound set, hazard) pair this renders a constant-level clip
with the reference voices, measures the mapped feature with the signal
decoder, and writes one JSON fixture. The client test renders the same
parameters through its own graph, measures the same feature, and must
land within the decoder tolerance of these values.

Usage:
  python3 scripts/export_reference_features.py \
      --out frontend/test/fixtures/reference_level05.json
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from sonifleet.audio.params import SAMPLE_RATE, SoundSet, rtl_params
from sonifleet.audio.render import constant_level, render_trajectory
from sonifleet.decoding import decode_level
from sonifleet.hazards import HazardType

TOLERANCE = {SoundSet.COG: 0.10, SoundSet.COMP: 0.05}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--level", type=float, default=0.5)
    parser.add_argument("--duration", type=float, default=16.0)
    parser.add_argument("--seed", type=int, default=5)
    parser.add_argument("--out", type=Path, required=True)
    args = parser.parse_args()

    cases = []
    for sound_set in SoundSet:
        for hazard in HazardType:
            x = render_trajectory(
                sound_set,
                hazard,
                constant_level(args.level),
                args.duration,
                sample_rate=SAMPLE_RATE,
                seed=args.seed,
            )
            level, feature = decode_level(x, SAMPLE_RATE, sound_set, hazard)
            params = rtl_params(sound_set, hazard, args.level)
            cases.append(
                {
                    "sound_set": sound_set.value,
                    "hazard": hazard.value,
                    "voice": params.voice.value,
                    "feature": feature.name,
                    "feature_value": feature.value,
                    "decoded_level": level,
                    "tolerance": TOLERANCE[sound_set],
                }
            )
            print(
                f"{sound_set.value:4s} {hazard.value:13s} "
                f"{feature.name:>14s} = {feature.value:9.3f}  "
                f"level {level:.3f}"
            )

    payload = {
        "sample_rate": SAMPLE_RATE,
        "duration_s": args.duration,
        "level": args.level,
        "seed": args.seed,
        "cases": cases,
    }
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
