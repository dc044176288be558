"""Render-decode error matrix over every (sound set, hazard) pair.

The machine analogue of a listening-accuracy table: render constant
levels, decode them back, and tabulate the absolute level error per
pair. Multiple seeds per cell expose stimulus variance (the cog set is
stochastic; the comp set is not).

    python3 scripts/roundtrip_matrix.py --levels 9 --seeds 5 --dur 2 \
        --out roundtrip.csv
"""

from __future__ import annotations

import argparse
import csv
import time

import numpy as np

from sonifleet.audio.params import SAMPLE_RATE, SoundSet
from sonifleet.audio.render import constant_level, render_trajectory
from sonifleet.decoding import decode_level
from sonifleet.hazards import HazardType


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--levels", type=int, default=9, help="level grid size")
    parser.add_argument("--seeds", type=int, default=5, help="renders per cell")
    parser.add_argument("--dur", type=float, default=2.0, help="render seconds")
    parser.add_argument("--out", default=None, help="write per-case rows as CSV")
    args = parser.parse_args()

    grid = np.linspace(0.0, 1.0, args.levels)
    rows = []
    t0 = time.perf_counter()
    for sound_set in SoundSet:
        for hazard in HazardType:
            errors = []
            for level in grid:
                for s in range(args.seeds):
                    seed = 1000 + 7 * len(rows) + s
                    audio = render_trajectory(
                        sound_set,
                        hazard,
                        constant_level(float(level)),
                        args.dur,
                        seed=seed,
                    )
                    decoded, feature = decode_level(
                        audio, SAMPLE_RATE, sound_set, hazard
                    )
                    err = abs(decoded - float(level))
                    errors.append(err)
                    rows.append(
                        {
                            "sound_set": sound_set.value,
                            "hazard": hazard.value,
                            "level": round(float(level), 6),
                            "seed": seed,
                            "feature": feature.name,
                            "feature_value": round(feature.value, 6),
                            "decoded": round(decoded, 6),
                            "abs_error": round(err, 6),
                        }
                    )
            print(
                f"{sound_set.value:4s} {hazard.value:13s} "
                f"mean {np.mean(errors):.4f}  max {np.max(errors):.4f}  "
                f"({len(errors)} cases)"
            )
    print(f"{len(rows)} cases in {time.perf_counter() - t0:.1f} s")

    if args.out:
        with open(args.out, "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
