"""Render a listening bank: every (sound set, hazard) pair at a few
levels, plus one rising sweep per pair, as WAV files with JSON
manifests.

    python3 scripts/render_bank.py --out bank --levels 0 0.5 1 --dur 4
"""

from __future__ import annotations

import argparse
from pathlib import Path

from sonifleet.audio.params import SoundSet
from sonifleet.audio.render import (
    constant_level,
    render_trajectory,
    write_manifest,
    write_wav,
)
from sonifleet.hazards import HazardType


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="bank", help="output directory")
    parser.add_argument(
        "--levels", type=float, nargs="+", default=[0.0, 0.5, 1.0]
    )
    parser.add_argument("--dur", type=float, default=4.0, help="seconds per clip")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    for sound_set in SoundSet:
        for hazard in HazardType:
            for level in args.levels:
                name = f"{sound_set.value}-{hazard.value}-{level:g}"
                audio = render_trajectory(
                    sound_set,
                    hazard,
                    constant_level(level),
                    args.dur,
                    seed=args.seed,
                )
                write_wav(out / f"{name}.wav", audio)
                write_manifest(
                    out / f"{name}.json",
                    sound_set,
                    hazard,
                    args.seed,
                    args.dur,
                    [(0.0, level), (args.dur, level)],
                )
                count += 1
            # one full rise so the mapping direction is audible
            name = f"{sound_set.value}-{hazard.value}-sweep"
            audio = render_trajectory(
                sound_set,
                hazard,
                lambda t: t / args.dur,
                args.dur,
                seed=args.seed,
            )
            write_wav(out / f"{name}.wav", audio)
            write_manifest(
                out / f"{name}.json",
                sound_set,
                hazard,
                args.seed,
                args.dur,
                [(0.0, 0.0), (args.dur, 1.0)],
            )
            count += 1
    print(f"wrote {count} clips to {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
