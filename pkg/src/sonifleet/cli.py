"""Command-line surface: headless scripted runs, offline renders,
synthetic listening studies, the live session host, and scenario lint.

Every subcommand is seeded and reproducible; `simulate` and `study`
write byte-identical outputs when re-run with the same arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from sonifleet.audio.params import SoundSet, primary_parameter, rtl_params
from sonifleet.audio.render import (
    constant_level,
    render_trajectory,
    write_manifest,
    write_wav,
)
from sonifleet.hazards import HazardType
from sonifleet.scenario import ScenarioError, load_scenario
from sonifleet.sim import run_scripted
from sonifleet.study import (
    DEFAULT_DURATION_S,
    DEFAULT_SIGMA,
    DEFAULT_TRIALS_PER_SOUND,
    run_study,
)

PORT_ENV = "SONIFLEET_PORT"
DEFAULT_PORT = 8765
DEFAULT_SIMULATE_TICKS = 1600

# short names accepted anywhere a hazard is named on the command line
HAZARD_ALIASES = {
    "rad": HazardType.RADIATION,
    "temp": HazardType.TEMPERATURE,
    "gas": HazardType.FLAMMABLE_GAS,
}


def parse_hazard(name: str) -> HazardType:
    if name in HAZARD_ALIASES:
        return HAZARD_ALIASES[name]
    try:
        return HazardType(name)
    except ValueError:
        choices = sorted(h.value for h in HazardType) + sorted(HAZARD_ALIASES)
        raise SystemExit(f"unknown hazard {name!r}; choose from {choices}")


def default_port() -> int:
    raw = os.environ.get(PORT_ENV, "")
    return int(raw) if raw.isdigit() else DEFAULT_PORT


def load_script(path: str | Path) -> list[tuple[int, dict]]:
    """Script files hold {"commands": [{"tick": n, "command": {...}}]}."""
    raw = json.loads(Path(path).read_text())
    entries = raw["commands"] if isinstance(raw, dict) else raw
    script = []
    for entry in entries:
        script.append((int(entry["tick"]), dict(entry["command"])))
    return sorted(script, key=lambda tc: tc[0])


# --- subcommands ----------------------------------------------------------


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    script = load_script(args.script) if args.script else []
    sim, events, log = run_scripted(scenario, script, args.ticks)
    kinds = [e.kind.value for e in events]
    payload = {
        "scenario": scenario.name,
        "seed": scenario.seed,
        "ticks": sim.tick,
        "command_log": log,
        "events": [e.to_dict() for e in events],
        "metrics": {
            "events_by_kind": {k: kinds.count(k) for k in sorted(set(kinds))},
            "coverage_fraction": round(float(sim.world.coverage.mean()), 6),
            "markers": len(sim.world.markers),
            "robots": {
                r.id: {
                    "health": round(r.health, 6),
                    "operative": r.operative,
                    "position": [round(r.position[0], 6), round(r.position[1], 6)],
                }
                for r in sim.robots
            },
        },
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    accepted = sum(1 for entry in log if entry["accepted"])
    print(
        f"{sim.tick} ticks, {len(events)} events, "
        f"{accepted}/{len(log)} commands accepted",
        file=sys.stderr,
    )
    return 0


def cmd_render(args) -> int:
    sound_set = SoundSet(args.set)
    hazard = parse_hazard(args.hazard)
    if args.trajectory:
        points = json.loads(Path(args.trajectory).read_text())
        times = [float(p[0]) for p in points]
        values = [float(p[1]) for p in points]
        if times != sorted(times):
            raise SystemExit("trajectory times must be non-decreasing")
        level_fn = lambda t: float(np.interp(t, times, values))
        levels: list | float = points
    else:
        level_fn = constant_level(args.level)
        levels = args.level
    samples = render_trajectory(
        sound_set, hazard, level_fn, args.dur, seed=args.seed
    )
    out = Path(args.out)
    write_wav(out, samples)
    write_manifest(
        out.with_suffix(".json"), sound_set, hazard, args.seed, args.dur, levels
    )
    if not args.trajectory:
        value = primary_parameter(sound_set, hazard, args.level)
        voice = rtl_params(sound_set, hazard, args.level).voice.value
        print(f"voice {voice}, primary parameter {value:g}")
    print(f"wrote {out} ({args.dur:g} s, {sound_set.value}/{hazard.value})")
    return 0


def cmd_study(args) -> int:
    manifest = run_study(
        seed=args.seed,
        out_dir=args.out,
        participants=args.participants,
        n_per_sound=args.trials_per_sound,
        sigma=args.sigma,
        duration_s=args.duration,
        write_audio=not args.no_audio,
    )
    print(
        f"{manifest['n_trials']} trials, "
        f"{manifest['participants']} participants, "
        f"removed {manifest['removed_participants'] or 'none'}"
    )
    scores = Path(args.out) / "scores.csv"
    sys.stdout.write(scores.read_text())
    return 0


def cmd_serve(args) -> int:
    from sonifleet.service import run_server

    try:
        run_server(
            args.scenario,
            sound_set=SoundSet(args.set),
            host=args.host,
            port=args.port,
        )
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_validate(args) -> int:
    scenario = load_scenario(args.scenario)
    print(
        f"{scenario.name}: {scenario.grid.width}x{scenario.grid.height} grid, "
        f"{len(scenario.robots)} robots, {len(scenario.field.spheres)} spheres, "
        f"{len(scenario.objects)} objects"
    )
    return 0


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sonifleet",
        description="multi-robot hazard sonification: simulate, render, "
        "study, serve, validate",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="headless scripted run")
    p.add_argument("--scenario", default="scenarios/demo.json")
    p.add_argument("--script", default=None, help="command script JSON")
    p.add_argument("--ticks", type=int, default=DEFAULT_SIMULATE_TICKS)
    p.add_argument("--out", default=None, help="write the full log as JSON")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("render", help="render one voice to a WAV file")
    p.add_argument("--set", choices=[s.value for s in SoundSet], required=True)
    p.add_argument("--hazard", required=True)
    p.add_argument("--level", type=float, default=0.5)
    p.add_argument("--trajectory", default=None, help="JSON [[t, level], ...]")
    p.add_argument("--dur", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="render.wav")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("study", help="synthetic listening study")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default="study_out")
    p.add_argument("--participants", type=int, default=2)
    p.add_argument("--trials-per-sound", type=int, default=DEFAULT_TRIALS_PER_SOUND)
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    p.add_argument("--duration", type=float, default=DEFAULT_DURATION_S)
    p.add_argument("--no-audio", action="store_true", help="skip stimulus WAVs")
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("serve", help="run the live session host")
    p.add_argument("--scenario", default="scenarios/demo.json")
    p.add_argument("--set", choices=[s.value for s in SoundSet], default="cog")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=default_port())
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("validate", help="scenario lint")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"missing file: {exc.filename or exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"bad JSON input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
