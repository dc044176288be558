"""Run a scripted scenario and print the event timeline.

Each event prints with its wall-clock offset (tick / tick rate), and
the run ends with per-robot health and the alert-relevant priorities,
so threshold crossings can be read straight off the log.

    python3 scripts/demo_timeline.py --scenario scenarios/demo.json \
        --script scenarios/demo_commands.json --ticks 1600
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from sonifleet.scenario import load_scenario
from sonifleet.sim import run_scripted
from sonifleet.world import compute_priority


def load_script(path: str | Path) -> list[tuple[int, dict]]:
    raw = json.loads(Path(path).read_text())
    entries = raw["commands"] if isinstance(raw, dict) else raw
    return sorted(
        ((int(e["tick"]), dict(e["command"])) for e in entries),
        key=lambda tc: tc[0],
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scenario", default="scenarios/demo.json")
    parser.add_argument("--script", default="scenarios/demo_commands.json")
    parser.add_argument("--ticks", type=int, default=1600)
    args = parser.parse_args()

    scenario = load_scenario(args.scenario)
    script = load_script(args.script) if args.script else []
    sim, events, log = run_scripted(scenario, script, args.ticks)

    rate = sim.constants.tick_rate
    rejected = [entry for entry in log if not entry["accepted"]]
    print(f"{scenario.name}: {sim.tick} ticks at {rate:g}/s, "
          f"{len(log) - len(rejected)}/{len(log)} commands accepted")
    for entry in rejected:
        print(f"  rejected @ tick {entry['tick']}: {entry['command']} "
              f"({entry['reason']})")
    print()
    for event in events:
        d = event.to_dict()
        tick = d.pop("tick")
        kind = d.pop("kind")
        detail = " ".join(f"{k}={v}" for k, v in sorted(d.items()))
        print(f"{tick / rate:8.2f} s  tick {tick:5d}  {kind:22s} {detail}")
    print()
    for robot in sim.robots:
        priorities = compute_priority(
            sim._sense(robot), robot.health, sim.constants
        )
        worst = max((p, hz.value) for hz, p in priorities.items())
        print(f"{robot.id}: health {robot.health:.3f} "
              f"{'operative' if robot.operative else 'disabled'} "
              f"at ({robot.position[0]:.2f}, {robot.position[1]:.2f}), "
              f"top priority {worst[0]:.3f} ({worst[1]})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
