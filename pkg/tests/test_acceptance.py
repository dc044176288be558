"""Release gates, one test per gate so the run prints one verdict line
for each:

  1. mapping endpoints measured from rendered audio (< 1 min)
  2. render -> decode round trip, 6 pairs x 9 levels, 2 s renders (< 2 min)
  3. study scoring against a hand-computed 12-participant fixture
  4. plan_path cost equality with a brute-force oracle on 200 grids
  5. alert machine event sequence, hysteresis, shared loop phase
  6. mixer ducking, distance law, stress-scene limiting, coverage gate
  7. byte-identical reruns of the simulate and study commands

Each gate measures through public interfaces only and checks against
independent oracles or hand-planted expectations, never against the
code path under test.
"""

import math
import time
from pathlib import Path

import numpy as np

from sonifleet.audio.alerts import AlertEventKind, AlertState
from sonifleet.audio.earcons import HighAlertLoop
from sonifleet.audio.mixer import REF_DIST_M, MixCategory, Mixer, SceneSource
from sonifleet.audio.params import SAMPLE_RATE, SoundSet, level_from_comp_temp_cutoff
from sonifleet.audio.render import constant_level, render_trajectory
from sonifleet.cli import main as cli_main
from sonifleet.decoding import decode_level
from sonifleet.hazards import GridSpec, HazardType
from sonifleet.pathing import path_cost, plan_path
from sonifleet.study import SOUND_ORDER, score

from oracles import (
    dijkstra_cost_oracle,
    dominant_frequency,
    random_cost_grid,
    rms_db,
    spectral_rolloff,
)

SR = SAMPLE_RATE
REPO = Path(__file__).resolve().parent.parent


def _beat_rate(x: np.ndarray, sample_rate: int) -> float:
    """Envelope beat rate: rectify, mean-pool to 200 Hz, FFT peak."""
    env = np.abs(np.asarray(x, dtype=float))
    factor = int(sample_rate / 200.0)
    n = len(env) // factor
    env = env[: n * factor].reshape(n, factor).mean(axis=1)
    env -= env.mean()
    return dominant_frequency(env, 200.0, fmin=0.1, fmax=15.0)


def test_mapping_endpoints():
    """Gate 1: the four endpoint figures, read back from audio."""
    t0 = time.perf_counter()

    # comp gas: envelope beats 0.5 Hz at level 0 and 10 Hz at level 1,
    # within 5%; 16 s gives the slow endpoint eight cycles to average
    for level, expect in ((0.0, 0.5), (1.0, 10.0)):
        x = render_trajectory(
            SoundSet.COMP,
            HazardType.FLAMMABLE_GAS,
            constant_level(level),
            16.0,
            seed=11,
        )
        rate = _beat_rate(x, SR)
        assert abs(rate - expect) <= 0.05 * expect, (level, rate)

    # comp temperature: 95%-energy rolloff at the cutoff endpoints. A
    # rolloff statistic of a 100 Hz-lowpassed comb necessarily reads a
    # little above the corner, so the level-0 gate is "inverts to the
    # bottom 5% of the level scale"; the level-1 gate is literal.
    x0 = render_trajectory(
        SoundSet.COMP, HazardType.TEMPERATURE, constant_level(0.0), 2.0, seed=12
    )
    x1 = render_trajectory(
        SoundSet.COMP, HazardType.TEMPERATURE, constant_level(1.0), 2.0, seed=12
    )
    low = spectral_rolloff(x0, SR, 0.95)
    high = spectral_rolloff(x1, SR, 0.95)
    assert level_from_comp_temp_cutoff(low) <= 0.05, low
    assert high >= 18_000.0, high

    # comp radiation: top/bottom pitch ratio spans two octaves
    pitch = {}
    for level in (0.0, 1.0):
        x = render_trajectory(
            SoundSet.COMP, HazardType.RADIATION, constant_level(level), 2.0, seed=13
        )
        pitch[level] = dominant_frequency(x, SR, fmin=100.0, fmax=2000.0)
    assert abs(pitch[1.0] / pitch[0.0] - 4.00) <= 0.05, pitch

    # cog temperature: the fundamental stays parked at 220 Hz at every
    # level; intensity rides on the modulators, not the pitch
    for level in np.linspace(0.0, 1.0, 9):
        x = render_trajectory(
            SoundSet.COG,
            HazardType.TEMPERATURE,
            constant_level(float(level)),
            2.0,
            seed=14,
        )
        f = dominant_frequency(x, SR, fmin=150.0, fmax=300.0)
        assert abs(f - 220.0) <= 1.0, (level, f)

    assert time.perf_counter() - t0 < 60.0


# decoder error budget per pair: tonal, cutoff and beat readings are
# tight; event-rate and modulation-rise readings get twice the room
ROUND_TRIP_TOL = {
    (SoundSet.COG, HazardType.RADIATION): 0.10,  # click rate
    (SoundSet.COG, HazardType.FLAMMABLE_GAS): 0.10,  # grain rate
    (SoundSet.COG, HazardType.TEMPERATURE): 0.10,  # AM/FM rise
    (SoundSet.COMP, HazardType.RADIATION): 0.05,  # pitch
    (SoundSet.COMP, HazardType.FLAMMABLE_GAS): 0.05,  # beat
    (SoundSet.COMP, HazardType.TEMPERATURE): 0.05,  # cutoff
}


def test_round_trip_54_cases():
    """Gate 2: decode(render(level)) stays inside the error budget for
    all 6 pairs at 9 levels, on 2 s renders."""
    t0 = time.perf_counter()
    failures = []
    case = 0
    for sound_set in SoundSet:
        for hazard in HazardType:
            tol = ROUND_TRIP_TOL[(sound_set, hazard)]
            for level in np.linspace(0.0, 1.0, 9):
                level = float(level)
                x = render_trajectory(
                    sound_set,
                    hazard,
                    constant_level(level),
                    2.0,
                    seed=100 + case,
                )
                decoded, _ = decode_level(x, SR, sound_set, hazard)
                err = abs(decoded - level)
                if err > tol:
                    failures.append(
                        f"{sound_set.value}/{hazard.value} level {level:.3f}: "
                        f"decoded {decoded:.3f}, err {err:.4f} > {tol}"
                    )
                case += 1
    elapsed = time.perf_counter() - t0
    assert case == 54
    assert not failures, f"{len(failures)}/54 cases out of budget: " + "; ".join(
        failures
    )
    assert elapsed < 120.0


def test_study_pipeline_oracle():
    """Gate 3: scoring reproduces a hand-computed table exactly and the
    3-sigma rule removes exactly the planted outlier."""
    # 12 participants x 6 sounds, one trial per cell so every
    # participant-sound error IS its planted value; participant 7 is an
    # extreme outlier on the third sound only
    base = [[0.05 + 0.02 * ((p + j) % 5) for j in range(6)] for p in range(12)]
    base[7][2] = 4.0
    responses, keys, grouping = [], [], []
    for p in range(12):
        for j, (sound_set, hazard) in enumerate(SOUND_ORDER):
            keys.append(0.0)
            responses.append(base[p][j])  # |response - key| == planted error
            grouping.append((f"p{p:02d}", sound_set, hazard))

    rows, removed = score(responses, keys, grouping)

    assert removed == ["p07"]
    assert len(rows) == 6
    kept_ids = [p for p in range(12) if p != 7]
    for j, row in enumerate(rows):
        assert (row.sound_set, row.hazard) == SOUND_ORDER[j]
        assert row.n_participants == 11  # whole-participant removal
        vals = [base[p][j] for p in kept_ids]
        roots = np.sqrt(np.array(vals))
        assert row.mean_abs_error == float(np.mean(vals))
        assert row.mean_sqrt_error == float(np.mean(roots))
        assert row.sd_sqrt_error == float(np.std(roots, ddof=1))


def test_pathfinding_equivalence_200_grids():
    """Gate 4: plan_path total cost matches brute-force Dijkstra on 200
    random grids, including unreachable goals, 100% of cases."""
    rng = np.random.default_rng(20260816)
    mismatches = []
    for i in range(200):
        cost, blocked, start, goal = random_cost_grid(rng)
        path = plan_path(cost, blocked, start, goal)
        oracle = dijkstra_cost_oracle(cost, blocked, start, goal)
        if path:
            ok = math.isclose(
                path_cost(cost, path), oracle, rel_tol=1e-9, abs_tol=1e-9
            )
        else:
            ok = math.isinf(oracle)
        if not ok:
            mismatches.append(i)
    assert not mismatches, f"{len(mismatches)}/200 grids disagree: {mismatches[:5]}"


def test_alert_machine_trace_and_phase():
    """Gate 5: the canonical priority trace yields exactly the expected
    event groups, falling edges respect the 0.03 hysteresis band, and
    concurrent high alerts render at a zero-sample loop offset."""
    key = ("r1", HazardType.RADIATION)
    state = AlertState()

    def kinds(p: float) -> list[AlertEventKind]:
        return [e.kind for e in state.update({key: p})]

    assert kinds(0.4) == []
    assert kinds(0.6) == [AlertEventKind.MEDIUM_RISING]
    assert kinds(0.92) == [AlertEventKind.GRUNT, AlertEventKind.HIGH_ENTER]
    assert kinds(0.96) == [AlertEventKind.FLANGER_ENTER]
    assert kinds(0.4) == [
        AlertEventKind.FLANGER_EXIT,
        AlertEventKind.HIGH_EXIT,
        AlertEventKind.MEDIUM_FALLING,
    ]

    # each falling edge waits for 0.03 below its threshold
    state = AlertState()
    for p in (0.6, 0.92, 0.96):
        state.update({key: p})
    assert kinds(0.93) == []  # inside the flanger band (> 0.92)
    assert kinds(0.91) == [AlertEventKind.FLANGER_EXIT]
    assert kinds(0.88) == []  # inside the high band (> 0.87)
    assert kinds(0.86) == [AlertEventKind.HIGH_EXIT]
    assert kinds(0.48) == []  # inside the medium band (> 0.47)
    assert kinds(0.46) == [AlertEventKind.MEDIUM_FALLING]

    # two alerts entering 0.35 s apart still share the loop clock, so
    # their rendered loops sit at a zero-sample offset
    shared = AlertState()
    shared.update({("r1", HazardType.RADIATION): 0.96})
    for _ in range(7):
        shared.advance_clock(0.05)
    shared.update({("r2", HazardType.RADIATION): 0.96})
    assert shared.any_high_active and shared.any_flanger_active
    loops = HighAlertLoop()
    a = loops.block(HazardType.RADIATION, shared.phase_clock, 4096)
    b = loops.block(HazardType.RADIATION, shared.phase_clock, 4096)
    corr = np.correlate(a - a.mean(), b - b.mean(), mode="full")
    assert int(np.argmax(corr)) - (len(a) - 1) == 0
    assert np.array_equal(a, b)


def _tone(freq: float = 500.0, frames: int = SR // 2, amp: float = 0.5):
    t = np.arange(frames) / SR
    return amp * np.sin(2 * np.pi * freq * t)


def _settle(mixer, sources, *args, blocks: int = 3, **kwargs):
    """Run a few blocks so gain ramps and filters reach steady state."""
    for _ in range(blocks):
        out = mixer.mix(sources, *args, **kwargs)
    return out


def test_mixer_contract():
    """Gate 6: ducking depth, the inverse-distance law at twice the
    reference distance, the limiter under a 12-alert stress scene, and
    Self-RTL silence over untraversed tiles."""
    # ducking: -12 dB +/- 1 on a probe below the duck lowpass corner
    probe = [SceneSource("s", _tone(), MixCategory.RTL, position=(0.0, 0.0))]
    quiet = _settle(Mixer(), probe, (0.0, 0.0), 0.0)
    ducked = _settle(Mixer(), probe, (0.0, 0.0), 0.0, high_alert_active=True)
    drop = rms_db(ducked[:, 0]) - rms_db(quiet[:, 0])
    assert abs(drop - (-12.0)) <= 1.0, drop

    # inverse distance: gain at 2 x ref distance is 0.5 +/- 0.01
    near = _settle(
        Mixer(),
        [SceneSource("s", _tone(), MixCategory.RTL, position=(REF_DIST_M, 0.0))],
        (0.0, 0.0),
        0.0,
    )
    far = _settle(
        Mixer(),
        [SceneSource("s", _tone(), MixCategory.RTL, position=(2 * REF_DIST_M, 0.0))],
        (0.0, 0.0),
        0.0,
    )
    ratio = float(np.sqrt(np.mean(far**2) / np.mean(near**2)))
    assert abs(ratio - 0.5) <= 0.01, ratio

    # stress: 12 concurrent phase-locked alerts through the flanger at
    # the listener's position; the final limiter must hold every sample
    # inside full scale
    loops = HighAlertLoop()
    mixer = Mixer()
    frames = SR // 4
    clock, peak, heard = 0.0, 0.0, False
    for _ in range(8):
        sources = [
            SceneSource(
                f"alert-r{r}-{hazard.value}",
                loops.block(hazard, clock, frames),
                MixCategory.ALERT,
                position=(0.0, 0.0),
            )
            for r in range(4)
            for hazard in HazardType
        ]
        assert len(sources) == 12
        out = mixer.mix(
            sources,
            (0.0, 0.0),
            0.0,
            high_alert_active=True,
            flanger_active=True,
        )
        peak = max(peak, float(np.max(np.abs(out))))
        heard = heard or float(np.max(np.abs(out))) > 0.1
        clock += frames / SR
    assert peak <= 1.0, peak
    assert heard  # the scene is loud, not silenced

    # Self-RTL over a tile no robot has traversed is silent
    grid = GridSpec(width=10, height=10)
    coverage = np.zeros((10, 10), dtype=bool)
    src = [SceneSource("rtl", _tone(), MixCategory.RTL, position=(5.5, 5.5))]
    out = _settle(
        Mixer(),
        src,
        (5.5, 5.5),
        0.0,
        self_rtl=True,
        coverage=coverage,
        grid=grid,
    )
    assert float(np.max(np.abs(out))) == 0.0


def test_determinism_simulate_and_study(tmp_path):
    """Gate 7: fixed-seed simulate and study runs are byte-identical."""
    sim_logs = []
    for run in range(2):
        out = tmp_path / f"sim{run}.json"
        rc = cli_main(
            [
                "simulate",
                "--scenario",
                str(REPO / "scenarios" / "demo.json"),
                "--script",
                str(REPO / "scenarios" / "demo_commands.json"),
                "--ticks",
                "300",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        sim_logs.append(out.read_bytes())
    assert sim_logs[0] == sim_logs[1]

    study_dirs = []
    for run in range(2):
        out_dir = tmp_path / f"study{run}"
        rc = cli_main(
            [
                "study",
                "--seed",
                "3",
                "--out",
                str(out_dir),
                "--participants",
                "1",
                "--trials-per-sound",
                "1",
                "--duration",
                "4",
                "--no-audio",
            ]
        )
        assert rc == 0
        study_dirs.append(out_dir)
    for name in ("trials.csv", "scores.csv", "manifest.json"):
        a = (study_dirs[0] / name).read_bytes()
        b = (study_dirs[1] / name).read_bytes()
        assert a == b, f"{name} differs between identical-seed runs"
