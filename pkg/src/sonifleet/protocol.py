"""Wire protocol for the teleop session channel, version 1.

Messages are JSON objects with a `type` tag. Client to server:

  acquire_control               {}                 request the control slot
  release_control               {}                 give the control slot back
  command   {seq, command}      wraps one simulation command dict; every
                                command is acknowledged with an `ack`

Server to client:

  welcome      {protocol, scenario, sound_set, tick_rate}
  control      {held, yours}    control-slot state, per recipient
  ack          {seq, accepted, reason}
  snapshot     {state}          full world snapshot; state.tick increases
                                strictly
  events       {tick, events}   simulation events raised this tick
  synth_frame  {tick, sound_set, self_rtl, coverage_ok, source, voices,
                alerts, phase_clock}
                                per-voice synthesis parameters; clients
                                synthesize locally, audio never crosses
                                the wire
  error        {message}        protocol violation diagnostic

Simulation command dicts (the `command` field) are the ones accepted by
Simulation.apply_command: select_robot, self_rtl, set_waypoints,
clear_waypoint, go, tag, move_avatar, rotate_avatar.

encode/decode round-trip every message type to an equal value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

from sonifleet.audio.params import SynthParams, VoiceKind

PROTOCOL_VERSION = 1


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class AcquireControl:
    kind = "acquire_control"


@dataclass(frozen=True)
class ReleaseControl:
    kind = "release_control"


@dataclass(frozen=True)
class CommandMessage:
    kind = "command"
    seq: int
    command: dict


@dataclass(frozen=True)
class Welcome:
    kind = "welcome"
    protocol: int
    scenario: str
    sound_set: str
    tick_rate: float


@dataclass(frozen=True)
class ControlState:
    kind = "control"
    held: bool
    yours: bool


@dataclass(frozen=True)
class Ack:
    kind = "ack"
    seq: int
    accepted: bool
    reason: str | None


@dataclass(frozen=True)
class Snapshot:
    kind = "snapshot"
    state: dict

    @property
    def tick(self) -> int:
        return self.state["tick"]


@dataclass(frozen=True)
class Events:
    kind = "events"
    tick: int
    events: list


@dataclass(frozen=True)
class SynthFrame:
    kind = "synth_frame"
    tick: int
    sound_set: str
    self_rtl: bool
    coverage_ok: bool
    source: list | None
    voices: list
    alerts: list
    phase_clock: float


@dataclass(frozen=True)
class ErrorMessage:
    kind = "error"
    message: str


MESSAGE_TYPES = (
    AcquireControl,
    ReleaseControl,
    CommandMessage,
    Welcome,
    ControlState,
    Ack,
    Snapshot,
    Events,
    SynthFrame,
    ErrorMessage,
)

_REGISTRY = {cls.kind: cls for cls in MESSAGE_TYPES}

Message = (
    AcquireControl
    | ReleaseControl
    | CommandMessage
    | Welcome
    | ControlState
    | Ack
    | Snapshot
    | Events
    | SynthFrame
    | ErrorMessage
)


def encode(message: Message) -> str:
    payload = {"type": message.kind}
    for f in fields(message):
        payload[f.name] = getattr(message, f.name)
    return json.dumps(payload, sort_keys=True)


def decode(raw: str | bytes) -> Message:
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ProtocolError("message must be a JSON object")
    kind = payload.pop("type", None)
    cls = _REGISTRY.get(kind)
    if cls is None:
        raise ProtocolError(f"unknown message type {kind!r}")
    expected = {f.name for f in fields(cls)}
    missing = expected - payload.keys()
    extra = payload.keys() - expected
    if missing:
        raise ProtocolError(f"{kind}: missing fields {sorted(missing)}")
    if extra:
        raise ProtocolError(f"{kind}: unexpected fields {sorted(extra)}")
    return cls(**payload)


# --- SynthParams over the wire -------------------------------------------


def params_to_wire(params: SynthParams) -> dict:
    return {
        "voice": params.voice.value,
        "fundamental_hz": params.fundamental_hz,
        "click_rate_hz": params.click_rate_hz,
        "chirp_probability": params.chirp_probability,
        "am_rate_hz": params.am_rate_hz,
        "fm_rate_hz": params.fm_rate_hz,
        "fm_depth_hz": params.fm_depth_hz,
        "lowpass_hz": params.lowpass_hz,
        "gains": list(params.gains),
        "grain_ioi_s": params.grain_ioi_s,
    }


def params_from_wire(payload: dict) -> SynthParams:
    try:
        return SynthParams(
            voice=VoiceKind(payload["voice"]),
            fundamental_hz=payload["fundamental_hz"],
            click_rate_hz=payload["click_rate_hz"],
            chirp_probability=payload["chirp_probability"],
            am_rate_hz=payload["am_rate_hz"],
            fm_rate_hz=payload["fm_rate_hz"],
            fm_depth_hz=payload["fm_depth_hz"],
            lowpass_hz=payload["lowpass_hz"],
            gains=tuple(payload["gains"]),
            grain_ioi_s=payload["grain_ioi_s"],
        )
    except (KeyError, ValueError) as exc:
        raise ProtocolError(f"bad synth params: {exc}") from exc
