"""Wire protocol: encode/decode identity, strict validation, and
SynthParams serialization."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sonifleet.audio.params import SoundSet, rtl_params
from sonifleet.hazards import HazardType
from sonifleet.protocol import (
    MESSAGE_TYPES,
    Ack,
    AcquireControl,
    CommandMessage,
    ControlState,
    ErrorMessage,
    Events,
    ProtocolError,
    ReleaseControl,
    Snapshot,
    SynthFrame,
    Welcome,
    decode,
    encode,
    params_from_wire,
    params_to_wire,
)

# JSON-representable values that survive a dumps/loads round trip
# unchanged: no NaN or infinity, string keys, lists not tuples.
json_scalars = (
    st.none()
    | st.booleans()
    | st.integers(-(2**31), 2**31)
    | st.floats(allow_nan=False, allow_infinity=False)
    | st.text(max_size=20)
)
json_values = st.recursive(
    json_scalars,
    lambda kids: st.lists(kids, max_size=3)
    | st.dictionaries(st.text(max_size=8), kids, max_size=3),
    max_leaves=8,
)
json_objects = st.dictionaries(st.text(max_size=8), json_values, max_size=4)

safe_floats = st.floats(
    min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False
)
seqs = st.integers(0, 2**31)

message_strategies = {
    AcquireControl: st.just(AcquireControl()),
    ReleaseControl: st.just(ReleaseControl()),
    CommandMessage: st.builds(CommandMessage, seq=seqs, command=json_objects),
    Welcome: st.builds(
        Welcome,
        protocol=st.integers(1, 100),
        scenario=st.text(max_size=20),
        sound_set=st.sampled_from(["cog", "comp"]),
        tick_rate=safe_floats,
    ),
    ControlState: st.builds(ControlState, held=st.booleans(), yours=st.booleans()),
    Ack: st.builds(
        Ack,
        seq=seqs,
        accepted=st.booleans(),
        reason=st.none() | st.text(max_size=20),
    ),
    Snapshot: st.builds(Snapshot, state=json_objects),
    Events: st.builds(
        Events, tick=st.integers(0, 10**6), events=st.lists(json_objects, max_size=3)
    ),
    SynthFrame: st.builds(
        SynthFrame,
        tick=st.integers(0, 10**6),
        sound_set=st.sampled_from(["cog", "comp"]),
        self_rtl=st.booleans(),
        coverage_ok=st.booleans(),
        source=st.none()
        | st.lists(safe_floats, min_size=2, max_size=2),
        voices=st.lists(json_objects, max_size=3),
        alerts=st.lists(json_objects, max_size=2),
        phase_clock=safe_floats,
    ),
    ErrorMessage: st.builds(ErrorMessage, message=st.text(max_size=40)),
}


class TestRoundTrip:
    def test_every_type_has_a_strategy(self):
        assert set(message_strategies) == set(MESSAGE_TYPES)

    @pytest.mark.parametrize(
        "cls", MESSAGE_TYPES, ids=[c.kind for c in MESSAGE_TYPES]
    )
    @settings(max_examples=50)
    @given(data=st.data())
    def test_decode_encode_is_identity(self, cls, data):
        message = data.draw(message_strategies[cls])
        raw = encode(message)
        assert decode(raw) == message

    @pytest.mark.parametrize(
        "message",
        [
            AcquireControl(),
            ReleaseControl(),
            CommandMessage(seq=3, command={"kind": "go", "robot": "r1"}),
            Welcome(protocol=1, scenario="demo", sound_set="cog", tick_rate=20.0),
            ControlState(held=True, yours=False),
            Ack(seq=3, accepted=False, reason="not controlling"),
            Snapshot(state={"tick": 4}),
            Events(tick=4, events=[{"kind": "high_alert_enter"}]),
            SynthFrame(
                tick=4,
                sound_set="cog",
                self_rtl=False,
                coverage_ok=True,
                source=[1.0, 2.0],
                voices=[],
                alerts=[],
                phase_clock=0.2,
            ),
            ErrorMessage(message="unknown message type 'teleport'"),
        ],
        ids=[c.kind for c in MESSAGE_TYPES],
    )
    def test_encoded_form_is_a_tagged_json_object(self, message):
        payload = json.loads(encode(message))
        assert payload["type"] == message.kind
        assert decode(encode(message)) == message

    def test_snapshot_tick_accessor(self):
        snap = Snapshot(state={"tick": 17, "robots": []})
        assert snap.tick == 17
        assert decode(encode(snap)).tick == 17


class TestValidation:
    def test_rejects_invalid_json(self):
        with pytest.raises(ProtocolError, match="JSON"):
            decode("{nope")

    def test_rejects_non_object(self):
        with pytest.raises(ProtocolError, match="object"):
            decode("[1, 2, 3]")

    def test_rejects_unknown_type(self):
        with pytest.raises(ProtocolError, match="unknown message type"):
            decode('{"type": "teleport"}')

    def test_rejects_missing_type_tag(self):
        with pytest.raises(ProtocolError, match="unknown message type"):
            decode('{"seq": 1}')

    def test_rejects_missing_fields(self):
        with pytest.raises(ProtocolError, match="missing"):
            decode('{"type": "ack", "seq": 1}')

    def test_rejects_extra_fields(self):
        raw = json.dumps(
            {"type": "ack", "seq": 1, "accepted": True, "reason": None, "zz": 0}
        )
        with pytest.raises(ProtocolError, match="unexpected"):
            decode(raw)


class TestSynthParamsWire:
    @pytest.mark.parametrize("sound_set", list(SoundSet))
    @pytest.mark.parametrize("hazard", list(HazardType))
    @pytest.mark.parametrize("level", [0.0, 0.37, 1.0])
    def test_round_trip_through_json(self, sound_set, hazard, level):
        params = rtl_params(sound_set, hazard, level)
        wire = json.loads(json.dumps(params_to_wire(params)))
        assert params_from_wire(wire) == params

    def test_rejects_unknown_voice(self):
        wire = params_to_wire(rtl_params(SoundSet.COG, HazardType.RADIATION, 0.5))
        wire["voice"] = "theremin"
        with pytest.raises(ProtocolError):
            params_from_wire(wire)

    def test_rejects_missing_field(self):
        wire = params_to_wire(rtl_params(SoundSet.COG, HazardType.RADIATION, 0.5))
        del wire["gains"]
        with pytest.raises(ProtocolError):
            params_from_wire(wire)
