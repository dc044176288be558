"""Session host: one authoritative simulation loop plus a WebSocket
fan-out. Handlers never touch the simulation directly; they enqueue
decoded messages and the loop applies them between ticks, so command
ordering is total and a rejected command cannot interleave with a step.

Any number of observers may connect; exactly one client holds the
control slot (first come, explicit release, freed on disconnect).
Commands from non-controllers are acknowledged as rejected.
"""

from __future__ import annotations

import asyncio
from pathlib import Path

from websockets.asyncio.server import ServerConnection, broadcast, serve
from websockets.exceptions import ConnectionClosed

from sonifleet.audio.params import SoundSet, rtl_params
from sonifleet.hazards import HazardType
from sonifleet.protocol import (
    PROTOCOL_VERSION,
    Ack,
    AcquireControl,
    CommandMessage,
    ControlState,
    ErrorMessage,
    Events,
    ReleaseControl,
    Snapshot,
    SynthFrame,
    Welcome,
    ProtocolError,
    decode,
    encode,
    params_to_wire,
)
from sonifleet.scenario import Scenario, load_scenario
from sonifleet.sim import Simulation

DEFAULT_PORT = 8765
DEFAULT_HOST = "127.0.0.1"


class TeleopServer:
    """Owns the Simulation and the client set. start()/stop() for
    embedding and tests; run() blocks for the CLI."""

    def __init__(
        self,
        scenario: Scenario,
        sound_set: SoundSet = SoundSet.COG,
        host: str = DEFAULT_HOST,
        port: int = DEFAULT_PORT,
    ):
        self.sim = Simulation(scenario)
        self.scenario_name = scenario.name
        self.sound_set = sound_set
        self.host = host
        self.port = port
        self.tick_rate = self.sim.constants.tick_rate
        self.clients: set[ServerConnection] = set()
        self.controller: ServerConnection | None = None
        self.inbox: asyncio.Queue[tuple[ServerConnection, object]] = asyncio.Queue()
        self._server = None
        self._loop_task: asyncio.Task | None = None

    # -- connection handling ----------------------------------------------

    async def handler(self, connection: ServerConnection) -> None:
        self.clients.add(connection)
        try:
            await connection.send(
                encode(
                    Welcome(
                        protocol=PROTOCOL_VERSION,
                        scenario=self.scenario_name,
                        sound_set=self.sound_set.value,
                        tick_rate=self.tick_rate,
                    )
                )
            )
            await connection.send(
                encode(
                    ControlState(held=self.controller is not None, yours=False)
                )
            )
            async for raw in connection:
                try:
                    message = decode(raw)
                except ProtocolError as exc:
                    await connection.send(encode(ErrorMessage(message=str(exc))))
                    continue
                await self.inbox.put((connection, message))
        finally:
            self.clients.discard(connection)
            if connection is self.controller:
                self.controller = None
                self._broadcast_control()

    def _broadcast_control(self) -> None:
        held = self.controller is not None
        for client in self.clients:
            payload = encode(
                ControlState(held=held, yours=client is self.controller)
            )
            broadcast([client], payload)

    async def _send_safe(self, connection: ServerConnection, message) -> None:
        """A client vanishing mid-reply must not take the tick loop down."""
        try:
            await connection.send(encode(message))
        except ConnectionClosed:
            pass

    async def _apply(self, connection: ServerConnection, message) -> None:
        if isinstance(message, AcquireControl):
            if self.controller is None:
                self.controller = connection
            self._broadcast_control()
        elif isinstance(message, ReleaseControl):
            if connection is self.controller:
                self.controller = None
            self._broadcast_control()
        elif isinstance(message, CommandMessage):
            if connection is not self.controller:
                ack = Ack(seq=message.seq, accepted=False, reason="not controlling")
            else:
                accepted, reason = self.sim.apply_command(message.command)
                ack = Ack(seq=message.seq, accepted=accepted, reason=reason)
            await self._send_safe(connection, ack)
        else:
            await self._send_safe(
                connection,
                ErrorMessage(message=f"unexpected {message.kind} from client"),
            )

    # -- the authoritative loop --------------------------------------------

    def _synth_frame(self) -> SynthFrame:
        sim = self.sim
        voices = []
        source = None
        coverage_ok = True
        if sim.self_rtl:
            tile = sim._tile_of(sim.avatar.position)
            coverage_ok = bool(sim.world.coverage[tile[1], tile[0]])
            x, y = sim.avatar.position
            point = (x, y, sim.grid.sample_height)
            levels = {h: sim.field.level_at(point, h) for h in HazardType}
        elif sim.selected is not None:
            robot = sim.robot_by_id(sim.selected)
            source = [robot.position[0], robot.position[1]]
            levels = sim._sense(robot)
        else:
            levels = {}
        for hazard, level in levels.items():
            voices.append(
                {
                    "hazard": hazard.value,
                    "level": level,
                    "params": params_to_wire(
                        rtl_params(self.sound_set, hazard, level)
                    ),
                }
            )
        alerts = [
            {
                "robot": robot_id,
                "hazard": hazard.value,
                "priority": channel.priority,
                "high_active": channel.high_active,
                "flanger_active": channel.flanger_active,
            }
            for (robot_id, hazard), channel in sorted(
                sim.alerts.channels.items(), key=lambda kv: (kv[0][0], kv[0][1].value)
            )
            if channel.priority > 0 or channel.high_active or channel.flanger_active
        ]
        return SynthFrame(
            tick=sim.tick,
            sound_set=self.sound_set.value,
            self_rtl=sim.self_rtl,
            coverage_ok=coverage_ok,
            source=source,
            voices=voices,
            alerts=alerts,
            phase_clock=sim.alerts.phase_clock,
        )

    async def _tick_loop(self) -> None:
        period = 1.0 / self.tick_rate
        loop = asyncio.get_running_loop()
        next_tick = loop.time()
        while True:
            while not self.inbox.empty():
                connection, message = self.inbox.get_nowait()
                await self._apply(connection, message)
            events = self.sim.step(period)
            if self.clients:
                broadcast(self.clients, encode(Snapshot(state=self.sim.snapshot())))
                if events:
                    broadcast(
                        self.clients,
                        encode(
                            Events(
                                tick=self.sim.tick,
                                events=[e.to_dict() for e in events],
                            )
                        ),
                    )
                broadcast(self.clients, encode(self._synth_frame()))
            next_tick += period
            await asyncio.sleep(max(0.0, next_tick - loop.time()))

    # -- lifecycle ----------------------------------------------------------

    async def start(self) -> int:
        """Bind and start ticking; returns the bound port."""
        self._server = await serve(self.handler, self.host, self.port)
        self._loop_task = asyncio.create_task(self._tick_loop())
        return self.bound_port

    @property
    def bound_port(self) -> int:
        sockets = self._server.sockets
        return sockets[0].getsockname()[1]

    async def stop(self) -> None:
        if self._loop_task is not None:
            self._loop_task.cancel()
            try:
                await self._loop_task
            except asyncio.CancelledError:
                pass
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()

    async def run_forever(self) -> None:
        await self.start()
        try:
            await asyncio.Future()
        finally:
            await self.stop()


def run_server(
    scenario_path: str | Path,
    sound_set: SoundSet = SoundSet.COG,
    host: str = DEFAULT_HOST,
    port: int = DEFAULT_PORT,
) -> None:
    """CLI entry: blocks until interrupted. Raises ScenarioError for a
    malformed scenario and OSError when the port is busy."""
    scenario = load_scenario(scenario_path)
    server = TeleopServer(scenario, sound_set=sound_set, host=host, port=port)
    try:
        asyncio.run(server.run_forever())
    except KeyboardInterrupt:
        pass
