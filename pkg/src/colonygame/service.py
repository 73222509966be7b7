"""Live steering service: one simulation, many WebSocket observers.

The simulation loop is the sole owner of the world state.  Connected
clients receive JSON snapshot frames at a fixed wall-clock cadence and may
submit JSON commands (recruit, release, pause, resume, set_speed, reset);
commands are queued and applied at the next tick boundary, then
acknowledged with the tick they took effect at.  Frames are UTF-8 text,
one JSON object per message, versioned with a "v" field.
"""
from __future__ import annotations

import asyncio
import json
import logging

from websockets.asyncio.server import serve as ws_serve

from .runner import ScenarioConfig, make_state, tick_diagnostics
from .world import MODE_IDLE, MODE_RETURN, MODE_SEARCH, recruit, release, step

log = logging.getLogger(__name__)

PROTOCOL_VERSION = 1
_MODE_NAMES = {MODE_IDLE: "idle", MODE_SEARCH: "foraging_search", MODE_RETURN: "foraging_return"}


class CommandError(Exception):
    pass


def _require_int(msg: dict, key: str, minimum: int = 0) -> int:
    try:
        value = int(msg[key])
    except (KeyError, TypeError, ValueError):
        raise CommandError(f"command requires integer field {key!r}") from None
    if value < minimum:
        raise CommandError(f"{key} must be >= {minimum}, got {value}")
    return value


class LiveServer:
    def __init__(
        self,
        config: ScenarioConfig | None = None,
        speed: float = 1.0,
        snapshot_hz: float = 10.0,
    ) -> None:
        if speed <= 0 or snapshot_hz <= 0:
            raise ValueError("speed and snapshot_hz must be positive")
        self.config = config or ScenarioConfig()
        self.speed = speed
        self.snapshot_hz = snapshot_hz
        self.state = make_state(self.config)
        self.paused = False
        self._clients: set = set()
        self._commands: asyncio.Queue = asyncio.Queue()
        self._server = None
        self.port: int | None = None

    # -- frames ------------------------------------------------------------

    def snapshot(self) -> dict:
        state = self.state
        (t, s, theta, energy, total_energy, n_foragers, expected_n, p, active_n) = (
            tick_diagnostics(state)
        )
        robots = [
            {
                "id": int(i),
                "x": float(state.pos[i, 0]),
                "y": float(state.pos[i, 1]),
                "mode": _MODE_NAMES[int(state.mode[i])],
                "carrying": bool(state.mode[i] == MODE_RETURN),
                "memory": (
                    [float(state.memory[i, 0]), float(state.memory[i, 1])]
                    if state.memory_valid[i]
                    else None
                ),
            }
            for i in range(state.config.n_robots)
            if state.active[i]
        ]
        sources = [
            {"id": int(state.source_id[j]), "x": float(state.source_pos[j, 0]),
             "y": float(state.source_pos[j, 1])}
            for j in range(state.config.n_sources)
        ]
        return {
            "v": PROTOCOL_VERSION,
            "type": "snapshot",
            "tick": state.tick,
            "t": t,
            "s": s,
            "theta": theta,
            "energy": energy,
            "total_energy": total_energy,
            "capacity": state.config.capacity,
            "active_n": active_n,
            "n_foragers": n_foragers,
            "expected_n": expected_n,
            "p": p,
            "paused": self.paused,
            "speed": self.speed,
            "domain_radius": state.config.domain_radius,
            "colony_radius": state.config.colony_radius,
            "sensing_horizon": state.config.sensing_horizon,
            "source_annulus": list(state.config.source_annulus),
            "robots": robots,
            "sources": sources,
        }

    def _apply(self, msg: dict) -> dict:
        kind = msg.get("type")
        if kind == "recruit":
            k = _require_int(msg, "k")
            selection = msg.get("selection", "random")
            if k > self.state.n_active:
                raise CommandError(
                    f"insufficient robots: requested {k}, active {self.state.n_active}"
                )
            recruit(self.state, k, selection)
        elif kind == "release":
            k = _require_int(msg, "k")
            inactive = self.state.config.n_robots - self.state.n_active
            if inactive == 0 and k > 0:
                raise CommandError("no inactive robots available")
            if k > inactive:
                raise CommandError(f"insufficient inactive robots: requested {k}, have {inactive}")
            release(self.state, k)
        elif kind == "pause":
            self.paused = True
        elif kind == "resume":
            self.paused = False
        elif kind == "set_speed":
            try:
                mult = float(msg["multiplier"])
            except (KeyError, TypeError, ValueError):
                raise CommandError("set_speed requires numeric field 'multiplier'") from None
            if mult <= 0:
                raise CommandError("multiplier must be > 0")
            self.speed = mult
        elif kind == "reset":
            seed = _require_int(msg, "seed") if "seed" in msg else self.config.seed
            self.state = make_state(self.config, seed=seed)
        else:
            raise CommandError(f"unknown command type {kind!r}")
        return {
            "v": PROTOCOL_VERSION,
            "type": "ack",
            "command": kind,
            "applied_at_tick": self.state.tick,
        }

    # -- networking --------------------------------------------------------

    async def _send(self, ws, payload: dict) -> None:
        try:
            await ws.send(json.dumps(payload))
        except Exception:
            self._clients.discard(ws)

    async def _broadcast(self, payload: dict) -> None:
        if not self._clients:
            return
        text = json.dumps(payload)
        for ws in list(self._clients):
            try:
                await ws.send(text)
            except Exception:
                self._clients.discard(ws)

    async def _handler(self, ws) -> None:
        self._clients.add(ws)
        await self._send(ws, self.snapshot())
        try:
            async for raw in ws:
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict):
                        raise ValueError("frame must be a JSON object")
                except ValueError as exc:
                    await self._send(
                        ws,
                        {"v": PROTOCOL_VERSION, "type": "error", "message": f"malformed frame: {exc}"},
                    )
                    continue
                await self._commands.put((ws, msg))
        finally:
            self._clients.discard(ws)

    async def _drain_commands(self) -> None:
        while not self._commands.empty():
            ws, msg = self._commands.get_nowait()
            try:
                ack = self._apply(msg)
            except CommandError as exc:
                await self._send(
                    ws, {"v": PROTOCOL_VERSION, "type": "error", "message": str(exc)}
                )
            else:
                await self._send(ws, ack)

    async def _sim_loop(self) -> None:
        loop = asyncio.get_running_loop()
        next_wall = loop.time()
        last_snapshot = -1.0
        while True:
            await self._drain_commands()
            now = loop.time()
            if now - last_snapshot >= 1.0 / self.snapshot_hz:
                await self._broadcast(self.snapshot())
                last_snapshot = now
            if self.paused:
                await asyncio.sleep(0.02)
                next_wall = loop.time()
                continue
            step(self.state)
            next_wall += self.state.config.dt / self.speed
            delay = next_wall - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            else:
                next_wall = loop.time()
                await asyncio.sleep(0)

    async def start(self, host: str = "127.0.0.1", port: int = 0):
        """Bind the socket and start the simulation loop (non-blocking)."""
        try:
            self._server = await ws_serve(self._handler, host, port)
        except OSError as exc:
            raise OSError(f"failed to bind {host}:{port}: {exc}") from exc
        self.port = self._server.sockets[0].getsockname()[1]
        self._task = asyncio.create_task(self._sim_loop())
        log.info("live service listening on ws://%s:%s", host, self.port)
        return self

    async def stop(self) -> None:
        if self._server is not None:
            self._task.cancel()
            self._server.close()
            await self._server.wait_closed()

    async def run_forever(self, host: str = "127.0.0.1", port: int = 8765) -> None:
        await self.start(host, port)
        try:
            await asyncio.Future()
        finally:
            await self.stop()


def serve(
    config: ScenarioConfig | None = None,
    host: str = "127.0.0.1",
    port: int = 8765,
    speed: float = 1.0,
) -> None:
    """Blocking entry point used by the command line."""
    asyncio.run(LiveServer(config, speed=speed).run_forever(host, port))
