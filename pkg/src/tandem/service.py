"""Interactive session service: play the human role against the live robot.

Request/response only; the robot's reply is folded into the move response, so
clients never need a push channel.  All payloads carry ``protocol_version``
(currently 1) and a ``view_checksum`` over the rendered state so clients can
detect desynchronization without implementing any game rules.

Endpoints:

* ``GET  /presets``                list available domain presets
* ``POST /sessions``               body ``{preset, alpha?, seed?, scope?, window?}``
* ``GET  /sessions/{sid}``         current view
* ``POST /sessions/{sid}/moves``   body ``{edge: "src->dst"}``
* ``GET  /sessions/{sid}/record``  run record as JSON lines

Error statuses: 400 illegal move (with the legal list), 404 unknown preset or
session, 409 a move is already in flight, 410 session expired.
"""

from __future__ import annotations

import itertools
import json
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, PlainTextResponse
from pydantic import BaseModel

from .domain import Owner, PlanningDomain
from .game import ParityGame, product
from .gridworld import build_gridworld
from .kitchen import KitchenConfig, build_kitchen
from .runtime import Session, feedback_state, observe_human, robot_step
from .tasklogic import compile_monitor, parse_task
from .templates import SynthesisResult, synthesize

PROTOCOL_VERSION = 1
SESSION_TTL_S = 30 * 60


def fnv1a64(text: str) -> str:
    """Tiny stable checksum shared with the browser client."""
    value = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        value ^= byte
        value = (value * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return f"{value:016x}"


def canonical_view_json(core: dict) -> str:
    """Canonical JSON both sides hash: sorted keys, no spaces, and integral
    floats rendered as integers (matching JavaScript number formatting)."""

    def normalize(value):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if isinstance(value, dict):
            return {k: normalize(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [normalize(v) for v in value]
        return value

    return json.dumps(normalize(core), sort_keys=True, separators=(",", ":"))


@dataclass
class Preset:
    name: str
    description: str
    domain: PlanningDomain
    game: ParityGame
    synthesis: SynthesisResult
    board_kind: str  # "grid" | "kitchen" | "generic"
    layout: tuple[str, ...] | None = None
    grid_shape: tuple[int, int] | None = None


def build_preset(name: str) -> Preset:
    if name == "gridworld":
        domain = build_gridworld(3, 3, 3)
        task = parse_task("G F (adj & major)", domain.propositions)
        game = product(domain, compile_monitor(task))
        return Preset(
            name,
            "3x3 block placement; the robot repeatedly reaches spread-out "
            "majority configurations",
            domain,
            game,
            synthesize(game),
            "grid",
            grid_shape=(3, 3),
        )
    if name == "kitchen":
        config = KitchenConfig()
        domain = build_kitchen(config)
        task = parse_task("G F delivered_onions_3", domain.propositions)
        game = product(domain, compile_monitor(task))
        return Preset(
            name,
            "shared-pot kitchen; the robot repeatedly delivers 3-onion soups",
            domain,
            game,
            synthesize(game),
            "kitchen",
            layout=config.layout,
        )
    raise KeyError(name)


@dataclass
class _Slot:
    session: Session
    preset: Preset
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)
    last_robot_move: dict | None = None


class CreateRequest(BaseModel):
    preset: str
    alpha: float = 0.05
    seed: int = 0
    scope: str = "cumulative"
    window: int = 20


class MoveRequest(BaseModel):
    edge: str


def create_app(preset_names: tuple[str, ...] = ("gridworld", "kitchen")) -> FastAPI:
    app = FastAPI(title="tandem session service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    presets: dict[str, Preset] = {name: build_preset(name) for name in preset_names}
    slots: dict[str, _Slot] = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()
    app.state.slots = slots
    app.state.presets = presets

    def get_slot(sid: str) -> _Slot:
        slot = slots.get(sid)
        if slot is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}")
        if time.monotonic() - slot.last_access > SESSION_TTL_S:
            with registry_lock:
                slots.pop(sid, None)
            raise HTTPException(status_code=410, detail=f"session {sid} expired")
        return slot

    @app.get("/presets")
    def list_presets():
        return {
            "protocol_version": PROTOCOL_VERSION,
            "presets": [
                {"name": p.name, "description": p.description} for p in presets.values()
            ],
        }

    @app.post("/sessions")
    def create_session(request: CreateRequest):
        preset = presets.get(request.preset)
        if preset is None:
            raise HTTPException(
                status_code=404,
                detail={
                    "error": f"unknown preset {request.preset!r}",
                    "presets": sorted(presets),
                },
            )
        session = Session(
            preset.game,
            preset.synthesis,
            alpha=request.alpha,
            seed=request.seed,
            scope=request.scope,
            window=request.window,
        )
        sid = f"s{next(counter)}"
        slot = _Slot(session=session, preset=preset)
        if preset.game.owners[session.current] is Owner.ROBOT:
            edge = robot_step(session)
            slot.last_robot_move = _move_payload(preset, edge)
        with registry_lock:
            slots[sid] = slot
        return session_view(sid, slot)

    @app.get("/sessions/{sid}")
    def get_view(sid: str):
        slot = get_slot(sid)
        slot.last_access = time.monotonic()
        return session_view(sid, slot)

    @app.post("/sessions/{sid}/moves")
    def apply_human_move(sid: str, request: MoveRequest):
        slot = get_slot(sid)
        if not slot.lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="a move is already in flight")
        try:
            slot.last_access = time.monotonic()
            session = slot.session
            game = slot.preset.game
            if game.owners[session.current] is not Owner.HUMAN:
                raise HTTPException(status_code=400, detail="not the human's turn")
            edge = _parse_edge(request.edge)
            legal = session.legal_edges()
            if edge not in legal:
                raise HTTPException(
                    status_code=400,
                    detail={
                        "error": f"illegal move {request.edge}",
                        "legal_moves": [_move_payload(slot.preset, e) for e in legal],
                    },
                )
            message = feedback_state(session)
            if message is not None:
                session.feedback_messages += 1
            observe_human(session, edge, message)
            if (
                session.status == "active"
                and game.owners[session.current] is Owner.ROBOT
            ):
                reply = robot_step(session)
                slot.last_robot_move = _move_payload(slot.preset, reply)
            return session_view(sid, slot)
        finally:
            slot.lock.release()

    @app.get("/sessions/{sid}/record", response_class=PlainTextResponse)
    def get_record(sid: str):
        slot = get_slot(sid)
        session = slot.session
        lines = [
            json.dumps(
                {
                    "type": "meta",
                    "preset": slot.preset.name,
                    "alpha": session.alpha,
                    "seed": session.seed,
                    "scope": session.scope,
                },
                sort_keys=True,
            )
        ]
        lines += [json.dumps(m.to_json(), sort_keys=True) for m in session.moves]
        return "\n".join(lines) + "\n"

    @app.get("/", response_class=HTMLResponse)
    def index():
        return (
            "<html><body><h1>tandem session service</h1>"
            "<p>See /presets; the browser client lives in the frontend/ build.</p>"
            "</body></html>"
        )

    return app


def _parse_edge(text: str) -> tuple[int, int]:
    src, sep, dst = text.partition("->")
    if not sep:
        raise HTTPException(status_code=400, detail=f"bad edge format {text!r}")
    try:
        return (int(src), int(dst))
    except ValueError:
        raise HTTPException(status_code=400, detail=f"bad edge format {text!r}")


def _move_payload(preset: Preset, edge: tuple[int, int]) -> dict:
    display = preset.game.edge_display(edge)
    payload = {"edge": f"{edge[0]}->{edge[1]}", "display": display}
    cell = _cell_of_display(display)
    if cell is not None:
        payload["cell"] = cell
    return payload


def _cell_of_display(display: str) -> list[int] | None:
    if "(" in display and display.endswith(")"):
        inner = display[display.index("(") + 1 : -1]
        parts = inner.split(",")
        if len(parts) == 2 and all(p.strip().isdigit() for p in parts):
            return [int(parts[0]), int(parts[1])]
    return None


def session_view(sid: str, slot: _Slot) -> dict:
    session = slot.session
    preset = slot.preset
    game = preset.game
    domain_state = game.origin[session.current][0]
    display = preset.domain.states[domain_state].display
    turn = "human" if game.owners[session.current] is Owner.HUMAN else "robot"

    board = _render_board(preset, display)
    legal = (
        [_move_payload(preset, e) for e in session.legal_edges()]
        if turn == "human" and session.status in ("active", "task_lost")
        else []
    )
    message = feedback_state(session) if turn == "human" else None
    feedback = None
    if message is not None:
        feedback = message.to_payload()
        for item in feedback["suggested"]:
            cell = _cell_of_display(item["display"])
            if cell is not None:
                item["cell"] = cell
    human_turns = sum(1 for m in session.moves if m.owner == "H")
    metrics = {
        "moves": len(session.moves),
        "goal_events": session.goal_event_count(),
        "deliveries": session.delivery_count(),
        "opportunities": session.stats.opportunities,
        "violations": session.stats.violations,
        "frequency": round(session.frequency(), 6),
        "feedback_messages": session.feedback_messages,
        "feedback_per_human_turn": round(
            session.feedback_messages / max(1, human_turns), 6
        ),
    }
    core = {
        "status": session.status,
        "turn": turn,
        "board": board,
        "legal_moves": legal,
        "feedback": feedback,
        "metrics": metrics,
    }
    checksum = fnv1a64(canonical_view_json(core))
    return {
        "protocol_version": PROTOCOL_VERSION,
        "session_id": sid,
        "last_robot_move": slot.last_robot_move,
        "view_checksum": checksum,
        **core,
    }


def _render_board(preset: Preset, display: str) -> dict:
    if preset.board_kind == "grid" and preset.grid_shape:
        return _render_grid(display, preset.grid_shape)
    if preset.board_kind == "kitchen" and preset.layout:
        return _render_kitchen(display, preset.layout)
    return {"kind": "generic", "rows": 1, "cols": 1, "tiles": [], "caption": display}


def _render_grid(display: str, shape: tuple[int, int]) -> dict:
    rows, cols = shape
    tiles = []
    lines = display.split("/")
    for r in range(rows):
        for c in range(cols):
            ch = lines[r][c] if r < len(lines) and c < len(lines[r]) else "."
            tiles.append(
                {
                    "r": r + 1,
                    "c": c + 1,
                    "kind": "cell",
                    "content": {"H": "human_block", "R": "robot_block", ".": ""}[ch],
                }
            )
    return {"kind": "grid", "rows": rows, "cols": cols, "tiles": tiles, "caption": display}


_KITCHEN_TILE = {"#": "counter", ".": "floor", "D": "dispenser", "P": "pot", "W": "window"}


def _render_kitchen(display: str, layout: tuple[str, ...]) -> dict:
    # display: "h=(1,1):onion r=(2,2):- pot=2 del=-"
    fields = dict(part.split("=", 1) for part in display.split() if "=" in part)

    def agent(spec: str) -> tuple[tuple[int, int], str]:
        cell_text, _, held = spec.partition(":")
        r, c = cell_text.strip("()").split(",")
        return (int(r), int(c)), held

    hpos, hheld = agent(fields["h"])
    rpos, rheld = agent(fields["r"])
    pot = int(fields["pot"])
    delivered = fields["del"]

    tiles = []
    for r, row in enumerate(layout):
        for c, ch in enumerate(row):
            tile = {"r": r, "c": c, "kind": _KITCHEN_TILE[ch], "content": ""}
            if ch == "P":
                tile["content"] = f"pot:{pot}"
            occupants = []
            if (r, c) == hpos:
                occupants.append("human" + (f"+{hheld}" if hheld != "-" else ""))
            if (r, c) == rpos:
                occupants.append("robot" + (f"+{rheld}" if rheld != "-" else ""))
            if occupants:
                tile["agents"] = occupants
            tiles.append(tile)
    caption = f"pot={pot}" + ("" if delivered == "-" else f" delivered={delivered}")
    return {
        "kind": "kitchen",
        "rows": len(layout),
        "cols": len(layout[0]),
        "tiles": tiles,
        "caption": caption,
    }
