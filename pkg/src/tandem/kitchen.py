"""Desk-scale cooking domain: two agents alternate moves around a shared pot.

The layout is a character grid: ``#`` counter, ``.`` floor, ``D`` onion
dispenser, ``P`` pot, ``W`` serving window.  Agents stand on floor cells
(co-location is allowed, so neither agent can wall the other in) and interact
with features on 4-adjacent cells.  Cooking is instant: depositing onions
fills the pot, taking the soup empties it, and delivering the soup at the
window produces a ``delivered_onions_k`` event that labels exactly the
post-delivery state.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domain import Owner, PlanningDomain, StateInfo
from .errors import CapacityError

HOLD_NONE, HOLD_ONION = 0, 1  # soup with k onions is encoded as 1 + k

DEFAULT_LAYOUT = (
    "#W##",
    "#..D",
    "#..#",
    "#P##",
)

_DIRS = (("north", -1, 0), ("south", 1, 0), ("west", 0, -1), ("east", 0, 1))


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class KitchenConfig:
    layout: tuple[str, ...] = DEFAULT_LAYOUT
    human_start: tuple[int, int] = (1, 1)
    robot_start: tuple[int, int] = (2, 2)
    pot_capacity: int = 3
    state_cap: int = 10**6


def kitchen_propositions(capacity: int) -> tuple[str, ...]:
    props = [f"delivered_onions_{k}" for k in range(capacity + 1)]
    props += [f"pot_count_{k}" for k in range(capacity + 1)]
    props += [
        "human_holding_onion",
        "human_holding_soup",
        "robot_holding_onion",
        "robot_holding_soup",
    ]
    return tuple(props)


def _hold_text(hold: int) -> str:
    if hold == HOLD_NONE:
        return "-"
    if hold == HOLD_ONION:
        return "onion"
    return f"soup{hold - 1}"


def build_kitchen(config: KitchenConfig = KitchenConfig()) -> PlanningDomain:
    """Enumerate reachable kitchen states, human moving first."""
    layout = config.layout
    rows, cols = len(layout), len(layout[0])
    if any(len(row) != cols for row in layout):
        raise LayoutError("layout rows must have equal length")

    floor = {(r, c) for r in range(rows) for c in range(cols) if layout[r][c] == "."}
    features: dict[str, list[tuple[int, int]]] = {"D": [], "P": [], "W": []}
    for r in range(rows):
        for c in range(cols):
            ch = layout[r][c]
            if ch in features:
                features[ch].append((r, c))
    for kind, cells in features.items():
        if len(cells) != 1:
            raise LayoutError(f"layout must contain exactly one {kind!r}, found {len(cells)}")
    dispenser, pot_cell, window = features["D"][0], features["P"][0], features["W"][0]

    for start, who in ((config.human_start, "human"), (config.robot_start, "robot")):
        if start not in floor:
            raise LayoutError(f"{who} start {start} is not a floor cell")

    reachable_floor = _flood(config.human_start, floor)
    if _flood(config.robot_start, floor) != reachable_floor:
        raise LayoutError("start cells lie in disconnected floor regions")
    for kind, cell in (("pot", pot_cell), ("window", window), ("dispenser", dispenser)):
        if not any(_adjacent(f, cell) for f in reachable_floor):
            raise LayoutError(f"{kind} at {cell} is unreachable from the start cells")

    cap = config.pot_capacity
    if cap < 1:
        raise LayoutError("pot capacity must be at least 1")

    # State: (turn, hpos, rpos, hhold, rhold, pot, delivered-or-None)
    initial = (Owner.HUMAN, config.human_start, config.robot_start, HOLD_NONE, HOLD_NONE, 0, None)
    index = {initial: 0}
    order = [initial]
    moves: list[list[tuple[int, str]]] = []

    head = 0
    while head < len(order):
        state = order[head]
        head += 1
        turn, hpos, rpos, hhold, rhold, pot, _ = state
        pos, hold = (hpos, hhold) if turn is Owner.HUMAN else (rpos, rhold)
        out: list[tuple[tuple, str]] = []

        def after(new_pos=None, new_hold=None, new_pot=None, delivered=None):
            p = pos if new_pos is None else new_pos
            h = hold if new_hold is None else new_hold
            q = pot if new_pot is None else new_pot
            if turn is Owner.HUMAN:
                return (Owner.ROBOT, p, rpos, h, rhold, q, delivered)
            return (Owner.HUMAN, hpos, p, hhold, h, q, delivered)

        for dname, dr, dc in _DIRS:
            target = (pos[0] + dr, pos[1] + dc)
            if target in floor:
                out.append((after(new_pos=target), f"move {dname}"))
        out.append((after(), "wait"))
        if _adjacent(pos, dispenser):
            if hold == HOLD_NONE:
                out.append((after(new_hold=HOLD_ONION), "grab onion"))
            elif hold == HOLD_ONION:
                # putting an onion back avoids a dead end where both agents
                # hold onions against a full pot and nobody can lift the soup
                out.append((after(new_hold=HOLD_NONE), "return onion"))
        if _adjacent(pos, pot_cell):
            if hold == HOLD_ONION and pot < cap:
                out.append((after(new_hold=HOLD_NONE, new_pot=pot + 1), "add onion to pot"))
            if hold == HOLD_NONE and pot > 0:
                out.append((after(new_hold=1 + pot, new_pot=0), "take soup from pot"))
        if _adjacent(pos, window) and hold > HOLD_ONION:
            out.append((after(new_hold=HOLD_NONE, delivered=hold - 1), "deliver soup"))

        row: list[tuple[int, str]] = []
        for succ, action in out:
            if succ not in index:
                index[succ] = len(order)
                order.append(succ)
                if len(order) > config.state_cap:
                    raise CapacityError("kitchen states", len(order), config.state_cap)
            row.append((index[succ], action))
        moves.append(row)

    props = kitchen_propositions(cap)
    states = []
    adjacency = []
    edge_display: dict[tuple[int, int], str] = {}
    for sid, state in enumerate(order):
        states.append(StateInfo(state[0], _kitchen_label(state, cap), _kitchen_display(state)))
        adjacency.append(tuple(sorted(t for t, _ in moves[sid])))
        for t, action in moves[sid]:
            edge_display[(sid, t)] = action

    return PlanningDomain(
        propositions=props,
        states=tuple(states),
        initial=0,
        adjacency=tuple(adjacency),
        edge_display=edge_display,
        name=f"kitchen-{rows}x{cols}-cap{cap}",
    )


def _kitchen_label(state, cap: int) -> frozenset[str]:
    _, _, _, hhold, rhold, pot, delivered = state
    label = {f"pot_count_{pot}"}
    if delivered is not None:
        label.add(f"delivered_onions_{delivered}")
    if hhold == HOLD_ONION:
        label.add("human_holding_onion")
    elif hhold > HOLD_ONION:
        label.add("human_holding_soup")
    if rhold == HOLD_ONION:
        label.add("robot_holding_onion")
    elif rhold > HOLD_ONION:
        label.add("robot_holding_soup")
    return frozenset(label)


def _kitchen_display(state) -> str:
    _, hpos, rpos, hhold, rhold, pot, delivered = state
    del_text = "-" if delivered is None else str(delivered)
    return (
        f"h=({hpos[0]},{hpos[1]}):{_hold_text(hhold)} "
        f"r=({rpos[0]},{rpos[1]}):{_hold_text(rhold)} pot={pot} del={del_text}"
    )


def _adjacent(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def _flood(start: tuple[int, int], floor: set[tuple[int, int]]) -> set[tuple[int, int]]:
    seen = {start}
    stack = [start]
    while stack:
        r, c = stack.pop()
        for _, dr, dc in _DIRS:
            nxt = (r + dr, c + dc)
            if nxt in floor and nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen
