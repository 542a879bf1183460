"""Block-placement gridworld: two agents take turns placing and removing blocks.

Each turn the acting agent may place one of its own blocks in an empty cell
(up to its per-agent cap), remove one of its own blocks, or pass.  States are
(board, whose turn); boards map cells to empty / human block / robot block.

Task-relevant propositions, for an R x C board:

* ``adj``      no two occupied cells are 4-adjacent (vacuous on empty boards)
* ``diag``     a full corner-to-corner diagonal is occupied (square boards)
* ``major``    occupancy has reached a majority of the achievable maximum,
               i.e. at least floor(min(R*C, 2*cap)/2) + 1 occupied cells
* ``occ_r_c``  cell (r,c) is occupied (1-indexed)
* ``row_r``    all cells of row r are occupied
* ``col_c``    all cells of column c are occupied

For the default 3x3 board this yields 18 propositions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domain import Owner, PlanningDomain, StateInfo
from .errors import CapacityError

EMPTY, HUMAN_BLOCK, ROBOT_BLOCK = 0, 1, 2
_CELL_CHAR = {EMPTY: ".", HUMAN_BLOCK: "H", ROBOT_BLOCK: "R"}


@dataclass(frozen=True)
class GridConfig:
    rows: int = 3
    cols: int = 3
    max_objects_per_agent: int = 3
    state_cap: int = 10**6


def grid_propositions(rows: int, cols: int) -> tuple[str, ...]:
    props = ["adj", "diag", "major"]
    props += [f"occ_{r}_{c}" for r in range(1, rows + 1) for c in range(1, cols + 1)]
    props += [f"row_{r}" for r in range(1, rows + 1)]
    props += [f"col_{c}" for c in range(1, cols + 1)]
    return tuple(props)


def board_label(board: tuple[int, ...], rows: int, cols: int, max_objects: int) -> frozenset[str]:
    """Recompute the full label of a board from scratch."""
    occupied = [i for i, v in enumerate(board) if v != EMPTY]
    label = set()
    if _no_adjacent(board, rows, cols):
        label.add("adj")
    if rows == cols and _has_diagonal(board, rows):
        label.add("diag")
    capacity = min(rows * cols, 2 * max_objects)
    if len(occupied) >= capacity // 2 + 1:
        label.add("major")
    for i in occupied:
        label.add(f"occ_{i // cols + 1}_{i % cols + 1}")
    for r in range(rows):
        if all(board[r * cols + c] != EMPTY for c in range(cols)):
            label.add(f"row_{r + 1}")
    for c in range(cols):
        if all(board[r * cols + c] != EMPTY for r in range(rows)):
            label.add(f"col_{c + 1}")
    return frozenset(label)


def _no_adjacent(board: tuple[int, ...], rows: int, cols: int) -> bool:
    for r in range(rows):
        for c in range(cols):
            if board[r * cols + c] == EMPTY:
                continue
            if c + 1 < cols and board[r * cols + c + 1] != EMPTY:
                return False
            if r + 1 < rows and board[(r + 1) * cols + c] != EMPTY:
                return False
    return True


def _has_diagonal(board: tuple[int, ...], n: int) -> bool:
    main = all(board[i * n + i] != EMPTY for i in range(n))
    anti = all(board[i * n + (n - 1 - i)] != EMPTY for i in range(n))
    return main or anti


def board_display(board: tuple[int, ...], rows: int, cols: int) -> str:
    return "/".join(
        "".join(_CELL_CHAR[board[r * cols + c]] for c in range(cols)) for r in range(rows)
    )


def build_gridworld(
    rows: int = 3,
    cols: int = 3,
    max_objects_per_agent: int = 3,
    state_cap: int = 10**6,
) -> PlanningDomain:
    """Enumerate all states reachable from the empty board, human to move first.

    Deterministic: state ids follow breadth-first discovery order from the
    initial state, and successor lists are sorted ascending.
    """
    if rows < 1 or cols < 1:
        raise ValueError("board must be at least 1x1")
    if max_objects_per_agent < 0:
        raise ValueError("max_objects_per_agent must be non-negative")

    cap = max_objects_per_agent
    cells = rows * cols
    own_block = {Owner.HUMAN: HUMAN_BLOCK, Owner.ROBOT: ROBOT_BLOCK}

    initial = (tuple([EMPTY] * cells), Owner.HUMAN)
    index: dict[tuple[tuple[int, ...], Owner], int] = {initial: 0}
    order = [initial]
    moves: list[list[tuple[int, str]]] = []

    head = 0
    while head < len(order):
        board, turn = order[head]
        head += 1
        block = own_block[turn]
        nxt = turn.other
        out: list[tuple[tuple[tuple[int, ...], Owner], str]] = []
        if sum(1 for v in board if v == block) < cap:
            for i, v in enumerate(board):
                if v == EMPTY:
                    placed = board[:i] + (block,) + board[i + 1 :]
                    out.append(((placed, nxt), f"place ({i // cols + 1},{i % cols + 1})"))
        for i, v in enumerate(board):
            if v == block:
                removed = board[:i] + (EMPTY,) + board[i + 1 :]
                out.append(((removed, nxt), f"remove ({i // cols + 1},{i % cols + 1})"))
        out.append((((board), nxt), "pass"))

        row: list[tuple[int, str]] = []
        for succ, action in out:
            if succ not in index:
                index[succ] = len(order)
                order.append(succ)
                if len(order) > state_cap:
                    raise CapacityError("gridworld states", len(order), state_cap)
            row.append((index[succ], action))
        moves.append(row)

    props = grid_propositions(rows, cols)
    states = []
    adjacency = []
    edge_display: dict[tuple[int, int], str] = {}
    for sid, (board, turn) in enumerate(order):
        states.append(
            StateInfo(turn, board_label(board, rows, cols, cap), board_display(board, rows, cols))
        )
        targets = sorted(t for t, _ in moves[sid])
        adjacency.append(tuple(targets))
        for t, action in moves[sid]:
            edge_display[(sid, t)] = action

    return PlanningDomain(
        propositions=props,
        states=tuple(states),
        initial=0,
        adjacency=tuple(adjacency),
        edge_display=edge_display,
        name=f"gridworld-{rows}x{cols}-cap{cap}",
    )


def find_state(domain: PlanningDomain, display: str, turn: Owner) -> int:
    """Locate the state with the given board display and turn; raises KeyError."""
    for sid, info in enumerate(domain.states):
        if info.display == display and info.owner is turn:
            return sid
    raise KeyError(f"no state with board {display!r} and turn {turn}")
