"""Hand-built miniature domains and games used in tests, demos and docs."""

from __future__ import annotations

from .domain import Owner, PlanningDomain, StateInfo
from .game import ParityGame, make_game
from .gridworld import board_label, board_display, grid_propositions


def tiny_choice_game() -> ParityGame:
    """Three vertices: human a0 chooses robot b0 (color 1) or b1 (color 2);
    both return to a0.  The human's choice alone decides recurrence."""
    owners = [Owner.HUMAN, Owner.ROBOT, Owner.ROBOT]  # a0, b0, b1
    colors = [1, 1, 2]
    edges = [(0, 1), (0, 2), (1, 0), (2, 0)]
    return make_game(owners, colors, edges, initial=0)


def tiny_choice_game_with_sink() -> ParityGame:
    """The tiny choice game plus a human escape a0 -> d into a color-1 trap
    (robot d <-> human e)."""
    owners = [Owner.HUMAN, Owner.ROBOT, Owner.ROBOT, Owner.ROBOT, Owner.HUMAN]
    colors = [1, 1, 2, 1, 1]
    edges = [(0, 1), (0, 2), (1, 0), (2, 0), (0, 3), (3, 4), (4, 3)]
    return make_game(owners, colors, edges, initial=0)


_WALKTHROUGH_BOARDS = {
    # name: (human cells, robot cells) in 1-indexed (row, col)
    "h0": ({(2, 2)}, {(1, 2), (2, 3)}),
    "r0": (set(), {(1, 2), (2, 3)}),
    "r1": ({(2, 2), (1, 3)}, {(1, 2), (2, 3)}),
    "h1": ({(2, 2), (1, 3)}, {(1, 1), (1, 2), (2, 3)}),
    "r5": ({(2, 2), (1, 3), (3, 1)}, {(1, 1), (1, 2), (2, 3)}),
    "r2": ({(2, 2), (1, 3), (3, 2)}, {(1, 1), (1, 2), (2, 3)}),
    "h2": ({(2, 2), (1, 3), (3, 2)}, {(1, 2), (2, 3)}),
    "r3": ({(2, 2), (3, 2)}, {(1, 2), (2, 3)}),
    "h3": ({(2, 2), (3, 2)}, {(1, 2), (2, 3), (2, 1)}),
    "r4": ({(2, 2), (3, 2), (1, 3)}, {(1, 2), (2, 3), (2, 1)}),
    "t1": ({(3, 2)}, {(1, 2), (2, 3), (2, 1)}),
    "t2": ({(2, 2), (1, 3), (3, 1)}, {(1, 1), (3, 3)}),
}

# Partial view of the 3x3 block world: places/removes between a handful of
# named configurations, plus pass edges that keep the satisfying boards live.
_WALKTHROUGH_EDGES = [
    ("h0", "r1"),
    ("h0", "r0"),
    ("r0", "hx"),  # hx abbreviates a multi-step completion toward t1
    ("hx", "t1"),
    ("r1", "h1"),
    ("h1", "r2"),
    ("h1", "r5"),
    ("r5", "hy"),
    ("hy", "t2"),
    ("r2", "h2"),
    ("h2", "r3"),
    ("h2", "r1"),
    ("r3", "h3"),
    ("h3", "r4"),
    ("h3", "t1"),
    ("r4", "h2"),
    ("t1", "t1h"),
    ("t1h", "t1"),
    ("t2", "t2h"),
    ("t2h", "t2"),
]


def walkthrough_gridworld() -> tuple[PlanningDomain, dict[str, int]]:
    """A small named-state walkthrough of the 3x3 block world: real board
    labels, target boards t1/t2 kept alive by pass edges.

    Returns the domain and the name -> state id map.
    """
    rows = cols = 3
    boards = dict(_WALKTHROUGH_BOARDS)
    boards["hx"] = boards["r0"]  # intermediate hop toward t1
    boards["hy"] = boards["r5"]
    boards["t1h"] = boards["t1"]
    boards["t2h"] = boards["t2"]

    def owner_of(name: str) -> Owner:
        if name.startswith("h") or name.endswith("h"):
            return Owner.HUMAN
        return Owner.ROBOT  # r* states and the satisfying boards t1/t2

    names = ["h0", "r0", "hx", "r1", "h1", "r5", "hy", "r2", "h2", "r3", "h3", "r4",
             "t1", "t1h", "t2", "t2h"]
    ids = {name: i for i, name in enumerate(names)}

    def to_board(cells: tuple[set, set]) -> tuple[int, ...]:
        humans, robots = cells
        flat = []
        for r in range(1, rows + 1):
            for c in range(1, cols + 1):
                if (r, c) in humans:
                    flat.append(1)
                elif (r, c) in robots:
                    flat.append(2)
                else:
                    flat.append(0)
        return tuple(flat)

    states = []
    for name in names:
        board = to_board(boards[name])
        states.append(
            StateInfo(
                owner_of(name),
                board_label(board, rows, cols, max_objects=3),
                board_display(board, rows, cols),
            )
        )

    adjacency: list[list[int]] = [[] for _ in names]
    for src, dst in _WALKTHROUGH_EDGES:
        adjacency[ids[src]].append(ids[dst])

    domain = PlanningDomain(
        propositions=grid_propositions(rows, cols),
        states=tuple(states),
        initial=ids["h0"],
        adjacency=tuple(tuple(sorted(t)) for t in adjacency),
        name="walkthrough-gridworld",
    )
    return domain, ids
