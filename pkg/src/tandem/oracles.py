"""Brute-force reference computations for small games.

These are first-class test utilities: slow by design, independent of the
worklist fixpoints they are used to cross-check.
"""

from __future__ import annotations

import random

from .domain import Owner
from .game import ParityGame, Region, make_game


def cooperative_buchi_oracle(game: ParityGame) -> Region:
    """A vertex is included iff it can reach a color-2 vertex lying on a cycle."""
    n = game.num_vertices

    def reach(start: int) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for t in game.adjacency[u]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    recurrent = set()
    for b in range(n):
        if game.colors[b] != 2:
            continue
        if any(b in reach(t) for t in game.adjacency[b]):
            recurrent.add(b)
    return {v for v in range(n) if reach(v) & recurrent}


def attractor_oracle(game: ParityGame, target: Region, forcing: Owner | None) -> Region:
    """Naive iterate-to-fixpoint attractor (no worklists, no counters)."""
    result = set(target)
    while True:
        added = set()
        for v in range(game.num_vertices):
            if v in result:
                continue
            succs = game.adjacency[v]
            if forcing is None or game.owners[v] is forcing:
                if any(t in result for t in succs):
                    added.add(v)
            elif succs and all(t in result for t in succs):
                added.add(v)
        if not added:
            return result
        result |= added


def simple_lassos(game: ParityGame, start: int, max_length: int = 8):
    """All lassos from ``start`` whose prefix+cycle visits each vertex at most
    once (simple path closed by one back edge), up to the length bound."""
    out = []

    def extend(path: list[int], on_path: set[int]):
        u = path[-1]
        for t in game.adjacency[u]:
            if t in on_path:
                at = path.index(t)
                out.append((tuple(path[:at]), tuple(path[at:])))
            elif len(path) < max_length:
                path.append(t)
                on_path.add(t)
                extend(path, on_path)
                on_path.discard(t)
                path.pop()

    extend([start], {start})
    return out


def random_buchi_game(
    seed: int,
    max_vertices: int = 12,
    max_out_degree: int = 3,
    color2_chance: float = 0.35,
) -> ParityGame:
    """Seeded random alternating game with at least one color-2 vertex."""
    rng = random.Random(seed)
    n = rng.randint(4, max_vertices)
    owners = []
    for v in range(n):
        owners.append(Owner.ROBOT if rng.random() < 0.5 else Owner.HUMAN)
    # both owners must be present for edges to exist
    if all(o is owners[0] for o in owners):
        owners[rng.randrange(n)] = owners[0].other

    by_owner = {
        Owner.ROBOT: [v for v in range(n) if owners[v] is Owner.ROBOT],
        Owner.HUMAN: [v for v in range(n) if owners[v] is Owner.HUMAN],
    }
    edges = set()
    for v in range(n):
        pool = by_owner[owners[v].other]
        degree = rng.randint(1, min(max_out_degree, len(pool)))
        for t in rng.sample(pool, degree):
            edges.add((v, t))

    colors = [2 if rng.random() < color2_chance else 1 for _ in range(n)]
    if 2 not in colors:
        colors[rng.randrange(n)] = 2
    return make_game(owners, colors, sorted(edges), initial=0)
