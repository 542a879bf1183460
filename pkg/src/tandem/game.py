"""Product games and the attractor / recurrence fixpoints used by synthesis.

Vertices are dense ints carrying (owner, color, origin).  The origin of a
vertex is the (domain state, monitor state) pair it was built from; on the
reachable part this map is injective, so runs of the product project back to
domain runs edge by edge.

Convention: the monitor consumes the label of each domain state on entry, and
a product vertex stores the post-step monitor state.  Vertex color is the
color of that stored monitor state, which keeps the coloring state-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .domain import Owner, PlanningDomain
from .errors import CapacityError
from .tasklogic import ParityMonitor

Region = set[int]


class AttractorMode(Enum):
    ROBOT_FORCES = "robot"
    HUMAN_FORCES = "human"
    COOPERATIVE = "coop"


@dataclass(frozen=True)
class ParityGame:
    owners: tuple[Owner, ...]
    colors: tuple[int, ...]
    origin: tuple[tuple[int, int], ...]  # (domain state, monitor state)
    initial: int
    adjacency: tuple[tuple[int, ...], ...]
    reverse: tuple[tuple[int, ...], ...]
    domain: PlanningDomain | None = None
    monitor: ParityMonitor | None = None
    vertex_of_origin: dict = field(default_factory=dict, repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.owners)

    def edges(self):
        for src, targets in enumerate(self.adjacency):
            for dst in targets:
                yield (src, dst)

    def owner(self, v: int) -> Owner:
        return self.owners[v]

    def color(self, v: int) -> int:
        return self.colors[v]

    def domain_edge(self, edge: tuple[int, int]) -> tuple[int, int]:
        u, v = edge
        return (self.origin[u][0], self.origin[v][0])

    def edge_display(self, edge: tuple[int, int]) -> str:
        if self.domain is None:
            return f"{edge[0]}->{edge[1]}"
        src, dst = self.domain_edge(edge)
        return self.domain.edge_display.get((src, dst), f"{src}->{dst}")


def make_game(
    owners,
    colors,
    edges,
    initial: int = 0,
    origin=None,
    domain: PlanningDomain | None = None,
    monitor: ParityMonitor | None = None,
) -> ParityGame:
    """Assemble a game from explicit parts (used by tests and generators)."""
    n = len(owners)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    reverse: list[list[int]] = [[] for _ in range(n)]
    for src, dst in edges:
        adjacency[src].append(dst)
        reverse[dst].append(src)
    origin = tuple(origin) if origin is not None else tuple((v, 0) for v in range(n))
    game = ParityGame(
        owners=tuple(owners),
        colors=tuple(colors),
        origin=origin,
        initial=initial,
        adjacency=tuple(tuple(sorted(set(t))) for t in adjacency),
        reverse=tuple(tuple(sorted(set(t))) for t in reverse),
        domain=domain,
        monitor=monitor,
    )
    game.vertex_of_origin.update({o: v for v, o in enumerate(game.origin)})
    return game


def validate_game(game: ParityGame) -> list[str]:
    problems = []
    for v in range(game.num_vertices):
        if not game.adjacency[v]:
            problems.append(f"vertex {v} has no outgoing edge")
        if game.colors[v] not in (1, 2):
            problems.append(f"vertex {v} has color {game.colors[v]} outside {{1,2}}")
        for t in game.adjacency[v]:
            if game.owners[t] is game.owners[v]:
                problems.append(f"edge ({v},{t}) violates turn alternation")
    return problems


def product(
    domain: PlanningDomain, monitor: ParityMonitor, vertex_cap: int = 5 * 10**6
) -> ParityGame:
    """Reachable product of a domain and a monitor."""
    if monitor.alphabet:
        unknown = set(monitor.alphabet) - set(domain.propositions)
        if unknown:
            raise ValueError(f"monitor alphabet not in domain propositions: {sorted(unknown)}")

    # Per-label step rows are cached: many states share a label, and the
    # kitchen / gridworld products step the monitor millions of times.
    step_rows: dict[frozenset, dict[int, int]] = {}

    def step(mstate: int, label: frozenset) -> int:
        row = step_rows.get(label)
        if row is None:
            row = {}
            step_rows[label] = row
        nxt = row.get(mstate)
        if nxt is None:
            nxt = monitor.step(mstate, label)
            row[mstate] = nxt
        return nxt

    start = (domain.initial, step(monitor.initial, domain.label(domain.initial)))
    index: dict[tuple[int, int], int] = {start: 0}
    order = [start]
    adjacency: list[tuple[int, ...]] = []

    head = 0
    while head < len(order):
        s, m = order[head]
        head += 1
        row = []
        for t in domain.adjacency[s]:
            succ = (t, step(m, domain.label(t)))
            vid = index.get(succ)
            if vid is None:
                vid = len(order)
                index[succ] = vid
                order.append(succ)
                if len(order) > vertex_cap:
                    raise CapacityError("product vertices", len(order), vertex_cap)
            row.append(vid)
        adjacency.append(tuple(sorted(set(row))))

    n = len(order)
    reverse: list[list[int]] = [[] for _ in range(n)]
    for src in range(n):
        for dst in adjacency[src]:
            reverse[dst].append(src)

    game = ParityGame(
        owners=tuple(domain.owner(s) for s, _ in order),
        colors=tuple(monitor.color(m) for _, m in order),
        origin=tuple(order),
        initial=0,
        adjacency=tuple(adjacency),
        reverse=tuple(tuple(r) for r in reverse),
        domain=domain,
        monitor=monitor,
    )
    game.vertex_of_origin.update(index)
    return game


def attractor(
    game: ParityGame,
    target: Region,
    mode: AttractorMode,
    within: Region | None = None,
) -> Region:
    """Least fixpoint of one-step forcing toward ``target``.

    In a forcing mode the named agent needs some successor inside the set and
    the opponent must have all successors inside; cooperative mode adds any
    vertex with some successor inside.  ``within`` restricts the computation
    to a subregion: only its vertices join, and universal quantification
    ranges over successors inside it (used by synthesis on the cooperative
    winning region).
    """
    forcing = {
        AttractorMode.ROBOT_FORCES: Owner.ROBOT,
        AttractorMode.HUMAN_FORCES: Owner.HUMAN,
        AttractorMode.COOPERATIVE: None,
    }[mode]

    allowed = within if within is not None else None
    result: Region = set()
    for v in target:
        if allowed is None or v in allowed:
            result.add(v)

    pending: dict[int, int] = {}  # universal vertices: successors still outside

    def succ_count(v: int) -> int:
        if allowed is None:
            return len(game.adjacency[v])
        return sum(1 for t in game.adjacency[v] if t in allowed)

    work = list(result)
    while work:
        v = work.pop()
        for p in game.reverse[v]:
            if p in result or (allowed is not None and p not in allowed):
                continue
            if forcing is None or game.owners[p] is forcing:
                result.add(p)
                work.append(p)
            else:
                remaining = pending.get(p)
                if remaining is None:
                    remaining = succ_count(p)
                remaining -= 1
                pending[p] = remaining
                if remaining <= 0:
                    result.add(p)
                    work.append(p)
    return result


def cooperative_buchi(game: ParityGame) -> Region:
    """Vertices from which some infinite run sees color 2 infinitely often."""
    bad = [v for v in range(game.num_vertices) if game.colors[v] not in (1, 2)]
    if bad:
        raise ValueError(f"colors outside {{1,2}} at vertices {bad[:5]}")

    region: Region = set(range(game.num_vertices))
    while True:
        target = {
            v
            for v in region
            if game.colors[v] == 2 and any(t in region for t in game.adjacency[v])
        }
        smaller = attractor(game, target, AttractorMode.COOPERATIVE, within=region)
        if smaller == region:
            return region
        region = smaller


def attractor_layers(
    game: ParityGame, target: Region, mode: AttractorMode, within: Region | None = None
) -> dict[int, int]:
    """Like :func:`attractor` but returns the breadth-first layer of each
    attracted vertex (targets at layer 0)."""
    forcing = {
        AttractorMode.ROBOT_FORCES: Owner.ROBOT,
        AttractorMode.HUMAN_FORCES: Owner.HUMAN,
        AttractorMode.COOPERATIVE: None,
    }[mode]
    allowed = within

    layer: dict[int, int] = {}
    frontier = []
    for v in target:
        if allowed is None or v in allowed:
            layer[v] = 0
            frontier.append(v)

    pending: dict[int, int] = {}
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for v in frontier:
            for p in game.reverse[v]:
                if p in layer or (allowed is not None and p not in allowed):
                    continue
                if forcing is None or game.owners[p] is forcing:
                    layer[p] = depth
                    nxt.append(p)
                else:
                    remaining = pending.get(p)
                    if remaining is None:
                        if allowed is None:
                            remaining = len(game.adjacency[p])
                        else:
                            remaining = sum(1 for t in game.adjacency[p] if t in allowed)
                    remaining -= 1
                    pending[p] = remaining
                    if remaining <= 0:
                        layer[p] = depth
                        nxt.append(p)
        frontier = nxt
    return layer


def robot_win_under_template(game: ParityGame, human_template) -> Region:
    """Vertices where the robot can guarantee recurrence against any human
    behavior that complies with the given human template.

    Human unsafe and co-live edges are pruned (co-live edges cannot matter in
    the limit), and a human vertex sourcing a live-group is credited with
    progress as soon as some live edge of it makes progress, because a
    compliant human must eventually take one.
    """
    for u, v in human_template.unsafe | human_template.colive:
        if game.owners[u] is not Owner.HUMAN:
            raise ValueError(f"template constrains non-human edge ({u},{v})")
        if v not in game.adjacency[u]:
            raise ValueError(f"template references missing edge ({u},{v})")
    for group in human_template.livegroups:
        for u, v in group:
            if v not in game.adjacency[u]:
                raise ValueError(f"template references missing edge ({u},{v})")

    dropped = human_template.unsafe | human_template.colive
    pruned: list[tuple[int, ...]] = []
    for u in range(game.num_vertices):
        if game.owners[u] is Owner.HUMAN:
            pruned.append(tuple(t for t in game.adjacency[u] if (u, t) not in dropped))
        else:
            pruned.append(game.adjacency[u])

    live_edges_at: dict[int, list[int]] = {}
    for group in human_template.livegroups:
        for u, v in group:
            live_edges_at.setdefault(u, []).append(v)

    def credit_attractor(target: Region) -> Region:
        result = set(target)
        pending: dict[int, int] = {}
        work = list(result)
        while work:
            v = work.pop()
            for p in game.reverse[v]:
                if p in result:
                    continue
                if game.owners[p] is Owner.ROBOT:
                    if v in game.adjacency[p]:
                        result.add(p)
                        work.append(p)
                    continue
                if v in live_edges_at.get(p, ()) :
                    result.add(p)
                    work.append(p)
                    continue
                if v not in pruned[p]:
                    continue
                remaining = pending.get(p, len(pruned[p])) - 1
                pending[p] = remaining
                if remaining <= 0:
                    result.add(p)
                    work.append(p)
        return result

    def credited_pre(v: int, region: Region) -> bool:
        if game.owners[v] is Owner.ROBOT:
            return any(t in region for t in game.adjacency[v])
        if all(t in region for t in pruned[v]):
            return True
        return any(t in region for t in live_edges_at.get(v, ()))

    region: Region = set(range(game.num_vertices))
    while True:
        target = {v for v in region if game.colors[v] == 2 and credited_pre(v, region)}
        smaller = credit_attractor(target)
        if smaller == region:
            return region
        region = smaller


def export_game(game: ParityGame) -> str:
    """Stable textual dump (vertex list with owner/color/origin, edge list)."""
    lines = ["parity-game", f"initial: {game.initial}"]
    for v in range(game.num_vertices):
        s, m = game.origin[v]
        lines.append(f"vertex {v} {game.owners[v].value} {game.colors[v]} {s},{m}")
    for src, dst in game.edges():
        lines.append(f"edge {src} {dst}")
    return "\n".join(lines) + "\n"
