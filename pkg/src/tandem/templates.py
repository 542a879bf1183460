"""Strategy templates: synthesis of a permissive pair, compliance, verification.

A template constrains one agent through unsafe edges (never take), co-live
edges (take at most finitely often) and live-groups (if a group's source
recurs, some group edge must recur).  Synthesis produces a pair of templates
on the cooperative winning region W such that

* (permissiveness) every recurrence-satisfying run from W complies with the
  human template, and
* (sufficiency) any robot strategy following the robot template keeps every
  human-compliant run inside the winning condition.

The construction grows a secured region out of the color-2 vertices: robot
attractor closure alternating with human frontier waves.  Each wave
contributes one (possibly multi-source) human live-group containing exactly
the edges that cross into the secured region; since the secured region is
closed under robot attraction, every satisfying run must cross through these
human edges, which is what makes the groups permissive.  Robot edges that do
not make progress in the construction order become co-live, and progress
edges form per-vertex robot live-groups.  On small games the human template
is additionally enriched with per-vertex progress groups that are checked
individually for permissiveness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .domain import LassoRun, Owner
from .game import (
    AttractorMode,
    ParityGame,
    Region,
    attractor,
    attractor_layers,
    cooperative_buchi,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class StrategyTemplate:
    agent: Owner
    unsafe: frozenset[Edge] = frozenset()
    colive: frozenset[Edge] = frozenset()
    livegroups: tuple[frozenset[Edge], ...] = ()

    def __post_init__(self):
        if self.unsafe & self.colive:
            raise ValueError("unsafe and co-live edge sets must be disjoint")
        for group in self.livegroups:
            if not group:
                raise ValueError("live-groups must be non-empty")
            if group & self.unsafe:
                raise ValueError("live-group edges may not be unsafe")

    def check_edges(self, game: ParityGame) -> None:
        """Structural validation against a game (ownership and existence)."""
        for edge in itertools.chain(self.unsafe, self.colive, *self.livegroups):
            u, v = edge
            if game.owners[u] is not self.agent:
                raise ValueError(f"edge {edge} does not belong to {self.agent}")
            if v not in game.adjacency[u]:
                raise ValueError(f"edge {edge} is not in the game")

    def group_sources(self) -> set[int]:
        return {u for group in self.livegroups for (u, _) in group}

    def is_empty(self) -> bool:
        return not (self.unsafe or self.colive or self.livegroups)


@dataclass(frozen=True)
class TemplatePair:
    robot: StrategyTemplate
    human: StrategyTemplate
    winning: frozenset[int]

    def __post_init__(self):
        if self.robot.agent is not Owner.ROBOT or self.human.agent is not Owner.HUMAN:
            raise ValueError("pair must hold a robot template and a human template")


@dataclass(frozen=True)
class SynthesisResult:
    pair: TemplatePair
    rank: dict[int, int]  # construction-order measure on W; color-2 vertices at 0

    @property
    def winning(self) -> frozenset[int]:
        return self.pair.winning


def synthesize_templates(game: ParityGame, enrich_bound: int = 2000) -> TemplatePair:
    return synthesize(game, enrich_bound).pair


def synthesize(game: ParityGame, enrich_bound: int = 2000) -> SynthesisResult:
    """Build the template pair and the construction-order ranking it is based on."""
    bad = [v for v in range(game.num_vertices) if game.colors[v] not in (1, 2)]
    if bad:
        raise ValueError(f"colors outside {{1,2}} at vertices {bad[:5]}")

    winning = cooperative_buchi(game)
    rank, human_groups = _wave_structure(game, winning)
    color2 = {v for v in winning if game.colors[v] == 2}
    dist = attractor_layers(game, color2, AttractorMode.COOPERATIVE, within=winning)

    unsafe_h = frozenset(
        (u, v)
        for u in winning
        if game.owners[u] is Owner.HUMAN
        for v in game.adjacency[u]
        if v not in winning
    )
    unsafe_r = frozenset(
        (u, v)
        for u in winning
        if game.owners[u] is Owner.ROBOT
        for v in game.adjacency[u]
        if v not in winning
    )

    colive_r: set[Edge] = set()
    groups_r: list[frozenset[Edge]] = []
    for u in winning:
        if game.owners[u] is not Owner.ROBOT:
            continue
        inside = [(u, v) for v in game.adjacency[u] if v in winning]
        if rank[u] == 0:
            # restarting after a goal visit: keep only the quickest returns
            best = min(dist[v] for _, v in inside)
            colive_r.update(e for e in inside if dist[e[1]] > best)
            continue
        down = [e for e in inside if rank[e[1]] < rank[u]]
        flat = [e for e in inside if rank[e[1]] >= rank[u]]
        colive_r.update(flat)
        # progress edges that still walk away from the goal set are co-live
        # as well, as long as some non-detour progress edge remains
        useful = [e for e in down if dist[e[1]] <= dist[u]]
        if useful:
            colive_r.update(e for e in down if e not in useful)
        if down and flat:
            groups_r.append(frozenset(down))

    if game.num_vertices <= enrich_bound:
        enrichment = _sound_progress_groups(game, winning, dist)
        existing = set(human_groups)
        human_groups += [g for g in enrichment if g not in existing]

    human = StrategyTemplate(
        agent=Owner.HUMAN, unsafe=unsafe_h, livegroups=tuple(human_groups)
    )
    robot = StrategyTemplate(
        agent=Owner.ROBOT,
        unsafe=unsafe_r,
        colive=frozenset(colive_r),
        livegroups=tuple(groups_r),
    )
    pair = TemplatePair(robot=robot, human=human, winning=frozenset(winning))
    return SynthesisResult(pair=pair, rank=rank)


def _wave_structure(
    game: ParityGame, winning: Region
) -> tuple[dict[int, int], list[frozenset[Edge]]]:
    """Secured-region growth: robot attractor closure alternating with human
    frontier waves.  Returns the construction-order rank of every vertex in W
    (goal vertices at 0, each attractor layer and each wave one level higher)
    and the per-wave human live-groups."""
    rank: dict[int, int] = {}
    pending: dict[int, int] = {}
    # human vertices outside the secured region -> their edges into it
    cross: dict[int, set[int]] = {}
    groups: list[frozenset[Edge]] = []

    secured: Region = {v for v in winning if game.colors[v] == 2}
    for v in secured:
        rank[v] = 0
    level = 0
    frontier = sorted(secured)

    def absorb(new_frontier: list[int]) -> None:
        nonlocal level
        work = new_frontier
        while work:
            level += 1
            nxt: list[int] = []
            for v in work:
                for p in game.reverse[v]:
                    if p not in winning or p in rank:
                        continue
                    if game.owners[p] is Owner.ROBOT:
                        rank[p] = level
                        nxt.append(p)
                    else:
                        remaining = pending.get(p)
                        if remaining is None:
                            remaining = sum(1 for t in game.adjacency[p] if t in winning)
                        remaining -= 1
                        pending[p] = remaining
                        if remaining <= 0:
                            rank[p] = level
                            cross.pop(p, None)
                            nxt.append(p)
                        else:
                            cross.setdefault(p, set()).add(v)
            for v in nxt:
                cross.pop(v, None)
            work = nxt

    absorb(frontier)
    while len(rank) < len(winning):
        group = frozenset(
            (u, x) for u, targets in cross.items() if u not in rank for x in targets
        )
        if not group:
            raise AssertionError("secured region stalled inside the winning region")
        groups.append(group)
        sources = sorted({u for u, _ in group})
        level += 1
        for u in sources:
            rank[u] = level
            cross.pop(u, None)
        absorb(sources)
    return rank, groups


def _sound_progress_groups(
    game: ParityGame, winning: Region, dist: dict[int, int]
) -> list[frozenset[Edge]]:
    """Per-vertex human groups of shortest-distance progress edges, kept only
    when no satisfying cycle through the vertex can avoid them."""
    groups = []
    for v in sorted(winning):
        if game.owners[v] is not Owner.HUMAN or dist[v] == 0:
            continue
        down = [(v, t) for t in game.adjacency[v] if t in winning and dist[t] < dist[v]]
        flat = [t for t in game.adjacency[v] if t in winning and dist[t] >= dist[v]]
        if not down or not flat:
            continue
        if _group_is_permissive(game, winning, v, set(down)):
            groups.append(frozenset(down))
    return groups


def _group_is_permissive(
    game: ParityGame, winning: Region, v: int, group: set[Edge]
) -> bool:
    """True iff every color-2 cycle through ``v`` inside W uses a group edge."""

    def adj(u: int):
        return [t for t in game.adjacency[u] if t in winning and (u, t) not in group]

    forward = _reach([v], adj)
    backward = _reach(
        [v],
        lambda u: [
            t for t in game.reverse[u] if t in winning and (t, u) not in group
        ],
    )
    return not any(game.colors[b] == 2 for b in forward & backward)


def _reach(starts, adj_fn) -> set[int]:
    seen = set(starts)
    stack = list(starts)
    while stack:
        u = stack.pop()
        for t in adj_fn(u):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


# --------------------------------------------------------------------------
# Compliance
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplianceReport:
    compliant: bool
    violations: tuple[str, ...]


def check_run_compliance(run: LassoRun, template: StrategyTemplate) -> ComplianceReport:
    """Judge a lasso against a template.

    Unsafe edges may appear nowhere; co-live edges may not appear in the
    cycle; every live-group whose source occurs in the cycle must have a
    group edge in the cycle.
    """
    violations: list[str] = []
    steps = list(run.steps())
    for edge in steps:
        if edge in template.unsafe:
            violations.append(f"unsafe edge {edge[0]}->{edge[1]} taken")
    cycle_edges = run.cycle_edges()
    for edge in sorted(cycle_edges):
        if edge in template.colive:
            violations.append(f"co-live edge {edge[0]}->{edge[1]} recurs in cycle")
    cycle_vertices = set(run.cycle)
    for i, group in enumerate(template.livegroups):
        sources = {u for (u, _) in group}
        if sources & cycle_vertices and not (group & cycle_edges):
            shown = ",".join(f"{u}->{v}" for u, v in sorted(group))
            violations.append(f"live-group {{{shown}}} starved in cycle")
    return ComplianceReport(compliant=not violations, violations=tuple(violations))


# --------------------------------------------------------------------------
# Verification (exhaustive, for small games)
# --------------------------------------------------------------------------


class VerificationBoundError(ValueError):
    pass


@dataclass
class VerificationReport:
    permissive: bool
    sufficient: bool
    realizable: bool
    counterexamples: list[str] = field(default_factory=list)
    lassos: list[LassoRun] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.permissive and self.sufficient and self.realizable


def verify_template_pair(
    game: ParityGame,
    pair: TemplatePair,
    max_vertices: int = 14,
    max_strategies: int = 200_000,
) -> VerificationReport:
    """Executable check of the pair's two guarantees on a small game.

    (i) permissiveness: no satisfying lasso from W violates the human
    template; (ii) sufficiency: every positional robot strategy that follows
    the robot template keeps all human-compliant lassos from W satisfying;
    plus a realizability check that at least one such strategy exists.
    """
    if game.num_vertices > max_vertices:
        raise VerificationBoundError(
            f"game has {game.num_vertices} vertices, bound is {max_vertices}"
        )
    pair.human.check_edges(game)
    pair.robot.check_edges(game)

    report = VerificationReport(permissive=True, sufficient=True, realizable=False)
    winning = set(pair.winning)
    if not winning:
        report.realizable = True
        return report

    reach_w = _reach(sorted(winning), lambda u: game.adjacency[u])
    coop = cooperative_buchi(game)
    color2 = {v for v in range(game.num_vertices) if game.colors[v] == 2}

    _check_permissive(game, pair.human, winning, reach_w, coop, color2, report)
    _check_sufficient(game, pair, winning, reach_w, color2, max_strategies, report)
    return report


def _check_permissive(game, human, winning, reach_w, coop, color2, report):
    full_adj = lambda u: game.adjacency[u]
    for (u, x) in sorted(human.unsafe):
        if u in reach_w and x in coop:
            report.permissive = False
            report.counterexamples.append(
                f"permissiveness: satisfying lasso from W can take unsafe edge {u}->{x}"
            )
            lasso = _lasso_through_edge(game, winning, (u, x), coop, color2)
            if lasso:
                report.lassos.append(lasso)
    for (u, x) in sorted(human.colive):
        if u not in reach_w:
            continue
        fwd = _reach([x], full_adj)
        if u not in fwd:
            continue
        back = _reach([u], lambda t: game.reverse[t])
        if color2 & fwd & back:
            report.permissive = False
            report.counterexamples.append(
                f"permissiveness: satisfying cycle can recur through co-live edge {u}->{x}"
            )
    for group in human.livegroups:
        drop = set(group)
        adj = lambda t: [s for s in game.adjacency[t] if (t, s) not in drop]
        radj = lambda t: [s for s in game.reverse[t] if (s, t) not in drop]
        for source in sorted({u for (u, _) in group}):
            if source not in reach_w:
                continue
            fwd = _reach([source], adj)
            back = _reach([source], radj)
            if color2 & fwd & back:
                report.permissive = False
                shown = ",".join(f"{a}->{b}" for a, b in sorted(group))
                report.counterexamples.append(
                    "permissiveness: satisfying cycle recurs through "
                    f"{source} avoiding live-group {{{shown}}}"
                )
                break


def _check_sufficient(game, pair, winning, reach_w, color2, max_strategies, report):
    robot_vertices = sorted(
        v for v in range(game.num_vertices) if game.owners[v] is Owner.ROBOT
    )
    total = 1
    for v in robot_vertices:
        total *= max(1, len(game.adjacency[v]))
        if total > max_strategies:
            raise VerificationBoundError(
                f"more than {max_strategies} positional robot strategies"
            )

    human_groups = list(pair.human.livegroups)
    any_compliant = False
    for choice in itertools.product(
        *[game.adjacency[v] or (None,) for v in robot_vertices]
    ):
        strategy = dict(zip(robot_vertices, choice))
        if not _strategy_follows(game, strategy, pair.robot, winning):
            continue
        any_compliant = True
        report.realizable = True
        bad = _compliant_bad_walk(game, strategy, pair.human, winning, color2)
        if bad is not None:
            report.sufficient = False
            shown = ",".join(f"{v}->{t}" for v, t in sorted(strategy.items()))
            report.counterexamples.append(
                f"sufficiency: strategy {{{shown}}} admits a human-compliant "
                f"non-satisfying cycle over {sorted(bad[0])}"
            )
            if bad[1] is not None:
                report.lassos.append(bad[1])
            return
    report.realizable = any_compliant
    if not any_compliant:
        report.counterexamples.append(
            "realizability: no positional robot strategy follows the robot template"
        )


def _strategy_follows(game, strategy, robot_template, winning) -> bool:
    adj = lambda u: (
        (strategy[u],) if game.owners[u] is Owner.ROBOT else game.adjacency[u]
    )
    reachable = _reach(sorted(winning), adj)
    for v, t in strategy.items():
        if v in reachable and (v, t) in robot_template.unsafe:
            return False
    for v, t in strategy.items():
        if v not in reachable or (v, t) not in robot_template.colive:
            continue
        if v in _reach([t], adj):  # v lies on a reachable sigma-cycle
            return False
    for group in robot_template.livegroups:
        drop = set(group)
        adj_ng = lambda u: [s for s in adj(u) if (u, s) not in drop]
        for source in {u for (u, _) in group}:
            if source not in reachable or strategy.get(source) is None:
                continue
            if (source, strategy[source]) in drop:
                continue
            if source in _reach(list(adj_ng(source)), adj_ng):
                return False
    return True


def _compliant_bad_walk(game, strategy, human_template, winning, color2):
    """Search for a human-compliant, color-2-free recurrence under the given
    positional robot strategy, reachable from W.  Returns (vertex set, lasso)
    or None."""
    adj = lambda u: (
        (strategy[u],) if game.owners[u] is Owner.ROBOT else game.adjacency[u]
    )
    unsafe = human_template.unsafe
    adj_safe = lambda u: [t for t in adj(u) if (u, t) not in unsafe]
    reachable = _reach(sorted(winning), adj_safe)

    blocked = human_template.colive
    def adj_cycle(u):
        if u in color2:
            return []
        return [t for t in adj_safe(u) if t not in color2 and (u, t) not in blocked]

    groups = list(human_template.livegroups)
    for component in _sccs(sorted(reachable - color2), adj_cycle):
        if len(component) < 2:
            continue
        if len(component) > 18:
            raise VerificationBoundError(
                f"cycle component of size {len(component)} too large to enumerate"
            )
        comp = sorted(component)
        for size in range(2, len(comp) + 1):
            for subset in itertools.combinations(comp, size):
                u_set = set(subset)
                sub_adj = {u: [t for t in adj_cycle(u) if t in u_set] for u in u_set}
                if not _strongly_connected(u_set, sub_adj):
                    continue
                ok = True
                for group in groups:
                    if {a for (a, _) in group} & u_set:
                        if not any(
                            a in u_set and b in sub_adj[a] for (a, b) in group
                        ):
                            ok = False
                            break
                if ok:
                    lasso = _build_bad_lasso(game, winning, adj_safe, u_set, sub_adj)
                    return u_set, lasso
    return None


def _sccs(vertices, adj_fn):
    """Tarjan over the given vertex set."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[set[int]] = []
    counter = itertools.count()
    vset = set(vertices)

    def strongconnect(v):
        work = [(v, iter([t for t in adj_fn(v) if t in vset]))]
        index[v] = low[v] = next(counter)
        stack.append(v)
        on_stack.add(v)
        while work:
            node, it = work[-1]
            advanced = False
            for t in it:
                if t not in index:
                    index[t] = low[t] = next(counter)
                    stack.append(t)
                    on_stack.add(t)
                    work.append((t, iter([s for s in adj_fn(t) if s in vset])))
                    advanced = True
                    break
                if t in on_stack:
                    low[node] = min(low[node], index[t])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == node:
                        break
                out.append(comp)

    for v in vertices:
        if v not in index:
            strongconnect(v)
    return out


def _strongly_connected(u_set: set[int], sub_adj: dict[int, list[int]]) -> bool:
    start = next(iter(u_set))
    if _reach([start], lambda u: sub_adj[u]) != u_set:
        return False
    rev: dict[int, list[int]] = {u: [] for u in u_set}
    for u, targets in sub_adj.items():
        for t in targets:
            rev[t].append(u)
    return _reach([start], lambda u: rev[u]) == u_set


def _bfs_path(starts, adj_fn, goal_pred) -> list[int] | None:
    from collections import deque

    parents: dict[int, int | None] = {s: None for s in starts}
    queue = deque(starts)
    while queue:
        u = queue.popleft()
        if goal_pred(u):
            path = [u]
            while parents[path[-1]] is not None:
                path.append(parents[path[-1]])
            return list(reversed(path))
        for t in adj_fn(u):
            if t not in parents:
                parents[t] = u
                queue.append(t)
    return None


def _build_bad_lasso(game, winning, adj_safe, u_set, sub_adj) -> LassoRun | None:
    prefix_path = _bfs_path(sorted(winning), adj_safe, lambda u: u in u_set)
    if prefix_path is None:
        return None
    anchor = prefix_path[-1]
    walk = _closed_walk_covering(anchor, u_set, sub_adj)
    return LassoRun(prefix=tuple(prefix_path[:-1]), cycle=tuple(walk))


def _closed_walk_covering(start: int, u_set: set[int], sub_adj) -> list[int]:
    """A closed walk from ``start`` traversing every edge of the subgraph."""
    edges = sorted((u, t) for u in u_set for t in sub_adj[u])
    walk = [start]
    current = start
    for (a, b) in edges:
        path = _bfs_path([current], lambda u: sub_adj[u], lambda u: u == a)
        walk += path[1:] + [b]
        current = b
    back = _bfs_path([current], lambda u: sub_adj[u], lambda u: u == start)
    walk += back[1:]
    return walk[:-1] if len(walk) > 1 else walk


def _lasso_through_edge(game, winning, edge, coop, color2) -> LassoRun | None:
    u, x = edge
    adj = lambda t: game.adjacency[t]
    to_u = _bfs_path(sorted(winning), adj, lambda t: t == u)
    if to_u is None:
        return None
    coop_adj = lambda t: [s for s in game.adjacency[t] if s in coop]
    to_good = _bfs_path([x], coop_adj, lambda t: t in color2 and any(
        t in _reach([s], coop_adj) for s in coop_adj(t)
    ))
    if to_good is None:
        return None
    b = to_good[-1]
    succ = [s for s in coop_adj(b) if b in _reach([s], coop_adj)]
    loop = _bfs_path([succ[0]], coop_adj, lambda t: t == b)
    cycle = [b] + (loop[:-1] if loop and len(loop) > 1 else [])
    return LassoRun(prefix=tuple(to_u + to_good[:-1]), cycle=tuple(cycle))


# --------------------------------------------------------------------------
# Runtime edge filtering
# --------------------------------------------------------------------------


def enabled_robot_actions(
    game: ParityGame,
    pair: TemplatePair,
    v: int,
    budgets: dict[Edge, int] | None = None,
) -> list[Edge]:
    """Edges the robot may take at ``v``: not unsafe, co-live only while its
    budget lasts, and never leaving the winning region when an inside
    alternative exists.  Ascending target order.  An empty result signals
    that re-synthesis is needed."""
    if game.owners[v] is not Owner.ROBOT:
        raise ValueError(f"vertex {v} is not robot-owned")
    budgets = budgets or {}
    kept = []
    for t in game.adjacency[v]:
        edge = (v, t)
        if edge in pair.robot.unsafe:
            continue
        if edge in pair.robot.colive and budgets.get(edge, 0) <= 0:
            continue
        kept.append(edge)
    inside = [e for e in kept if e[1] in pair.winning]
    return inside if inside else kept


# --------------------------------------------------------------------------
# Template document format
# --------------------------------------------------------------------------


class TemplateFormatError(ValueError):
    pass


def _edges_text(edges) -> str:
    return " ".join(f"{u}->{v}" for u, v in sorted(edges))


def serialize_template(template: StrategyTemplate) -> str:
    lines = [f"template {'robot' if template.agent is Owner.ROBOT else 'human'}"]
    lines.append(f"unsafe: {_edges_text(template.unsafe)}".rstrip())
    lines.append(f"colive: {_edges_text(template.colive)}".rstrip())
    for group in template.livegroups:
        lines.append(f"livegroup: {_edges_text(group)}")
    return "\n".join(lines) + "\n"


def _parse_edges(text: str, line_no: int) -> frozenset[Edge]:
    edges = []
    for token in text.split():
        src, sep, dst = token.partition("->")
        if not sep:
            raise TemplateFormatError(f"line {line_no}: bad edge token {token!r}")
        edges.append((int(src), int(dst)))
    return frozenset(edges)


def parse_template(text: str) -> StrategyTemplate:
    agent = None
    unsafe: frozenset[Edge] = frozenset()
    colive: frozenset[Edge] = frozenset()
    groups: list[frozenset[Edge]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "template":
            if rest not in ("robot", "human"):
                raise TemplateFormatError(f"line {line_no}: agent must be robot|human")
            agent = Owner.ROBOT if rest == "robot" else Owner.HUMAN
        elif head == "unsafe:":
            unsafe = _parse_edges(rest, line_no)
        elif head == "colive:":
            colive = _parse_edges(rest, line_no)
        elif head == "livegroup:":
            groups.append(_parse_edges(rest, line_no))
        else:
            raise TemplateFormatError(f"line {line_no}: unknown directive {head!r}")
    if agent is None:
        raise TemplateFormatError("missing template header")
    return StrategyTemplate(agent, unsafe, colive, tuple(groups))


def serialize_template_pair(pair: TemplatePair) -> str:
    winning = " ".join(str(v) for v in sorted(pair.winning))
    return (
        "template-pair\n"
        f"winning: {winning}\n"
        + serialize_template(pair.robot)
        + serialize_template(pair.human)
    )


def parse_template_pair(text: str) -> TemplatePair:
    header, *blocks = text.split("template ")
    winning: frozenset[int] = frozenset()
    for raw in header.splitlines():
        line = raw.strip()
        if line.startswith("winning:"):
            winning = frozenset(int(x) for x in line.split(":", 1)[1].split())
    templates = [parse_template("template " + block) for block in blocks if block.strip()]
    by_agent = {t.agent: t for t in templates}
    if set(by_agent) != {Owner.ROBOT, Owner.HUMAN}:
        raise TemplateFormatError("pair document needs one robot and one human template")
    return TemplatePair(robot=by_agent[Owner.ROBOT], human=by_agent[Owner.HUMAN], winning=winning)
