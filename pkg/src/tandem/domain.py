"""Turn-based planning domains: alternating two-agent graphs with labeled states.

A domain is a bipartite directed graph over dense integer state ids.  Each
state belongs to the agent whose turn it is (robot or human), carries a label
(the set of propositions holding there), and an optional short display text.
Edges always cross ownership (strict turn alternation) and every state has at
least one outgoing edge, so all runs are infinite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Sequence


class Owner(Enum):
    ROBOT = "R"
    HUMAN = "H"

    @property
    def other(self) -> "Owner":
        return Owner.HUMAN if self is Owner.ROBOT else Owner.ROBOT


@dataclass(frozen=True)
class StateInfo:
    owner: Owner
    label: frozenset[str]
    display: str = ""


@dataclass(frozen=True)
class PlanningDomain:
    propositions: tuple[str, ...]
    states: tuple[StateInfo, ...]
    initial: int
    adjacency: tuple[tuple[int, ...], ...]  # ascending successor ids per state
    edge_display: Mapping[tuple[int, int], str] = field(default_factory=dict)
    name: str = "domain"

    def owner(self, s: int) -> Owner:
        return self.states[s].owner

    def label(self, s: int) -> frozenset[str]:
        return self.states[s].label

    def edges(self) -> Iterator[tuple[int, int]]:
        for src, targets in enumerate(self.adjacency):
            for dst in targets:
                yield (src, dst)

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_edges(self) -> int:
        return sum(len(t) for t in self.adjacency)


def successors(domain: PlanningDomain, s: int) -> list[int]:
    """Outgoing targets of ``s`` in ascending id order."""
    if not 0 <= s < domain.num_states:
        raise KeyError(f"unknown state id {s}")
    return list(domain.adjacency[s])


def validate_domain(domain: PlanningDomain) -> list[str]:
    """Check domain well-formedness; returns one message per violation.

    Never raises: an empty result means the domain satisfies all structural
    invariants (turn alternation, totality, initial membership, label
    soundness against the declared propositions).
    """
    problems: list[str] = []
    props = set(domain.propositions)
    if len(domain.adjacency) != domain.num_states:
        problems.append(
            f"adjacency has {len(domain.adjacency)} rows for {domain.num_states} states"
        )
        return problems
    if not 0 <= domain.initial < domain.num_states:
        problems.append(f"initial state {domain.initial} is not a state")
    for s, info in enumerate(domain.states):
        extra = info.label - props
        if extra:
            problems.append(f"state {s} labeled with undeclared propositions {sorted(extra)}")
        targets = domain.adjacency[s]
        if not targets:
            problems.append(f"state {s} has no outgoing edge")
        if list(targets) != sorted(set(targets)):
            problems.append(f"state {s} has unsorted or duplicate successors")
        for t in targets:
            if not 0 <= t < domain.num_states:
                problems.append(f"edge ({s},{t}) targets unknown state")
            elif domain.states[t].owner is info.owner:
                problems.append(
                    f"edge ({_state_name(domain, s)},{_state_name(domain, t)}) "
                    "violates turn alternation"
                )
    return problems


def _state_name(domain: PlanningDomain, s: int) -> str:
    display = domain.states[s].display
    return display if display else str(s)


@dataclass(frozen=True)
class LassoRun:
    """Finite representation prefix . cycle^omega of an ultimately periodic run."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be non-empty")

    def steps(self) -> Iterator[tuple[int, int]]:
        """All edges of the lasso: prefix, junction, cycle, and the wrap edge."""
        seq = self.prefix + self.cycle
        for a, b in zip(seq, seq[1:]):
            yield (a, b)
        yield (self.cycle[-1], self.cycle[0])

    def cycle_edges(self) -> set[tuple[int, int]]:
        edges = set(zip(self.cycle, self.cycle[1:]))
        edges.add((self.cycle[-1], self.cycle[0]))
        return edges

    def validate(self, adjacency: Sequence[Sequence[int]]) -> None:
        for a, b in self.steps():
            if b not in adjacency[a]:
                raise ValueError(f"lasso step ({a},{b}) is not an edge")


# ---------------------------------------------------------------------------
# Domain text format.
#
# A single UTF-8 document with line-oriented sections:
#
#   domain <name>
#   propositions: p q r
#   initial: <id>
#   state <id> <R|H> {p,q} [display text]
#   edge <src> <dst> [display text]
#
# Comment lines start with '#'.  Labels use `{}` for the empty set.  States
# and edges are serialized in ascending order, so parse . serialize is the
# identity on canonical documents.
# ---------------------------------------------------------------------------


class DomainFormatError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def serialize_domain(domain: PlanningDomain) -> str:
    lines = [f"domain {domain.name}"]
    lines.append("propositions: " + " ".join(domain.propositions))
    lines.append(f"initial: {domain.initial}")
    for s, info in enumerate(domain.states):
        label = "{" + ",".join(sorted(info.label)) + "}"
        entry = f"state {s} {info.owner.value} {label}"
        if info.display:
            entry += f" {info.display}"
        lines.append(entry)
    for src, dst in domain.edges():
        entry = f"edge {src} {dst}"
        display = domain.edge_display.get((src, dst), "")
        if display:
            entry += f" {display}"
        lines.append(entry)
    return "\n".join(lines) + "\n"


def parse_domain(text: str) -> PlanningDomain:
    name = "domain"
    propositions: tuple[str, ...] | None = None
    initial: int | None = None
    states: dict[int, StateInfo] = {}
    edges: dict[int, list[int]] = {}
    edge_display: dict[tuple[int, int], str] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "domain":
            name = rest or name
        elif head == "propositions:":
            propositions = tuple(rest.split())
        elif head == "initial:":
            try:
                initial = int(rest)
            except ValueError:
                raise DomainFormatError(line_no, f"bad initial id {rest!r}")
        elif head == "state":
            parts = rest.split(None, 3)
            if len(parts) < 3:
                raise DomainFormatError(line_no, "state needs: id, owner, label")
            try:
                sid = int(parts[0])
            except ValueError:
                raise DomainFormatError(line_no, f"bad state id {parts[0]!r}")
            try:
                owner = Owner(parts[1])
            except ValueError:
                raise DomainFormatError(line_no, f"owner must be R or H, got {parts[1]!r}")
            label_text = parts[2]
            if not (label_text.startswith("{") and label_text.endswith("}")):
                raise DomainFormatError(line_no, f"label must be braced, got {label_text!r}")
            inner = label_text[1:-1]
            label = frozenset(x for x in inner.split(",") if x)
            display = parts[3] if len(parts) > 3 else ""
            if sid in states:
                raise DomainFormatError(line_no, f"duplicate state {sid}")
            states[sid] = StateInfo(owner, label, display)
        elif head == "edge":
            parts = rest.split(None, 2)
            if len(parts) < 2:
                raise DomainFormatError(line_no, "edge needs: src, dst")
            try:
                src, dst = int(parts[0]), int(parts[1])
            except ValueError:
                raise DomainFormatError(line_no, f"bad edge endpoints {parts[:2]}")
            edges.setdefault(src, []).append(dst)
            if len(parts) > 2:
                edge_display[(src, dst)] = parts[2]
        else:
            raise DomainFormatError(line_no, f"unknown directive {head!r}")

    if propositions is None:
        raise DomainFormatError(0, "missing propositions section")
    if initial is None:
        raise DomainFormatError(0, "missing initial section")
    if sorted(states) != list(range(len(states))):
        raise DomainFormatError(0, "state ids must be dense 0..n-1")
    adjacency = tuple(tuple(sorted(edges.get(s, []))) for s in range(len(states)))
    return PlanningDomain(
        propositions=propositions,
        states=tuple(states[s] for s in range(len(states))),
        initial=initial,
        adjacency=adjacency,
        edge_display=edge_display,
        name=name,
    )
