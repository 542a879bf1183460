"""Task formulas and their deterministic monitors.

Supported task shape: a conjunction of safety conjuncts ``G <prop>`` and
recurrence conjuncts ``G F <prop>``, where ``<prop>`` is propositional
(atoms, ``!``, ``&``, ``|``, ``true``, parentheses).  Anything else is
rejected as outside the supported fragment.

A task compiles to a deterministic monitor over label sets with colors in
{1, 2}: a round-robin counter over the recurrence goals plus one ``wrap``
state (color 2, entered each time the last goal is ticked off) and one
absorbing ``dead`` state (entered on any safety violation).  A run is
accepted exactly when the maximum color seen infinitely often is 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Union


# --------------------------------------------------------------------------
# Propositional formulas
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class TrueConst:
    pass


@dataclass(frozen=True)
class Not:
    child: "PropFormula"


@dataclass(frozen=True)
class And:
    left: "PropFormula"
    right: "PropFormula"


@dataclass(frozen=True)
class Or:
    left: "PropFormula"
    right: "PropFormula"


PropFormula = Union[Atom, TrueConst, Not, And, Or]


def eval_prop(formula: PropFormula, label: Iterable[str]) -> bool:
    label = label if isinstance(label, (set, frozenset)) else frozenset(label)
    if isinstance(formula, Atom):
        return formula.name in label
    if isinstance(formula, TrueConst):
        return True
    if isinstance(formula, Not):
        return not eval_prop(formula.child, label)
    if isinstance(formula, And):
        return eval_prop(formula.left, label) and eval_prop(formula.right, label)
    if isinstance(formula, Or):
        return eval_prop(formula.left, label) or eval_prop(formula.right, label)
    raise TypeError(f"not a propositional formula: {formula!r}")


def prop_to_text(formula: PropFormula) -> str:
    if isinstance(formula, Atom):
        return formula.name
    if isinstance(formula, TrueConst):
        return "true"
    if isinstance(formula, Not):
        return f"!{prop_to_text(formula.child)}"
    if isinstance(formula, And):
        return f"({prop_to_text(formula.left)} & {prop_to_text(formula.right)})"
    if isinstance(formula, Or):
        return f"({prop_to_text(formula.left)} | {prop_to_text(formula.right)})"
    raise TypeError(f"not a propositional formula: {formula!r}")


@dataclass(frozen=True)
class TaskFormula:
    """Conjunction of safety parts (each `always p`) and recurrence goals
    (each `always eventually p`)."""

    safety: tuple[PropFormula, ...]
    recurrence: tuple[PropFormula, ...]

    def __post_init__(self):
        if not self.safety and not self.recurrence:
            raise ValueError("task must have at least one conjunct")

    def to_text(self) -> str:
        parts = [f"G {prop_to_text(p)}" for p in self.safety]
        parts += [f"G F {prop_to_text(p)}" for p in self.recurrence]
        return " & ".join(parts)


# --------------------------------------------------------------------------
# Task surface syntax
# --------------------------------------------------------------------------


class TaskSyntaxError(ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(f"at {position}: {message}")
        self.position = position


class UnsupportedFragmentError(TaskSyntaxError):
    def __init__(self, position: int, operator: str):
        ValueError.__init__(
            self, f"at {position}: operator {operator!r} is outside the supported "
            f"fragment (only 'G p' and 'G F p' conjuncts)"
        )
        self.position = position
        self.operator = operator


_TOKEN_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()&|!":
            tokens.append((ch, i))
            i += 1
        elif ch in _TOKEN_CHARS:
            j = i
            while j < len(text) and text[j] in _TOKEN_CHARS:
                j += 1
            tokens.append((text[i:j], i))
            i = j
        else:
            raise TaskSyntaxError(i, f"unexpected character {ch!r}")
    return tokens


class _Parser:
    def __init__(self, text: str, ap: Iterable[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ap = set(ap)
        self.end = len(text)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, self.end)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, what: str):
        tok, at = self.take()
        if tok != what:
            if tok in ("G", "F", "X", "U", "W", "R"):
                raise UnsupportedFragmentError(at, tok)
            raise TaskSyntaxError(at, f"expected {what!r}, got {tok!r}")

    def parse_task(self) -> TaskFormula:
        safety: list[PropFormula] = []
        recurrence: list[PropFormula] = []
        while True:
            tok, at = self.take()
            if tok != "G":
                if tok in ("F", "X", "U", "W", "R"):
                    raise UnsupportedFragmentError(at, tok)
                raise TaskSyntaxError(at, f"conjunct must start with 'G', got {tok!r}")
            tok, _ = self.peek()
            if tok == "F":
                self.take()
                recurrence.append(self.parse_primary())
            else:
                safety.append(self.parse_primary())
            tok, at = self.peek()
            if tok is None:
                break
            if tok != "&":
                if tok in ("G", "F", "X", "U", "W", "R"):
                    raise UnsupportedFragmentError(at, tok)
                raise TaskSyntaxError(at, f"expected '&' between conjuncts, got {tok!r}")
            self.take()
        return TaskFormula(safety=tuple(safety), recurrence=tuple(recurrence))

    def parse_primary(self) -> PropFormula:
        tok, at = self.take()
        if tok == "!":
            return Not(self.parse_primary())
        if tok == "(":
            inner = self.parse_or()
            self.expect(")")
            return inner
        return self._atom(tok, at)

    def parse_or(self) -> PropFormula:
        left = self.parse_and()
        while self.peek()[0] == "|":
            self.take()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> PropFormula:
        left = self.parse_unary()
        while self.peek()[0] == "&":
            self.take()
            left = And(left, self.parse_unary())
        return left

    def parse_unary(self) -> PropFormula:
        tok, at = self.peek()
        if tok == "!":
            self.take()
            return Not(self.parse_unary())
        if tok == "(":
            self.take()
            inner = self.parse_or()
            self.expect(")")
            return inner
        self.take()
        return self._atom(tok, at)

    def _atom(self, tok, at) -> PropFormula:
        if tok is None:
            raise TaskSyntaxError(at, "unexpected end of input")
        if tok in ("G", "F", "X", "U", "W", "R"):
            raise UnsupportedFragmentError(at, tok)
        if tok in ("true", "TRUE", "True"):
            return TrueConst()
        if tok in ("&", "|", ")", "("):
            raise TaskSyntaxError(at, f"expected a proposition, got {tok!r}")
        if tok not in self.ap:
            raise TaskSyntaxError(at, f"unknown proposition {tok!r}")
        return Atom(tok)


def parse_task(text: str, ap: Iterable[str]) -> TaskFormula:
    """Parse a task in the documented grammar against the given propositions."""
    parser = _Parser(text, ap)
    if parser.peek()[0] is None:
        raise TaskSyntaxError(0, "empty task")
    return parser.parse_task()


# --------------------------------------------------------------------------
# Monitors
# --------------------------------------------------------------------------


class MonitorFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ParityMonitor:
    """Deterministic, total monitor over label sets with state colors in {1,2}."""

    num_states: int
    initial: int
    colors: tuple[int, ...]
    stepper: Callable[[int, frozenset[str]], int]
    alphabet: tuple[str, ...] = ()

    def step(self, state: int, label: Iterable[str]) -> int:
        label = label if isinstance(label, frozenset) else frozenset(label)
        nxt = self.stepper(state, label)
        if not 0 <= nxt < self.num_states:
            raise ValueError(f"monitor stepped to unknown state {nxt}")
        return nxt

    def color(self, state: int) -> int:
        return self.colors[state]


def compile_monitor(task: TaskFormula) -> ParityMonitor:
    """Round-robin construction over the recurrence goals.

    States: plain goal indices 0..k-1, then ``wrap`` (color 2), then ``dead``.
    Advancing past the last goal enters ``wrap``; failing any safety conjunct
    jumps to ``dead`` and stays there.  With no recurrence goals the single
    live state has color 2.
    """
    safety = task.safety
    goals = task.recurrence
    k = len(goals)

    if k == 0:
        live, dead = 0, 1

        def step0(state: int, label: frozenset[str]) -> int:
            if state == dead or not all(eval_prop(p, label) for p in safety):
                return dead
            return live

        return ParityMonitor(2, live, (2, 1), step0)

    wrap, dead = k, k + 1
    colors = tuple([1] * k + [2, 1])

    def step(state: int, label: frozenset[str]) -> int:
        if state == dead or not all(eval_prop(p, label) for p in safety):
            return dead
        goal = 0 if state == wrap else state
        if eval_prop(goals[goal], label):
            nxt = (goal + 1) % k
            return wrap if nxt == 0 else nxt
        return goal  # wrap falls back to its plain twin until goal 0 ticks

    return ParityMonitor(k + 2, 0, colors, step)


def monitor_accepts(monitor: ParityMonitor, labels_prefix, labels_cycle) -> bool:
    """Acceptance of the ultimately periodic word prefix . cycle^omega.

    Runs the monitor until (state, cycle position) repeats, then checks the
    colors on the final loop.  Shipped as a first-class oracle.
    """
    if not labels_cycle:
        raise ValueError("cycle must be non-empty")
    state = monitor.initial
    for label in labels_prefix:
        state = monitor.step(state, label)
    seen: dict[tuple[int, int], int] = {}
    trace: list[int] = []
    pos = 0
    while (state, pos) not in seen:
        seen[(state, pos)] = len(trace)
        state = monitor.step(state, labels_cycle[pos])
        trace.append(monitor.color(state))
        pos = (pos + 1) % len(labels_cycle)
    loop_colors = trace[seen[(state, pos)] :]
    return max(loop_colors) == 2


def task_accepts(task: TaskFormula, labels_prefix, labels_cycle) -> bool:
    """Direct semantic evaluation on the lasso trace, independent of monitors."""
    every = list(labels_prefix) + list(labels_cycle)
    if not all(eval_prop(p, label) for p in task.safety for label in every):
        return False
    return all(
        any(eval_prop(g, label) for label in labels_cycle) for g in task.recurrence
    )


# --------------------------------------------------------------------------
# Monitor document format
#
#   monitor
#   alphabet: p q
#   states: 3
#   initial: 0
#   color 0 1
#   trans 0 {p,q} 1
#   default 0 0
#
# Transitions are keyed by exact label sets; each state needs a default edge
# unless its table covers every subset of the alphabet.
# --------------------------------------------------------------------------


def export_monitor(monitor: ParityMonitor, alphabet: Iterable[str] | None = None) -> str:
    alphabet = tuple(alphabet if alphabet is not None else monitor.alphabet)
    if len(alphabet) > 12:
        raise MonitorFormatError(
            f"export requires an alphabet of at most 12 propositions, got {len(alphabet)}"
        )
    lines = ["monitor", "alphabet: " + " ".join(alphabet), f"states: {monitor.num_states}",
             f"initial: {monitor.initial}"]
    for s in range(monitor.num_states):
        lines.append(f"color {s} {monitor.color(s)}")
    subsets = _all_subsets(alphabet)
    for s in range(monitor.num_states):
        targets = {label: monitor.step(s, label) for label in subsets}
        # factor the most common target out as the default edge
        default = max(set(targets.values()), key=lambda t: sum(1 for v in targets.values() if v == t))
        for label in subsets:
            if targets[label] != default:
                lines.append(f"trans {s} {{{','.join(sorted(label))}}} {targets[label]}")
        lines.append(f"default {s} {default}")
    return "\n".join(lines) + "\n"


def import_monitor(text: str) -> ParityMonitor:
    alphabet: tuple[str, ...] = ()
    num_states = None
    initial = None
    colors: dict[int, int] = {}
    table: dict[tuple[int, frozenset[str]], int] = {}
    defaults: dict[int, int] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line == "monitor":
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "alphabet:":
            alphabet = tuple(rest.split())
        elif head == "states:":
            num_states = int(rest)
        elif head == "initial:":
            initial = int(rest)
        elif head == "color":
            s, c = rest.split()
            colors[int(s)] = int(c)
        elif head == "trans":
            s, label_text, t = rest.split()
            if not (label_text.startswith("{") and label_text.endswith("}")):
                raise MonitorFormatError(f"line {line_no}: label must be braced")
            label = frozenset(x for x in label_text[1:-1].split(",") if x)
            table[(int(s), label)] = int(t)
        elif head == "default":
            s, t = rest.split()
            defaults[int(s)] = int(t)
        else:
            raise MonitorFormatError(f"line {line_no}: unknown directive {head!r}")

    if num_states is None or initial is None:
        raise MonitorFormatError("monitor document needs states: and initial:")
    for s in range(num_states):
        if s not in colors:
            raise MonitorFormatError(f"state {s} has no color")
        if colors[s] not in (1, 2):
            raise MonitorFormatError(
                f"state {s} has unsupported color {colors[s]} (only 1 and 2)"
            )
        if s not in defaults:
            covered = {label for (q, label) in table if q == s}
            if covered != set(_all_subsets(alphabet)):
                raise MonitorFormatError(f"state {s} has no default and an incomplete table")
    for (s, _), t in table.items():
        if not (0 <= s < num_states and 0 <= t < num_states):
            raise MonitorFormatError(f"transition references unknown state {s}->{t}")
    for s, t in defaults.items():
        if not (0 <= s < num_states and 0 <= t < num_states):
            raise MonitorFormatError(f"default references unknown state {s}->{t}")

    color_tuple = tuple(colors[s] for s in range(num_states))
    frozen_table = dict(table)
    frozen_defaults = dict(defaults)

    def step(state: int, label: frozenset[str]) -> int:
        key = (state, frozenset(label) & set(alphabet))
        if key in frozen_table:
            return frozen_table[key]
        if state in frozen_defaults:
            return frozen_defaults[state]
        raise MonitorFormatError(f"no transition from state {state} on {set(label)!r}")

    return ParityMonitor(num_states, initial, color_tuple, step, alphabet)


def _all_subsets(alphabet: tuple[str, ...]) -> list[frozenset[str]]:
    subsets = [frozenset()]
    for p in alphabet:
        subsets += [s | {p} for s in subsets]
    return subsets
