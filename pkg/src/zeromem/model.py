"""Execution semantics for a memoryless agent that colours vertices.

An agent standing on vertex ``v`` observes an :class:`Environment`: its own
colour and how many neighbours carry each colour.  A strategy maps that
observation to :data:`STOP` or to a :class:`Move` (colour to write on ``v``,
colour class of the neighbour to walk into).  Which neighbour of that class
is taken is up to the adversary.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence, Union

from .graph import Graph


def mod1(n: int, m: int) -> int:
    """Modulo shifted into ``1..m``: ``((n - 1) mod m) + 1``."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    return (n - 1) % m + 1


class Environment(NamedTuple):
    """Own colour plus sorted ``(colour, count)`` pairs of the neighbourhood."""

    self_color: int
    counts: tuple[tuple[int, int], ...]

    @classmethod
    def from_colors(cls, self_color: int, neighbor_colors: Sequence[int]) -> Environment:
        return cls(self_color, tuple(sorted(Counter(neighbor_colors).items())))

    @classmethod
    def of(cls, self_color: int, counts: dict[int, int] | None = None) -> Environment:
        items = (counts or {}).items()
        return cls(self_color, tuple(sorted((c, k) for c, k in items if k > 0)))

    def count(self, color: int) -> int:
        for c, k in self.counts:
            if c == color:
                return k
        return 0

    @property
    def degree(self) -> int:
        return sum(k for _, k in self.counts)

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.counts)

    def colored(self) -> tuple[int, ...]:
        """Nonzero neighbour colours as a sorted multiset."""
        return tuple(c for c, k in self.counts if c for _ in range(k))

    def render(self) -> str:
        body = ",".join(f"{c}:{k}" for c, k in self.counts)
        return f"({self.self_color}|{body})"

    @classmethod
    def parse(cls, text: str) -> Environment:
        text = text.strip()
        if not (text.startswith("(") and text.endswith(")") and "|" in text):
            raise ValueError(f"bad environment {text!r}")
        head, body = text[1:-1].split("|", 1)
        counts = {}
        for part in filter(None, body.split(",")):
            c, k = part.split(":")
            counts[int(c)] = int(k)
        return cls.of(int(head), counts)


class Move(NamedTuple):
    assign: int
    target: int


class _Stop:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "STOP"

    def __reduce__(self):
        return (_Stop, ())


STOP = _Stop()
Decision = Union[Move, _Stop]


class NoRuleApplies(Exception):
    """A strategy has no rule for the observed environment."""

    def __init__(self, env: Environment, detail: str = ""):
        super().__init__(f"no rule for {env.render()}" + (f": {detail}" if detail else ""))
        self.env = env


class IllegalMoveError(Exception):
    pass


@dataclass(frozen=True)
class Strategy:
    """A named, deterministic map from environments to decisions.

    ``palette`` bounds the colours the strategy may write (``None`` means
    unbounded).  Without ``recoloring`` a coloured vertex keeps its colour.
    """

    name: str
    decide: Callable[[Environment], Decision] = field(repr=False)
    palette: int | None = None
    recoloring: bool = False

    def __call__(self, env: Environment) -> Decision:
        return self.decide(env)


def check_legal(strategy: Strategy, env: Environment, decision: Decision) -> str | None:
    """Return a reason if ``decision`` may not be played in ``env``."""
    if decision is STOP:
        return None
    assign, target = decision
    if env.count(target) == 0:
        return f"no neighbour of colour {target}"
    if assign < 0:
        return f"negative colour {assign}"
    if strategy.palette is not None and assign > strategy.palette:
        return f"colour {assign} outside palette 1..{strategy.palette}"
    if not strategy.recoloring and env.self_color != 0 and assign != env.self_color:
        return f"recolouring {env.self_color} -> {assign} is not allowed"
    return None


@dataclass(frozen=True)
class RunState:
    position: int
    coloring: tuple[int, ...]
    visited: frozenset[int]
    steps: int = 0

    @classmethod
    def initial(cls, g: Graph, start: int) -> RunState:
        if not 0 <= start < g.n:
            raise ValueError(f"start vertex {start} not in graph")
        return cls(start, (0,) * g.n, frozenset((start,)))

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return self.position, self.coloring


def observe(g: Graph, state: RunState) -> Environment:
    col = state.coloring
    return Environment.from_colors(col[state.position], [col[u] for u in g.adjacency[state.position]])


def candidates(g: Graph, state: RunState, target: int) -> list[int]:
    """Neighbours the adversary may pick for a move into colour ``target``."""
    col = state.coloring
    return [u for u in g.adjacency[state.position] if col[u] == target]


Chooser = Callable[[Sequence[int]], int]


def step(
    g: Graph, strategy: Strategy, state: RunState, choose: Chooser
) -> tuple[RunState, Decision]:
    """Play one decision.  ``choose`` picks a vertex from the candidate list.

    Raises :class:`NoRuleApplies` or :class:`IllegalMoveError`.
    """
    env = observe(g, state)
    decision = strategy(env)
    reason = check_legal(strategy, env, decision)
    if reason:
        raise IllegalMoveError(reason)
    if decision is STOP:
        return state, decision
    cands = candidates(g, state, decision.target)
    nxt = choose(cands)
    if nxt not in cands:
        raise ValueError(f"adversary picked {nxt}, not among {cands}")
    coloring = list(state.coloring)
    coloring[state.position] = decision.assign
    return (
        RunState(nxt, tuple(coloring), state.visited | {nxt}, state.steps + 1),
        decision,
    )


# ------------------------------------------------------------------ outcomes


@dataclass(frozen=True)
class Success:
    kind = "Success"


@dataclass(frozen=True)
class IllegalMove:
    step: int
    reason: str
    kind = "IllegalMove"


@dataclass(frozen=True)
class StoppedWrongVertex:
    vertex: int
    kind = "StoppedWrongVertex"


@dataclass(frozen=True)
class StoppedIncomplete:
    missing: frozenset[int]
    kind = "StoppedIncomplete"


@dataclass(frozen=True)
class InfiniteLoop:
    step: int
    position: int
    coloring: tuple[int, ...]
    kind = "InfiniteLoop"


@dataclass(frozen=True)
class StrategyStuck:
    environment: Environment
    kind = "StrategyStuck"


Outcome = Union[Success, IllegalMove, StoppedWrongVertex, StoppedIncomplete, InfiniteLoop, StrategyStuck]


@dataclass(frozen=True)
class TraceStep:
    position: int
    env: Environment
    decision: Decision | None  # None when the strategy had no rule
    chosen: int | None


@dataclass
class Trace:
    graph_name: str
    start: int
    strategy: str
    steps: list[TraceStep] = field(default_factory=list)
    assigned: set[int] = field(default_factory=set)
    final: RunState | None = None

    def render(self) -> str:
        lines = [f"graph={self.graph_name} start={self.start} strategy={self.strategy}"]
        for i, s in enumerate(self.steps):
            head = f"{i}: v={s.position} env={s.env.render()} -> "
            if s.decision is None:
                lines.append(head + "STUCK")
            elif s.decision is STOP:
                lines.append(head + "STOP")
            elif s.chosen is None:
                lines.append(head + f"assign={s.decision.assign} goto={s.decision.target} ILLEGAL")
            else:
                lines.append(head + f"assign={s.decision.assign} goto={s.decision.target} chosen={s.chosen}")
        return "\n".join(lines) + "\n"


def colors_used(source: Trace | Sequence[int]) -> int:
    """Distinct nonzero colours ever written (0 is not a colour)."""
    if isinstance(source, Trace):
        return len(source.assigned - {0})
    return len(set(source) - {0})


def default_step_cap(n: int, palette: int | None) -> int:
    p = palette if palette is not None else n
    return min(4 * n * (p + 1) ** n, 10**7)


def run(
    g: Graph,
    strategy: Strategy,
    start: int,
    choose: Chooser,
    step_cap: int | None = None,
    graph_name: str = "-",
) -> tuple[Trace, Outcome]:
    """Execute until Stop, a failure, or a repeated ``(position, colouring)``."""
    cap = default_step_cap(g.n, strategy.palette) if step_cap is None else step_cap
    trace = Trace(graph_name, start, strategy.name)
    state = RunState.initial(g, start)
    seen = {state.key}
    while True:
        env = observe(g, state)
        try:
            decision = strategy(env)
        except NoRuleApplies:
            trace.steps.append(TraceStep(state.position, env, None, None))
            trace.final = state
            return trace, StrategyStuck(env)
        reason = check_legal(strategy, env, decision)
        if reason:
            trace.steps.append(TraceStep(state.position, env, decision, None))
            trace.final = state
            return trace, IllegalMove(len(trace.steps) - 1, reason)
        if decision is STOP:
            trace.steps.append(TraceStep(state.position, env, decision, None))
            trace.final = state
            if state.position != start:
                return trace, StoppedWrongVertex(state.position)
            missing = frozenset(range(g.n)) - state.visited
            if missing:
                return trace, StoppedIncomplete(missing)
            return trace, Success()
        cands = candidates(g, state, decision.target)
        nxt = choose(cands)
        if nxt not in cands:
            raise ValueError(f"adversary picked {nxt}, not among {cands}")
        trace.steps.append(TraceStep(state.position, env, decision, nxt))
        trace.assigned.add(decision.assign)
        coloring = list(state.coloring)
        coloring[state.position] = decision.assign
        state = RunState(nxt, tuple(coloring), state.visited | {nxt}, state.steps + 1)
        if state.key in seen or state.steps > cap:
            trace.final = state
            return trace, InfiniteLoop(len(trace.steps), state.position, state.coloring)
        seen.add(state.key)


class ScriptChooser:
    """Adversary that replays choice indices at branch points.

    A branch point is a move with more than one candidate; candidates are
    ordered by vertex id.  Once the script runs out, the first candidate is
    taken.
    """

    def __init__(self, script: Sequence[int] = ()):
        self.script = list(script)
        self.used = 0

    def __call__(self, cands: Sequence[int]) -> int:
        if len(cands) <= 1:
            return cands[0]
        if self.used < len(self.script):
            idx = self.script[self.used]
            self.used += 1
            if not 0 <= idx < len(cands):
                raise ValueError(f"script index {idx} invalid for {len(cands)} candidates")
            return cands[idx]
        return cands[0]


class SeededChooser:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def __call__(self, cands: Sequence[int]) -> int:
        return cands[self.rng.randrange(len(cands))]


def run_scripted(
    g: Graph,
    strategy: Strategy,
    start: int,
    script: Sequence[int] = (),
    step_cap: int | None = None,
    graph_name: str = "-",
) -> tuple[Trace, Outcome]:
    return run(g, strategy, start, ScriptChooser(script), step_cap, graph_name)
