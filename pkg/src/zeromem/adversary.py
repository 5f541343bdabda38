"""Exhaustive adversarial verification over the (position, colouring) state graph.

For each start vertex the reachable state graph is explored depth-first.
A start fails if the graph contains a reachable cycle, a Stop away from the
start, an illegal or undefined decision, or if the set of vertices visited on
*every* branch (guaranteed coverage) misses a vertex.  Coverage is computed
bottom-up as bitmasks so no path enumeration is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .graph import Graph
from .model import (
    STOP,
    Decision,
    Environment,
    NoRuleApplies,
    Outcome,
    Strategy,
    Trace,
    check_legal,
    run_scripted,
)

DEFAULT_MAX_STATES = 10**6

Key = tuple[int, tuple[int, ...]]
# observer(start, position, coloring, decision) is called once per expanded state
Observer = Callable[[int, int, tuple[int, ...], Decision], None]


class DecisionCache:
    """Memoises a pure strategy per environment, including its failures."""

    def __init__(self, strategy: Strategy):
        self.strategy = strategy
        self._memo: dict[Environment, tuple[Decision | None, str | None]] = {}

    def __call__(self, env: Environment) -> tuple[Decision | None, str | None]:
        """Return ``(decision, None)``, ``(None, "stuck")`` or ``(decision, reason)``."""
        hit = self._memo.get(env)
        if hit is None:
            try:
                d = self.strategy(env)
            except NoRuleApplies:
                hit = (None, "stuck")
            else:
                hit = (d, check_legal(self.strategy, env, d))
            self._memo[env] = hit
        return hit


@dataclass
class StartResult:
    start: int
    verdict: str  # "Success", an Outcome kind, or "Unknown"
    states: int
    max_colors: int | None = None
    script: list[int] = field(default_factory=list)
    trace: Trace | None = None
    outcome: Outcome | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == "Success"


@dataclass
class Verdict:
    graph_name: str
    strategy: str
    results: list[StartResult]

    @property
    def overall(self) -> str:
        """``AllSucceed``, ``Unknown`` or ``FailureWitness``."""
        if all(r.ok for r in self.results):
            return "AllSucceed"
        if any(r.verdict not in ("Success", "Unknown") for r in self.results):
            return "FailureWitness"
        return "Unknown"

    @property
    def all_succeed(self) -> bool:
        return self.overall == "AllSucceed"

    @property
    def witness(self) -> StartResult | None:
        for r in self.results:
            if r.verdict not in ("Success", "Unknown"):
                return r
        return None

    @property
    def states(self) -> int:
        return sum(r.states for r in self.results)

    @property
    def max_colors(self) -> int | None:
        vals = [r.max_colors for r in self.results]
        if any(v is None for v in vals):
            return None
        return max(vals, default=0)

    def csv_rows(self) -> list[str]:
        return [
            f"{self.graph_name},{r.start},{r.verdict},{r.states},"
            f"{'' if r.max_colors is None else r.max_colors}"
            for r in self.results
        ]


CSV_HEADER = "graph_id,start,verdict,states,max_colors"


def _antichain(sets: Iterable[int]) -> tuple[int, ...]:
    """Keep only inclusion-maximal bitmasks."""
    out: list[int] = []
    for s in sorted(set(sets), key=lambda x: -bin(x).count("1")):
        if not any(s | t == t for t in out):
            out.append(s)
    return tuple(out)


def _verify_start(
    g: Graph,
    decide: DecisionCache,
    start: int,
    max_states: int,
    observer: Observer | None,
) -> StartResult:
    n = g.n
    adj = g.adjacency
    full = (1 << n) - 1
    recoloring = decide.strategy.recoloring

    init: Key = (start, (0,) * n)
    on_stack: set[Key] = set()
    gc: dict[Key, int] = {}
    fam: dict[Key, object] = {}  # max colours (int) or antichain of colour sets
    succs_of: dict[Key, list[Key]] = {}
    assign_of: dict[Key, int] = {}

    # frame: [key, successors, next child index]
    stack: list[list] = []

    def script_of_stack() -> list[int]:
        # choice taken in each frame is the child most recently pushed (index - 1)
        return [f[2] - 1 for f in stack if len(f[1]) > 1]

    def fail(kind: str, script: list[int]) -> StartResult:
        return StartResult(start, kind, len(gc) + len(on_stack), script=script)

    def expand(key: Key) -> StartResult | list[Key]:
        pos, col = key
        env = Environment.from_colors(col[pos], [col[u] for u in adj[pos]])
        decision, problem = decide(env)
        if observer is not None and decision is not None:
            observer(start, pos, col, decision)
        if problem == "stuck":
            return fail("StrategyStuck", script_of_stack())
        if problem:
            return fail("IllegalMove", script_of_stack())
        if decision is STOP:
            if pos != start:
                return fail("StoppedWrongVertex", script_of_stack())
            return []
        assign, target = decision
        assign_of[key] = assign
        new = col[:pos] + (assign,) + col[pos + 1 :]
        return [(u, new) for u in adj[pos] if col[u] == target]

    def push(key: Key) -> StartResult | None:
        res = expand(key)
        if isinstance(res, StartResult):
            return res
        succs_of[key] = res
        on_stack.add(key)
        stack.append([key, res, 0])
        return None

    res = push(init)
    if res is not None:
        return res
    while stack:
        frame = stack[-1]
        key, succs, i = frame
        if i < len(succs):
            frame[2] += 1
            child = succs[i]
            if child in gc:
                continue
            if child in on_stack:
                return fail("InfiniteLoop", script_of_stack())
            if len(gc) + len(on_stack) >= max_states:
                return StartResult(start, "Unknown", len(gc) + len(on_stack))
            res = push(child)
            if res is not None:
                return res
            continue
        stack.pop()
        on_stack.discard(key)
        pos, col = key
        if succs:
            cover = full
            for s in succs:
                cover &= gc[s]
            gc[key] = cover | (1 << pos)
            if recoloring:
                bit = 1 << assign_of[key] if assign_of[key] else 0
                fam[key] = _antichain(x | bit for s in succs for x in fam[s])
            else:
                fam[key] = max(fam[s] for s in succs)
        else:
            gc[key] = 1 << pos
            fam[key] = (0,) if recoloring else len(set(col) - {0})

    if gc[init] != full:
        missing = next(v for v in range(n) if not gc[init] >> v & 1)
        script: list[int] = []
        key = init
        while succs_of[key]:
            succs = succs_of[key]
            idx = next(j for j, s in enumerate(succs) if not gc[s] >> missing & 1)
            if len(succs) > 1:
                script.append(idx)
            key = succs[idx]
        return StartResult(start, "StoppedIncomplete", len(gc), script=script)

    top = fam[init]
    colors = max(bin(x).count("1") for x in top) if recoloring else top
    return StartResult(start, "Success", len(gc), max_colors=colors)


def verify_all(
    g: Graph,
    strategy: Strategy,
    max_states: int = DEFAULT_MAX_STATES,
    observer: Observer | None = None,
    graph_name: str = "-",
    cache: DecisionCache | None = None,
    starts: Sequence[int] | None = None,
) -> Verdict:
    """Check ``strategy`` against every start vertex and every adversary choice.

    Failing starts carry a choice script (indices at branch points, candidates
    ordered by vertex id) and the replayed :class:`Trace` reproducing the failure.
    """
    decide = cache if cache is not None else DecisionCache(strategy)
    results = []
    for v in range(g.n) if starts is None else starts:
        r = _verify_start(g, decide, v, max_states, observer)
        if r.verdict not in ("Success", "Unknown"):
            r.trace, r.outcome = run_scripted(g, strategy, v, r.script, graph_name=graph_name)
        results.append(r)
    return Verdict(graph_name, strategy.name, results)


def verify_family(
    graphs: Iterable[tuple[str, Graph]],
    strategy: Strategy,
    max_states: int = DEFAULT_MAX_STATES,
    observer: Observer | None = None,
) -> list[Verdict]:
    """Run :func:`verify_all` over named graphs, sharing one decision cache."""
    cache = DecisionCache(strategy)
    return [
        verify_all(g, strategy, max_states, observer, name, cache) for name, g in graphs
    ]


def worst_case_colors(g: Graph, strategy: Strategy, max_states: int = DEFAULT_MAX_STATES) -> int:
    """Largest number of colours used over all starts and adversary branches."""
    v = verify_all(g, strategy, max_states)
    if not v.all_succeed:
        raise ValueError(f"{strategy.name} does not succeed: {v.overall}")
    return v.max_colors


class _RecordingChooser:
    def __init__(self, script: Sequence[int]):
        self.script = list(script)
        self.arities: list[int] = []

    def __call__(self, cands: Sequence[int]) -> int:
        if len(cands) <= 1:
            return cands[0]
        i = len(self.arities)
        self.arities.append(len(cands))
        return cands[self.script[i]] if i < len(self.script) else cands[0]


def enumerate_runs(
    g: Graph, strategy: Strategy, start: int, limit: int = 100_000
) -> Iterator[tuple[list[int], Trace, Outcome]]:
    """Yield ``(script, trace, outcome)`` for every adversary branch.

    Exponential in general; meant for invariants that depend on the path
    history rather than the current state alone.
    """
    from .model import run

    pending: list[list[int]] = [[]]
    produced = 0
    while pending:
        script = pending.pop()
        chooser = _RecordingChooser(script)
        trace, outcome = run(g, strategy, start, chooser)
        full = script + [0] * (len(chooser.arities) - len(script))
        yield full, trace, outcome
        produced += 1
        if produced >= limit:
            raise RuntimeError(f"more than {limit} adversary branches")
        for i in range(len(full) - 1, len(script) - 1, -1):
            for alt in range(chooser.arities[i] - 1, 0, -1):
                pending.append(full[:i] + [alt])


def reachable_states(
    g: Graph, strategy: Strategy, start: int, max_states: int = DEFAULT_MAX_STATES
) -> Iterator[tuple[int, tuple[int, ...], Decision | None]]:
    """Every ``(position, colouring, decision)`` reachable from ``start``.

    Unlike :func:`verify_all` this keeps going past failures, so state
    invariants can be checked on every branch.  ``decision`` is ``None`` where
    the strategy has no rule; illegal moves have no successors.
    """
    decide = DecisionCache(strategy)
    adj = g.adjacency
    init: Key = (start, (0,) * g.n)
    seen = {init}
    todo = [init]
    while todo:
        pos, col = todo.pop()
        decision, problem = decide(Environment.from_colors(col[pos], [col[u] for u in adj[pos]]))
        yield pos, col, decision
        if problem or decision is STOP:
            continue
        new = col[:pos] + (decision.assign,) + col[pos + 1 :]
        for u in adj[pos]:
            if col[u] == decision.target and (u, new) not in seen:
                if len(seen) >= max_states:
                    raise RuntimeError(f"more than {max_states} states")
                seen.add((u, new))
                todo.append((u, new))
