"""Search for colour-bounded memoryless strategies, or prove none exists.

:func:`synthesize` runs an AND-OR search over one decision table shared by
every graph and start vertex.  At each node the partial table is evaluated
on all instances: states whose environment has no entry yet form a frontier
and are assumed to succeed with full coverage.  A node is lost as soon as the
decided part alone forces a failure (a reachable cycle, a Stop away from the
start, or coverage that stays incomplete even under that optimistic
assumption).  Otherwise the search branches on the first undecided
environment met, in a fixed deterministic order.

:func:`enumerate_tables_oracle` is a deliberately naive cross-check that
enumerates every total table over the reachable environments.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .adversary import verify_all
from .graph import Graph
from .model import STOP, Decision, Environment, Move, NoRuleApplies, Strategy

DEFAULT_MAX_NODES = 5_000_000


class SearchCapExceeded(Exception):
    pass


@dataclass
class SynthesisResult:
    status: str  # "Realizable", "Unrealizable" or "Unknown"
    nodes: int
    table: dict[Environment, Decision] | None = None
    budget: int = 0
    recoloring: bool = False
    elapsed: float = 0.0
    detail: str = ""

    @property
    def realizable(self) -> bool:
        return self.status == "Realizable"

    def strategy(self, name: str = "table") -> Strategy:
        if self.table is None:
            raise ValueError(f"no table for a {self.status} result")
        return table_strategy(self.table, self.budget, self.recoloring, name)


# ---------------------------------------------------------------- tables


def table_strategy(
    table: dict[Environment, Decision], budget: int, recoloring: bool = False, name: str = "table"
) -> Strategy:
    """Wrap an explicit table; environments without an entry have no rule."""
    frozen = dict(table)

    def decide(env: Environment) -> Decision:
        try:
            return frozen[env]
        except KeyError:
            raise NoRuleApplies(env, "not in table") from None

    return Strategy(name, decide, palette=budget, recoloring=recoloring)


def format_table(table: dict[Environment, Decision], budget: int, recoloring: bool) -> str:
    lines = [f"# budget={budget} recoloring={int(recoloring)}"]
    for env in sorted(table):
        d = table[env]
        rhs = "STOP" if d is STOP else f"assign={d.assign} goto={d.target}"
        lines.append(f"env={env.render()} -> {rhs}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> tuple[dict[Environment, Decision], int, bool]:
    """Inverse of :func:`format_table`; returns ``(table, budget, recoloring)``."""
    table: dict[Environment, Decision] = {}
    budget, recoloring = 0, False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "budget":
                    budget = int(val)
                elif key == "recoloring":
                    recoloring = val not in ("0", "false", "False")
            continue
        lhs, sep, rhs = line.partition("->")
        if not sep or not lhs.strip().startswith("env="):
            raise ValueError(f"bad table line {raw!r}")
        env = Environment.parse(lhs.strip()[4:])
        rhs = rhs.strip()
        if rhs == "STOP":
            d: Decision = STOP
        else:
            parts = dict(p.split("=", 1) for p in rhs.split())
            d = Move(int(parts["assign"]), int(parts["goto"]))
        if env in table:
            raise ValueError(f"duplicate entry for {env.render()}")
        table[env] = d
    if budget == 0:
        budget = max((d.assign for d in table.values() if d is not STOP), default=1)
    return table, budget, recoloring


def load_table(path: str | Path, name: str | None = None) -> Strategy:
    table, budget, recoloring = parse_table(Path(path).read_text())
    return table_strategy(table, budget, recoloring, name or Path(path).stem)


# ---------------------------------------------------------------- option space


def options(
    env: Environment,
    budget: int,
    recoloring: bool,
    assigns: Sequence[int] | None = None,
) -> list[Decision]:
    """Legal decisions in search order: assigns ascending with 0 last, targets
    ascending, Stop at the end.  ``assigns`` restricts the nonzero colours."""
    palette = list(range(1, budget + 1)) if assigns is None else list(assigns)
    if env.self_color != 0 and not recoloring:
        choices = [env.self_color]
    else:
        choices = palette + [0]
    targets = env.colors
    out: list[Decision] = [Move(a, t) for a in choices for t in targets]
    out.append(STOP)
    return out


def lemma_allows(env: Environment, d: Decision) -> bool:
    """Necessary conditions for any strategy that explores *all* graphs.

    * on a coloured vertex with an uncoloured neighbour, move to one;
    * with exactly one coloured neighbour and some uncoloured one, never go
      back to the coloured one;
    * an uncoloured vertex that already sees colour must be coloured.
    """
    unc = env.count(0)
    colored = env.degree - unc
    if d is STOP:
        return not ((env.self_color and unc) or (colored == 1 and unc) or (env.self_color == 0 and colored))
    if env.self_color and unc and d.target != 0:
        return False
    if colored == 1 and unc and d.target != 0:
        return False
    if env.self_color == 0 and colored and d.assign == 0:
        return False
    return True


# ---------------------------------------------------------------- partial evaluation

_OK, _FAIL = 0, 1


def _evaluate(
    g: Graph, start: int, table: dict[Environment, Decision], max_states: int
) -> tuple[int, Environment | None]:
    """Explore one instance under a partial table.

    Returns ``(_FAIL, None)`` if the decided part already loses, otherwise
    ``(_OK, env)`` where ``env`` is the first undecided environment reached
    (``None`` when the instance is fully decided and succeeds).
    """
    n = g.n
    adj = g.adjacency
    full = (1 << n) - 1
    init = (start, (0,) * n)
    gc: dict = {}
    on_stack: set = set()
    first_open: Environment | None = None
    stack: list[list] = []

    def expand(key):
        nonlocal first_open
        pos, col = key
        env = Environment.from_colors(col[pos], [col[u] for u in adj[pos]])
        d = table.get(env)
        if d is None:
            if first_open is None:
                first_open = env
            return None  # frontier
        if d is STOP:
            return _FAIL if pos != start else []
        new = col[:pos] + (d.assign,) + col[pos + 1 :]
        return [(u, new) for u in adj[pos] if col[u] == d.target]

    def enter(key):
        succ = expand(key)
        if succ is _FAIL:
            return False
        if succ is None:
            gc[key] = full
            return True
        on_stack.add(key)
        stack.append([key, succ, 0])
        return True

    if not enter(init):
        return _FAIL, None
    while stack:
        frame = stack[-1]
        key, succ, i = frame
        if i < len(succ):
            frame[2] += 1
            child = succ[i]
            if child in gc:
                continue
            if child in on_stack:
                return _FAIL, None
            if len(gc) + len(on_stack) > max_states:
                raise SearchCapExceeded(f"more than {max_states} states")
            if not enter(child):
                return _FAIL, None
            continue
        stack.pop()
        on_stack.discard(key)
        cover = full
        for s in succ:
            cover &= gc[s]
        gc[key] = (cover if succ else 0) | (1 << key[0])
    if gc[init] != full:
        return _FAIL, None
    return _OK, first_open


@dataclass
class _Search:
    instances: list[tuple[Graph, int]]
    budget: int
    recoloring: bool
    lemma_pruning: bool
    symmetry: bool
    max_nodes: int
    max_states: int
    deadline: float | None
    nodes: int = 0
    table: dict[Environment, Decision] = field(default_factory=dict)

    def evaluate(self) -> tuple[int, Environment | None]:
        pending = None
        for g, s in self.instances:
            status, env = _evaluate(g, s, self.table, self.max_states)
            if status == _FAIL:
                return _FAIL, None
            if pending is None:
                pending = env
        return _OK, pending

    def assign_choices(self) -> list[int]:
        if not self.symmetry:
            return list(range(1, self.budget + 1))
        # unused colours are interchangeable, so trying the smallest suffices
        used = sorted({d.assign for d in self.table.values() if d is not STOP and d.assign})
        fresh = next((c for c in range(1, self.budget + 1) if c not in used), None)
        return used + ([fresh] if fresh is not None else [])

    def run(self) -> bool:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise SearchCapExceeded(f"more than {self.max_nodes} search nodes")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchCapExceeded("time limit reached")
        status, env = self.evaluate()
        if status == _FAIL:
            return False
        if env is None:
            return True
        for d in options(env, self.budget, self.recoloring, self.assign_choices()):
            if self.lemma_pruning and not lemma_allows(env, d):
                continue
            self.table[env] = d
            if self.run():
                return True
            del self.table[env]
        return False


def synthesize(
    graphs: Iterable[Graph],
    budget: int,
    recoloring: bool = False,
    lemma_pruning: bool = False,
    max_nodes: int = DEFAULT_MAX_NODES,
    max_states: int = 10**6,
    time_limit: float | None = None,
    symmetry: bool = True,
) -> SynthesisResult:
    """Decide whether one table with colours ``1..budget`` explores every
    graph from every start against every adversary.

    ``lemma_pruning`` discards decisions that no strategy exploring *all*
    graphs could make; it is only sound when the instances stand in for
    that uniform setting.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    graphs = list(graphs)
    instances = [(g, s) for g in graphs for s in range(g.n)]
    t0 = time.monotonic()
    search = _Search(
        instances,
        budget,
        recoloring,
        lemma_pruning,
        symmetry,
        max_nodes,
        max_states,
        None if time_limit is None else t0 + time_limit,
    )
    try:
        found = search.run()
    except SearchCapExceeded as exc:
        return SynthesisResult("Unknown", search.nodes, None, budget, recoloring, time.monotonic() - t0, str(exc))
    elapsed = time.monotonic() - t0
    if found:
        return SynthesisResult("Realizable", search.nodes, dict(search.table), budget, recoloring, elapsed)
    return SynthesisResult("Unrealizable", search.nodes, None, budget, recoloring, elapsed)


def refute_with_pruning(
    graphs: Iterable[Graph], budget: int, lemma_pruning: bool = True, **caps
) -> SynthesisResult:
    """:func:`synthesize` with the uniform-setting pruning rules switched on."""
    return synthesize(graphs, budget, lemma_pruning=lemma_pruning, **caps)


# ---------------------------------------------------------------- brute-force oracle


def reachable_environments(
    graphs: Sequence[Graph], budget: int, recoloring: bool = False, max_states: int = 10**6
) -> list[Environment]:
    """Every environment that some table could make the agent observe."""
    seen_env: set[Environment] = set()
    for g in graphs:
        adj = g.adjacency
        for start in range(g.n):
            init = (start, (0,) * g.n)
            seen = {init}
            todo = [init]
            while todo:
                pos, col = todo.pop()
                env = Environment.from_colors(col[pos], [col[u] for u in adj[pos]])
                seen_env.add(env)
                for d in options(env, budget, recoloring):
                    if d is STOP:
                        continue
                    new = col[:pos] + (d.assign,) + col[pos + 1 :]
                    for u in adj[pos]:
                        if col[u] == d.target and (u, new) not in seen:
                            seen.add((u, new))
                            todo.append((u, new))
                if len(seen) > max_states:
                    raise SearchCapExceeded("environment closure too large")
    return sorted(seen_env)


def enumerate_tables_oracle(
    graph: Graph | Sequence[Graph],
    budget: int,
    max_env: int = 12,
    recoloring: bool = False,
    max_tables: int = 10**8,
) -> SynthesisResult:
    """Try every total table over the reachable environments.

    A failing table's verdict depends only on the entries the verifier looked
    up, so every table agreeing with it up to the last consulted position is
    skipped in one go.
    """
    graphs = [graph] if isinstance(graph, Graph) else list(graph)
    envs = reachable_environments(graphs, budget, recoloring)
    if len(envs) > max_env:
        raise SearchCapExceeded(f"{len(envs)} reachable environments exceed max_env={max_env}")
    index = {e: i for i, e in enumerate(envs)}
    opts = [options(e, budget, recoloring) for e in envs]
    digits = [0] * len(envs)
    tried = 0
    t0 = time.monotonic()
    while True:
        tried += 1
        if tried > max_tables:
            return SynthesisResult("Unknown", tried, None, budget, recoloring, time.monotonic() - t0, "table cap")
        consulted: set[int] = set()
        table = {e: opts[i][digits[i]] for i, e in enumerate(envs)}

        def decide(env: Environment, table=table) -> Decision:
            consulted.add(index[env])
            return table[env]

        strat = Strategy("oracle", decide, palette=budget, recoloring=recoloring)
        if all(verify_all(g, strat).all_succeed for g in graphs):
            return SynthesisResult("Realizable", tried, table, budget, recoloring, time.monotonic() - t0)
        pos = max(consulted)
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < len(opts[pos]):
                break
            digits[pos] = 0
            pos -= 1
        if pos < 0:
            return SynthesisResult("Unrealizable", tried, None, budget, recoloring, time.monotonic() - t0)
        for j in range(pos + 1, len(envs)):
            digits[j] = 0
