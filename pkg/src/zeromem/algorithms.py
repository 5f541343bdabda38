"""Exploration strategies as pure ``Environment -> Decision`` functions."""

from __future__ import annotations

from functools import partial
from typing import Iterable

from .model import STOP, Decision, Environment, Move, NoRuleApplies, Strategy, mod1

# ---------------------------------------------------------------- trees


def tree_exploration(env: Environment) -> Decision:
    """Colour by depth modulo 3 and walk depth-first."""
    c = env.self_color
    if c == 0:
        c = mod1(max(env.colors, default=0) + 1, 3)
    if env.count(0):
        return Move(c, 0)
    if c == 1 and not env.count(3):
        return STOP
    return Move(c, mod1(c - 1, 3))


# ---------------------------------------------------------------- general graphs


def depth_first_search(env: Environment) -> Decision:
    """Colour each new vertex one above its largest neighbour; backtrack by
    stepping to colour ``c - 1``.  A fresh vertex whose neighbours are all
    coloured reuses the largest colour and steps straight back to it."""
    c = env.self_color
    if env.degree == 0:
        return STOP
    if c == 0 and not env.count(0):
        top = max(env.colors)
        return Move(top, top)
    if c == 0:
        c = max(env.colors) + 1
    if env.count(0):
        return Move(c, 0)
    if c > 1 and env.count(c - 1):
        return Move(c, c - 1)
    return STOP


def smallest_unproblematic(neighbor_colors: Iterable[int]) -> int:
    """Smallest ``c >= 1`` such that no neighbour has colour ``c + 1``."""
    present = set(neighbor_colors)
    c = 1
    while c + 1 in present:
        c += 1
    return c


def _dfs_n(n: int, env: Environment) -> Decision:
    special = n - 2
    c = env.self_color
    if c == 0:
        seen = env.count(special)
        if seen == 1:
            c = smallest_unproblematic(env.colors)
            return Move(c, 0 if env.count(0) else special)
        if seen == 2:
            return Move(smallest_unproblematic(env.colors), min(env.colors))
        return depth_first_search(env)
    if env.count(0):
        return Move(c, 0)
    if c > 1 and env.count(c - 1):
        return Move(c, c - 1)
    if c > 1:
        return Move(c, max(env.colors))
    return STOP


def dfs_n(n: int) -> Strategy:
    """Depth-first search tuned for graphs with exactly ``n`` vertices, using
    at most ``n - 2`` colours."""
    if n < 5:
        raise ValueError("dfs_n needs n >= 5")
    return Strategy(f"dfs_n:{n}", partial(_dfs_n, n))


# ---------------------------------------------------------------- bounded circumference


def cyclic_max(k: int, values: Iterable[int]) -> int:
    """Largest value in the cyclic order on ``1..2k-1`` where every value
    exceeds the ``k - 1`` values cyclically before it.

    Picks the value whose ``k - 1`` cyclic predecessors hold all other values;
    if there is none, falls back to the ordinary maximum.
    """
    span = 2 * k - 1
    distinct = sorted(set(values))
    if not distinct:
        raise ValueError("cyclic_max of nothing")
    if any(not 1 <= v <= span for v in distinct):
        raise ValueError(f"values must lie in 1..{span}")
    for a in distinct:
        if all(1 <= (a - b) % span <= k - 1 for b in distinct if b != a):
            return a
    return distinct[-1]


def _small_dfs(k: int, env: Environment) -> Decision:
    span = 2 * k - 1
    c = env.self_color
    if c == 0:
        colored = [x for x in env.colors if x]
        c = mod1((cyclic_max(k, colored) if colored else 0) + 1, span)
    if env.count(0):
        return Move(c, 0)
    back = mod1(c - 1, span)
    if env.count(back):
        return Move(c, back)
    return STOP


def small_dfs(k: int) -> Strategy:
    """Depth-first search with colours cycling through ``1..2k-1``; correct on
    graphs of circumference at most ``k``."""
    if k < 3:
        raise ValueError("small_dfs needs k >= 3")
    return Strategy(f"smalldfs:{k}", partial(_small_dfs, k), palette=2 * k - 1)


# ---------------------------------------------------------------- square paths

_TWO_COLORED = {
    (1, 3): 1, (3, 3): 1, (3, 4): 1,
    (1, 1): 2, (1, 2): 2, (1, 4): 2,
    (2, 2): 3, (2, 3): 3, (2, 4): 3,
}  # fmt: skip

_THREE_COLORED = {
    (1, 2, 3): 4,
    (1, 1, 3): 1, (1, 3, 3): 1,
    (1, 1, 2): 2, (1, 2, 2): 2, (1, 2, 4): 2, (1, 1, 4): 2, (1, 4, 4): 2,
    (2, 2, 3): 3, (2, 2, 4): 3, (2, 3, 4): 3, (2, 4, 4): 3,
}  # fmt: skip


def square_path_exploration(env: Environment) -> Decision:
    """Four-colour exploration of squares of paths."""
    c = env.self_color
    if c:
        if env.count(0):
            return Move(c, 0)
        back = mod1(c - 1, 3)
        if env.count(back):
            return Move(c, back)
        return STOP
    if env.degree == 0:
        return STOP
    colored = env.colored()
    if not colored:
        return Move(1, 0)
    if len(colored) == 1:
        w = colored[0]
        return Move(mod1(w + 1, 3), w)
    if env.counts == ((0, 2), (1, 1), (2, 1)):
        return Move(2, 2)
    table = {2: _TWO_COLORED, 3: _THREE_COLORED}.get(len(colored))
    if table is None or colored not in table:
        raise NoRuleApplies(env, f"no colour rule for neighbours {colored}")
    c = table[colored]
    if env.count(0):
        return Move(c, 0)
    back = mod1(c - 1, 3)
    if not env.count(back):
        raise NoRuleApplies(env, f"no neighbour of colour {back} to return to")
    return Move(c, back)


# ---------------------------------------------------------------- recolouring

RED, GREEN = 0, 1
DELETED = 7


def encode(label: int, color: int) -> int:
    """Pack a label in ``1..3`` and red/green into a colour code ``1..6``."""
    if label not in (1, 2, 3) or color not in (RED, GREEN):
        raise ValueError(f"bad label/colour {label}/{color}")
    return 2 * (label - 1) + color + 1


def decode(code: int) -> tuple[int, int | None]:
    """Inverse of :func:`encode`; ``0`` is unvisited, ``7`` is deleted.

    Returns ``(label, colour)`` with label ``0`` for unvisited and ``-1`` for
    deleted; colour is ``None`` for both.
    """
    if code == 0:
        return 0, None
    if code == DELETED:
        return -1, None
    if not 1 <= code <= 6:
        raise ValueError(f"bad recolouring code {code}")
    return (code - 1) // 2 + 1, (code - 1) % 2


def _cyclic_min_label(labels: set[int]) -> int:
    if len(labels) == 1:
        return next(iter(labels))
    if len(labels) == 2:
        a, b = sorted(labels)
        # of two labels, the smaller is the one the other follows
        return a if b == mod1(a + 1, 3) else b
    raise ValueError(f"labels {sorted(labels)} do not fit two consecutive layers")


def recolorer(env: Environment) -> Decision:
    """Breadth-wise layered exploration with recolouring, seven colour codes.

    Each visited vertex carries a label in ``1..3`` (its depth plus one,
    modulo 3) and a phase colour red/green; code ``7`` marks a deleted
    vertex that will never be entered again.
    """
    own_label, own_color = decode(env.self_color)
    if own_label < 0:
        raise NoRuleApplies(env, "agent stands on a deleted vertex")
    unlabeled = env.count(0)
    by_label: dict[int, list[tuple[int, int]]] = {1: [], 2: [], 3: []}
    for code, _ in env.counts:
        lab, col = decode(code)
        if lab > 0:
            by_label[lab].append((code, col))

    if own_label == 0:
        present = {lab for lab, codes in by_label.items() if codes}
        if not present:
            label = 1
        else:
            try:
                label = mod1(_cyclic_min_label(present) + 1, 3)
            except ValueError as exc:
                raise NoRuleApplies(env, str(exc)) from None
    else:
        label = own_label
    parents = by_label[mod1(label - 1, 3)]
    children = by_label[mod1(label + 1, 3)]

    # every child (unlabelled neighbours included) is deleted, or none exist
    if not children and not unlabeled:
        if parents:
            return Move(DELETED, min(code for code, _ in parents))
        return STOP

    if own_label == 0:
        color = GREEN if any(col == RED for _, col in parents) else RED
        code = encode(label, color)
        if parents:
            return Move(code, min(c for c, _ in parents))
        if unlabeled:
            return Move(code, 0)
        return Move(code, min(c for c, _ in children))

    if unlabeled:
        return Move(env.self_color, 0)
    same = [c for c, col in children if col == own_color]
    if same:
        return Move(env.self_color, min(same))
    other = 1 - own_color
    if all(col == other for _, col in children):
        code = encode(label, other)
        if parents:
            return Move(code, min(c for c, _ in parents))
        return Move(code, min(c for c, _ in children))
    raise NoRuleApplies(env, "children disagree in colour")


def path_recolorer(env: Environment) -> Decision:
    """One-colour walk along a path started at a leaf: mark the way out,
    erase the marks on the way back."""
    if env.degree == 0:
        return STOP
    c = env.self_color
    if c == 0 and env.count(0):
        return Move(1, 0)
    if c == 1 and not env.count(1):
        return STOP
    if env.count(1):
        return Move(0, 1)
    raise NoRuleApplies(env, "nothing coloured to return to")


# ---------------------------------------------------------------- registry

TREE = Strategy("tree", tree_exploration, palette=3)
DFS = Strategy("dfs", depth_first_search)
SQUAREPATH = Strategy("squarepath", square_path_exploration, palette=4)
RECOLORER = Strategy("recolorer", recolorer, palette=7, recoloring=True)
PATHRECOLORER = Strategy("pathrecolorer", path_recolorer, palette=1, recoloring=True)

_FIXED = {s.name: s for s in (TREE, DFS, SQUAREPATH, RECOLORER, PATHRECOLORER)}
_PARAMETRIC = {"dfs_n": dfs_n, "smalldfs": small_dfs}


def get_strategy(name: str) -> Strategy:
    """Look up ``tree``, ``dfs``, ``dfs_n:<n>``, ``smalldfs:<k>``,
    ``squarepath``, ``recolorer`` or ``pathrecolorer``."""
    if name in _FIXED:
        return _FIXED[name]
    base, _, arg = name.partition(":")
    if base in _PARAMETRIC and arg:
        try:
            return _PARAMETRIC[base](int(arg))
        except ValueError as exc:
            raise KeyError(f"bad strategy {name!r}: {exc}") from None
    raise KeyError(f"unknown strategy {name!r}")


def strategy_names() -> list[str]:
    return sorted(_FIXED) + ["dfs_n:<n>", "smalldfs:<k>"]
