"""Simple undirected graphs, witness-family generators and structural checks.

Vertices are the integers ``0..n-1``.  These identities exist for the
harness and the adversary only; strategies never see them.

Generators that mirror a drawn construction use the drawing's 1-based
names (``v_1``, ``l_r`` ...) in their docstrings and map them to 0-based
ids as documented per function.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

CIRCUMFERENCE_MAX_N = 16


class GraphError(ValueError):
    """Raised for malformed graphs or bad generator parameters."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple connected undirected graph."""

    n: int
    edges: frozenset[tuple[int, int]]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise GraphError(f"graph needs at least one vertex, got n={n}")
        norm = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            norm.add((min(u, v), max(u, v)))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        if not _connected(n, self.adjacency):
            raise GraphError("graph is not connected")

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation of 0..n-1")
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges))


def _connected(n: int, adj: Sequence[Sequence[int]]) -> bool:
    seen = {0}
    todo = [0]
    while todo:
        u = todo.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == n


def _edges_connected(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return _connected(n, adj)


# ---------------------------------------------------------------- generators


def build_path(n: int) -> Graph:
    """Path ``v_1 - ... - v_n``; ``v_i`` is vertex ``i-1``."""
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def build_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def build_complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph(n, itertools.combinations(range(n), 2))


def build_star(leaves: int) -> Graph:
    """Star with centre 0 and ``leaves`` pendant vertices."""
    if leaves < 1:
        raise GraphError("star needs at least one leaf")
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def build_square_path(n: int) -> Graph:
    """Path on ``n`` vertices plus every edge between vertices at distance 2."""
    if n < 1:
        raise GraphError("square path needs n >= 1")
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [(i, i + 2) for i in range(n - 2)]
    return Graph(n, edges)


def build_merged_leaf_caterpillar(m: int, i: int, j: int) -> Graph:
    """Spine ``v_1..v_m`` with a private leaf on each spine vertex except
    ``v_i`` and ``v_j``, which instead share one leaf ``l_{i/j}``.

    Ids: ``v_r`` -> ``r-1``; private leaves ``l_r`` (r not in {i, j}) get
    ``m, m+1, ...`` in increasing ``r``; the shared leaf is ``2m-2``.
    """
    if m < 3:
        raise GraphError("caterpillar needs m >= 3")
    if not 1 <= i < j <= m:
        raise GraphError(f"need 1 <= i < j <= m, got i={i}, j={j}, m={m}")
    edges = [(r, r + 1) for r in range(m - 1)]
    nxt = m
    for r in range(1, m + 1):
        if r in (i, j):
            continue
        edges.append((r - 1, nxt))
        nxt += 1
    shared = nxt
    edges += [(i - 1, shared), (j - 1, shared)]
    return Graph(shared + 1, edges)


def build_fan(m: int) -> Graph:
    """Path ``v_1..v_m`` (ids ``0..m-1``) plus apex ``u`` (id ``m``) joined to all."""
    if m < 2:
        raise GraphError("fan needs m >= 2")
    edges = [(r, r + 1) for r in range(m - 1)] + [(r, m) for r in range(m)]
    return Graph(m + 1, edges)


def build_bipartite_double_fan(m: int) -> Graph:
    """Path ``v_1..v_m`` (ids ``0..m-1``); apex ``u`` (id ``m``) joined to the
    odd-indexed ``v_h``, apex ``u_even`` (id ``m+1``) joined to the even ones."""
    if m < 2:
        raise GraphError("double fan needs m >= 2")
    edges = [(r, r + 1) for r in range(m - 1)]
    for h in range(1, m + 1):
        edges.append((h - 1, m if h % 2 == 1 else m + 1))
    return Graph(m + 2, edges)


def build_circumference_pair(k: int) -> tuple[Graph, Graph]:
    """The two look-alike graphs of circumference ``k``.

    Shared part: path ``v_1..v_{2k}`` (ids ``0..2k-1``) and leaf ``l_{2k-3}``
    on ``v_{2k-3}`` (id ``2k``).
    G1 adds leaf ``l_{k-1}`` on ``v_{k-1}`` (id ``2k+1``) and edge ``v_1 v_k``.
    G2 adds leaves ``l_1`` on ``v_1`` (id ``2k+1``) and ``l_k`` on ``v_k``
    (id ``2k+2``) and edge ``v_{k-1} v_{2k-2}``.
    """
    if k < 3:
        raise GraphError("circumference pair needs k >= 3")

    def v(r: int) -> int:
        return r - 1

    base = [(r, r + 1) for r in range(2 * k - 1)]
    base.append((v(2 * k - 3), 2 * k))
    g1 = base + [(v(k - 1), 2 * k + 1), (v(1), v(k))]
    g2 = base + [(v(1), 2 * k + 1), (v(k), 2 * k + 2), (v(k - 1), v(2 * k - 2))]
    return Graph(2 * k + 2, g1), Graph(2 * k + 3, g2)


def build_clique_two_leaves(n: int, i: int = 0, j: int = 1) -> Graph:
    """Clique on ``n-3`` vertices (ids ``0..n-4``); clique vertices ``i`` and
    ``j`` each get a leaf (ids ``n-3``, ``n-2``); every other clique vertex is
    joined to the special vertex ``s`` (id ``n-1``)."""
    if n < 6:
        raise GraphError("clique-with-two-leaves needs n >= 6")
    q = n - 3
    if not (0 <= i < q and 0 <= j < q and i != j):
        raise GraphError(f"leaf anchors must be distinct clique vertices, got {i}, {j}")
    edges = list(itertools.combinations(range(q), 2))
    edges += [(i, q), (j, q + 1)]
    edges += [(c, n - 1) for c in range(q) if c not in (i, j)]
    return Graph(n, edges)


def build_cant_go_back_fixture() -> Graph:
    """``p`` (0) with two arms ``p-v-u`` and ``p-v'-u'``; ids v=1, u=2, v'=3, u'=4."""
    return Graph(5, [(0, 1), (1, 2), (0, 3), (3, 4)])


def build_triangle_fan_fixture(r: int, k: int) -> Graph:
    """Triangle ``p`` (0), ``v`` (1), ``v'`` (2); ``v`` additionally carries
    ``r`` pendant vertices ``u_1..u_r`` (ids ``3..r+2``) and ``k`` pendant
    vertices ``c_1..c_k`` (ids after the ``u``'s)."""
    if r < 0 or k < 0:
        raise GraphError("fixture counts must be non-negative")
    edges = [(0, 1), (1, 2), (0, 2)]
    edges += [(1, 3 + t) for t in range(r + k)]
    return Graph(3 + r + k, edges)


FAMILIES = {
    "path": (build_path, ("n",)),
    "cycle": (build_cycle, ("n",)),
    "complete": (build_complete, ("n",)),
    "star": (build_star, ("leaves",)),
    "squarepath": (build_square_path, ("n",)),
    "mergedleaf": (build_merged_leaf_caterpillar, ("m", "i", "j")),
    "fan": (build_fan, ("m",)),
    "doublefan": (build_bipartite_double_fan, ("m",)),
    "circpair": (build_circumference_pair, ("k",)),
    "cliqueleaves": (build_clique_two_leaves, ("n",)),
    "cantgoback": (build_cant_go_back_fixture, ()),
    "trianglefan": (build_triangle_fan_fixture, ("r", "k")),
}


def build_family(name: str, **params: int) -> Graph | tuple[Graph, Graph]:
    """Build a registered family by name; ``circpair`` returns both graphs."""
    try:
        builder, names = FAMILIES[name]
    except KeyError:
        raise GraphError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    missing = [p for p in names if params.get(p) is None]
    if missing:
        raise GraphError(f"family {name!r} needs parameter(s): {', '.join(missing)}")
    return builder(*(params[p] for p in names))


# --------------------------------------------------------------- enumeration


def _prufer_to_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = (v for v in range(n) if degree[v] == 1)
    edges.append((u, w))
    return edges


def enumerate_trees(n: int) -> Iterator[Graph]:
    """All labeled trees on ``n`` vertices, in lexicographic Prufer order."""
    if not 1 <= n <= 10:
        raise GraphError("tree enumeration supports 1 <= n <= 10")
    if n == 1:
        yield Graph(1, ())
        return
    if n == 2:
        yield Graph(2, [(0, 1)])
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield Graph(n, _prufer_to_edges(seq, n))


def enumerate_connected_graphs(n: int, dedup: bool = False) -> Iterator[Graph]:
    """All connected graphs on ``n`` vertices.

    Labeled mode walks every edge subset of ``K_n`` in increasing bitmask
    order (bit ``t`` is the ``t``-th pair in lexicographic order).  With
    ``dedup`` one representative per isomorphism class is produced instead,
    taken from the networkx graph atlas in atlas order.
    """
    if not 1 <= n <= 7:
        raise GraphError("connected-graph enumeration supports 1 <= n <= 7")
    if dedup:
        yield from _atlas_connected(n)
        return
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        chosen = [pairs[t] for t in range(len(pairs)) if mask >> t & 1]
        if len(chosen) >= n - 1 and _edges_connected(n, chosen):
            yield Graph(n, chosen)


def _atlas_connected(n: int) -> Iterator[Graph]:
    import networkx as nx

    for h in nx.graph_atlas_g():
        if h.number_of_nodes() == n and (n == 1 or nx.is_connected(h)):
            yield Graph(n, h.edges())


# ------------------------------------------------------------------ analyses


def circumference(g: Graph) -> int:
    """Length of a longest simple cycle (0 for forests)."""
    if g.n > CIRCUMFERENCE_MAX_N:
        raise GraphError(f"circumference is exhaustive; n <= {CIRCUMFERENCE_MAX_N} only")
    if g.m < g.n:
        # a connected graph with n-1 edges is a tree
        return 0
    adj = g.adjacency
    best = 0
    for s in range(g.n):
        if g.n - s <= best:
            break
        on_path = [False] * g.n
        on_path[s] = True
        # Cycles through s whose other vertices are all > s, so each cycle is
        # counted from its smallest vertex only.
        stack = [(s, iter(adj[s]), 1)]
        while stack:
            u, it, length = stack[-1]
            advanced = False
            for w in it:
                if w == s and length >= 3:
                    if length > best:
                        best = length
                elif w > s and not on_path[w]:
                    on_path[w] = True
                    stack.append((w, iter(adj[w]), length + 1))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if u != s:
                    on_path[u] = False
            if best == g.n - s:
                break
    return best


def is_tree(g: Graph) -> bool:
    return g.m == g.n - 1


def is_bipartite(g: Graph) -> bool:
    side = [-1] * g.n
    side[0] = 0
    todo = deque([0])
    while todo:
        u = todo.popleft()
        for w in g.adjacency[u]:
            if side[w] < 0:
                side[w] = 1 - side[u]
                todo.append(w)
            elif side[w] == side[u]:
                return False
    return True


def square_path_order(g: Graph) -> list[int] | None:
    """A spine ordering under which ``g`` equals ``build_square_path(n)``, or None."""
    n = g.n
    if g.m != max(0, n - 1) + max(0, n - 2):
        return None
    if n <= 3:
        # K1, K2 and K3 are their own squares
        return list(range(n))
    target = {(i, i + 1) for i in range(n - 1)} | {(i, i + 2) for i in range(n - 2)}
    ends = [v for v in range(n) if g.degree(v) == 2]
    for a in ends:
        for b in g.adjacency[a]:
            order = _extend_spine(g, [a, b])
            if order is not None:
                pos = {v: t for t, v in enumerate(order)}
                mapped = {(min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges}
                if mapped == target:
                    return order
    return None


def _extend_spine(g: Graph, order: list[int]) -> list[int] | None:
    if len(order) == g.n:
        return order
    used = set(order)
    last, prev = order[-1], order[-2]
    for w in g.adjacency[last]:
        if w not in used and g.has_edge(prev, w):
            found = _extend_spine(g, order + [w])
            if found is not None:
                return found
    return None


def is_square_path(g: Graph) -> bool:
    return square_path_order(g) is not None


@dataclass(frozen=True)
class Classification:
    is_tree: bool
    is_bipartite: bool
    is_square_path: bool


def classify(g: Graph) -> Classification:
    return Classification(is_tree(g), is_bipartite(g), is_square_path(g))


# ------------------------------------------------------------------------ io


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise GraphError("empty graph file")
    try:
        n, m = (int(x) for x in rows[0])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"malformed graph text: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    for u, v in edges:
        if u >= v:
            raise GraphError(f"edge line '{u} {v}' must have u < v")
    if edges != sorted(edges):
        raise GraphError("edge lines must be sorted lexicographically")
    if len(set(edges)) != len(edges):
        raise GraphError("duplicate edge")
    return Graph(n, edges)


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g))


# Fill colours for DOT output, indexed by exploration colour; 0 is uncoloured.
# Colours past the end of the table wrap around, skipping the white slot.
DOT_PALETTE = (
    "white",
    "red",
    "green",
    "deepskyblue",
    "gray",
    "gold",
    "orchid",
    "orange",
    "tan",
    "palegreen",
    "lightpink",
)


def dot_fill(color: int) -> str:
    if color <= 0:
        return DOT_PALETTE[0]
    return DOT_PALETTE[1 + (color - 1) % (len(DOT_PALETTE) - 1)]


def to_dot(g: Graph, coloring: Sequence[int] | None = None, name: str = "G") -> str:
    lines = [f"graph {name} {{", "  node [style=filled];"]
    for v in range(g.n):
        c = coloring[v] if coloring is not None else 0
        lines.append(f'  {v} [label="{v}:{c}", fillcolor="{dot_fill(c)}"];')
    for u, v in g.sorted_edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
