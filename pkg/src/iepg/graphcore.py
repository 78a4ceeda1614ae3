"""Simple undirected graphs on vertices 1..n.

Graphs are immutable values.  Vertex labels are 1-based throughout; edges are
stored as ``(i, j)`` tuples with ``i < j``.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

log = logging.getLogger(__name__)


class GraphError(ValueError):
    pass


def _norm_edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        norm = set()
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise GraphError(f"edge {{{i},{j}}} outside 1..{self.n}")
            norm.add(_norm_edge(i, j))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        edges = list(edges)
        seen = set()
        for e in edges:
            k = _norm_edge(int(e[0]), int(e[1]))
            if k in seen:
                raise GraphError(f"duplicate edge {k}")
            seen.add(k)
        return cls(n, frozenset(seen))

    def __len__(self) -> int:
        return self.n

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def has_edge(self, i: int, j: int) -> bool:
        return _norm_edge(i, j) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbors(self, v: int) -> list[int]:
        return sorted(j if i == v else i for i, j in self.edges if v in (i, j))

    def adjacency(self) -> dict[int, list[int]]:
        adj = {v: [] for v in self.vertices}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for v in adj:
            adj[v].sort()
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def is_connected(self) -> bool:
        return self.n > 0 and len(_bfs_order(self.adjacency(), 1)) == self.n

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == self.n - 1

    def induced(self, keep: Iterable[int]) -> "Graph":
        """Induced subgraph, relabelled 1..|keep| in ascending label order."""
        keep = sorted(set(keep))
        pos = {v: k + 1 for k, v in enumerate(keep)}
        return Graph(len(keep), frozenset(
            (pos[i], pos[j]) for i, j in self.edges if i in pos and j in pos))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        if "n" not in data:
            raise GraphError("graph JSON missing field 'n'")
        return cls.from_edges(int(data["n"]), data.get("edges", []))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


def _bfs_order(adj: dict[int, list[int]], start: int) -> list[int]:
    seen = {start}
    order = []
    queue = deque([start])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return order


def _need(params, count, kind):
    if len(params) != count:
        raise GraphError(f"{kind} takes {count} parameter(s), got {len(params)}")
    if any(int(p) < 1 for p in params):
        raise GraphError(f"{kind} parameters must be positive: {params}")
    return [int(p) for p in params]


def path(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(1, n)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(n, path(n).edges | {(1, n)})


def complete(n: int) -> Graph:
    return Graph(n, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def empty(n: int) -> Graph:
    return Graph(n)


def star(k: int) -> Graph:
    """K_{1,k} with hub 1."""
    return Graph(k + 1, frozenset((1, j) for j in range(2, k + 2)))


def generalized_star(arms: Sequence[int]) -> Graph:
    """Centre 1; arm r occupies the next ``arms[r]`` labels, nearest first."""
    edges = []
    nxt = 2
    for length in arms:
        prev = 1
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph(nxt - 1, frozenset(edges))


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    off = 0
    for g in graphs:
        edges.extend((i + off, j + off) for i, j in g.edges)
        off += g.n
    return Graph(off, frozenset(edges))


def make_family(kind: str, params: Sequence[int]) -> Graph:
    """Build a standard graph.

    ``union`` takes a list of orders and returns the disjoint union of paths
    with those orders, so ``[1, 1, 1]`` is 3K_1 and ``[2, 3]`` is P_2 ∪ P_3.
    """
    params = list(params)
    if kind == "path":
        (n,) = _need(params, 1, kind)
        return path(n)
    if kind == "cycle":
        (n,) = _need(params, 1, kind)
        return cycle(n)
    if kind == "complete":
        (n,) = _need(params, 1, kind)
        return complete(n)
    if kind == "complete_bipartite":
        m, n = _need(params, 2, kind)
        return join(empty(m), empty(n))
    if kind == "star":
        (k,) = _need(params, 1, kind)
        return star(k)
    if kind == "generalized_star":
        if not params:
            raise GraphError("generalized_star needs at least one arm")
        return generalized_star(_need(params, len(params), kind))
    if kind == "wheel":
        (n,) = _need(params, 1, kind)
        return join(cycle(n), empty(1))
    if kind == "union":
        if not params:
            raise GraphError("union needs at least one component order")
        return disjoint_union(*(path(p) for p in _need(params, len(params), kind)))
    raise GraphError(f"unknown graph family {kind!r}")


def components(g: Graph) -> list[tuple[Graph, dict[int, int]]]:
    """Connected components ordered by smallest vertex label.

    Each map sends original labels to 1..|component| preserving order.
    """
    adj = g.adjacency()
    seen: set[int] = set()
    out = []
    for v in g.vertices:
        if v in seen:
            continue
        members = sorted(_bfs_order(adj, v))
        seen.update(members)
        relabel = {u: k + 1 for k, u in enumerate(members)}
        out.append((g.induced(members), relabel))
    return out


def component_vertex_lists(g: Graph) -> list[list[int]]:
    return [sorted(m) for _, m in components(g)]


def partial_join(g: Graph, a: Iterable[int], h: Graph, b: Iterable[int]) -> Graph:
    """(g, a) ∨ (h, b).  Vertex i of h becomes |g| + i."""
    a, b = sorted(set(a)), sorted(set(b))
    if not set(a) <= set(g.vertices) or not set(b) <= set(h.vertices):
        raise GraphError("partial join vertex sets must lie inside their graphs")
    if not a or not b:
        log.warning("partial join with an empty vertex set adds no cross edges")
    base = disjoint_union(g, h)
    cross = {(i, g.n + j) for i in a for j in b}
    return Graph(base.n, base.edges | cross)


def join(g: Graph, h: Graph) -> Graph:
    return partial_join(g, g.vertices, h, h.vertices)


def vertex_boundary(g: Graph, w: Iterable[int]) -> list[int]:
    w = set(w)
    if not w <= set(g.vertices):
        raise GraphError("boundary set must lie inside the graph")
    out = set()
    for i, j in g.edges:
        if i in w and j not in w:
            out.add(j)
        elif j in w and i not in w:
            out.add(i)
    return sorted(out)


def spanning_tree(g: Graph) -> Graph:
    """Breadth-first spanning tree from vertex 1, neighbours in ascending order."""
    if not g.is_connected():
        raise GraphError("spanning tree needs a connected graph")
    adj = g.adjacency()
    seen = {1}
    queue = deque([1])
    edges = []
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                edges.append((v, w))
                queue.append(w)
    return Graph(g.n, frozenset(_norm_edge(*e) for e in edges))


def _require_tree(t: Graph):
    if not t.is_tree():
        raise GraphError("tree metrics need a tree")


def path_between(tree: Graph, i: int, j: int) -> tuple[int, ...]:
    _require_tree(tree)
    adj = tree.adjacency()
    parent = {i: None}
    queue = deque([i])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    seq = [j]
    while seq[-1] != i:
        seq.append(parent[seq[-1]])
    return tuple(reversed(seq))


def distances_from(g: Graph, v: int) -> dict[int, int]:
    adj = g.adjacency()
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(tree: Graph) -> int:
    _require_tree(tree)
    return max(max(distances_from(tree, v).values()) for v in tree.vertices)


def classify(g: Graph) -> str | None:
    """Family name of a connected graph among path/cycle/complete, else None.

    K_1, K_2 report as ``path``; K_3 reports as ``complete``.
    """
    if not g.is_connected():
        return None
    degs = [g.degree(v) for v in g.vertices]
    if g.is_tree() and max(degs, default=0) <= 2:
        return "path"
    if len(g.edges) == g.n * (g.n - 1) // 2:
        return "complete"
    if g.n >= 3 and all(d == 2 for d in degs):
        return "cycle"
    return None
