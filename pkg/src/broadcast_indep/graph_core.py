"""Simple undirected graphs on dense vertex indices, plus the metric helpers
(distances, eccentricity, girth, square) and the graph6 / edge-list codecs.

Vertices are always ``0..n-1`` and neighbour lists are kept sorted, so every
"smallest neighbour" tie-break downstream is reproducible.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

INF = math.inf


class GraphError(ValueError):
    """Malformed graph input or an operation outside its domain."""


class DisconnectedGraphError(GraphError):
    """A metric that needs a connected graph was given a disconnected one."""


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise GraphError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        for u, row in enumerate(self.adj):
            if list(row) != sorted(set(row)):
                raise GraphError(f"neighbours of {u} not sorted/unique")
            for v in row:
                if v == u:
                    raise GraphError(f"self-loop at {u}")
                if not 0 <= v < self.n:
                    raise GraphError(f"vertex {v} out of range")
                if u not in self._adjsets[v]:
                    raise GraphError(f"asymmetric edge {u}-{v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph, rejecting self-loops; repeated edges collapse silently."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range for n={n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @cached_property
    def _adjsets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(row) for row in self.adj)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood bitmasks (bit v set in masks[u] iff uv is an edge)."""
        out = []
        for row in self.adj:
            m = 0
            for v in row:
                m |= 1 << v
            out.append(m)
        return tuple(out)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjsets[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def m(self) -> int:
        return sum(len(r) for r in self.adj) // 2

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to 0..len-1 in the given order.

        Returns the subgraph and the list mapping new index -> old index.
        """
        keep = list(vertices)
        pos = {v: i for i, v in enumerate(keep)}
        edges = [
            (pos[u], pos[v])
            for u in keep
            for v in self.adj[u]
            if v in pos and u < v
        ]
        return Graph.from_edges(len(keep), edges), keep


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range for n={g.n}")


def bfs_distances(g: Graph, source: int) -> list[float]:
    """Edge distances from ``source``; unreachable vertices get ``INF``."""
    _check_vertex(g, source)
    dist: list[float] = [INF] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in g.adj[u]:
            if dist[v] == INF:
                dist[v] = du
                queue.append(v)
    return dist


def all_pairs_distances(g: Graph) -> list[list[float]]:
    return [bfs_distances(g, s) for s in range(g.n)]


def components(g: Graph) -> list[int]:
    """Component label per vertex, labels numbered by smallest member."""
    label = [-1] * g.n
    c = 0
    for s in range(g.n):
        if label[s] != -1:
            continue
        label[s] = c
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.adj[u]:
                if label[v] == -1:
                    label[v] = c
                    queue.append(v)
        c += 1
    return label


def is_connected(g: Graph) -> bool:
    return g.n == 0 or max(components(g)) == 0


def require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError("graph is disconnected")


def eccentricity(g: Graph, v: int) -> int:
    _check_vertex(g, v)
    d = max(bfs_distances(g, v))
    if d == INF:
        raise DisconnectedGraphError("eccentricity undefined on a disconnected graph")
    return int(d)


def eccentricities(g: Graph) -> list[int]:
    require_connected(g)
    return [int(max(bfs_distances(g, v))) for v in range(g.n)]


def diameter(g: Graph) -> int:
    return max(eccentricities(g), default=0)


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise GraphError("minimum degree of the empty graph")
    return min(len(r) for r in g.adj)


def _cycle_from(root: int, parent: list[int], u: int, w: int) -> list[int]:
    left = [u]
    while left[-1] != root:
        left.append(parent[left[-1]])
    right = [w]
    while right[-1] != root:
        right.append(parent[right[-1]])
    # root appears at the end of both walks
    return list(reversed(left)) + right[:-1]


def shortest_cycle(g: Graph, below: float = INF) -> list[int] | None:
    """A shortest cycle (as a vertex sequence), or None for a forest.

    With ``below`` set, only cycles shorter than ``below`` are searched for
    and None means there is none.  Roots are scanned in ascending order and
    the first cycle of minimum length wins.
    """
    best_len = below
    best: list[int] | None = None
    for root in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            # a cycle found from here has length >= 2*dist[u]+1
            if 2 * dist[u] + 1 >= best_len:
                break
            for w in g.adj[u]:
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u] and dist[w] >= dist[u]:
                    length = dist[u] + dist[w] + 1
                    if length < best_len:
                        best_len = length
                        best = _cycle_from(root, parent, u, w)
    return best


def girth(g: Graph) -> int | None:
    """Length of a shortest cycle, None when ``g`` is acyclic."""
    cyc = shortest_cycle(g)
    return None if cyc is None else len(cyc)


def square_graph(g: Graph) -> Graph:
    """Same vertices, uv an edge iff 1 <= dist(u, v) <= 2."""
    edges = set()
    for u in range(g.n):
        for v in g.adj[u]:
            if u < v:
                edges.add((u, v))
            for w in g.adj[v]:
                if w != u:
                    edges.add((min(u, w), max(u, w)))
    return Graph.from_edges(g.n, edges)


# --------------------------------------------------------------------- codecs

def _g6_size(data: bytes) -> tuple[int, int]:
    if not data:
        raise GraphError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] != 126:
        if len(data) < 4:
            raise GraphError("truncated graph6 size header")
        n = 0
        for b in data[1:4]:
            n = (n << 6) | (b - 63)
        return n, 4
    if len(data) < 8:
        raise GraphError("truncated graph6 size header")
    n = 0
    for b in data[2:8]:
        n = (n << 6) | (b - 63)
    return n, 8


def parse_graph6(text: str) -> Graph:
    data = text.strip().encode("ascii")
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if any(not 63 <= b <= 126 for b in data):
        raise GraphError("graph6 byte outside 63..126")
    n, off = _g6_size(data)
    body = data[off:]
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise GraphError(
            f"graph6 body has {len(body)} bytes, expected {(nbits + 5) // 6} for n={n}"
        )
    bits = []
    for b in body:
        v = b - 63
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphError("nonzero graph6 padding bits")
    edges = []
    k = 0
    # upper triangle, column-major: (0,1),(0,2),(1,2),(0,3),...
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def serialize_graph6(g: Graph) -> str:
    n = g.n
    if n < 63:
        out = [n + 63]
    elif n < 258048:
        out = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        out = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    bits = [1 if g.has_edge(i, j) else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k : k + 6]:
            v = (v << 1) | b
        out.append(v + 63)
    return bytes(out).decode("ascii")


def parse_edgelist(text: str, n: int | None = None) -> Graph:
    """One ``u v`` pair per line, 0-indexed; ``#`` starts a comment.

    Without ``n`` the vertex count is one more than the largest index seen.
    An optional header line ``# n=<count>`` fixes the count (needed to keep
    trailing isolated vertices).  Duplicate edges collapse with a warning.
    """
    edges: list[tuple[int, int]] = []
    header_n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            tag = line[1:].strip()
            if tag.startswith("n="):
                try:
                    header_n = int(tag[2:])
                except ValueError as exc:
                    raise GraphError(f"line {lineno}: bad vertex-count header") from exc
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphError(f"line {lineno}: non-integer vertex") from exc
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex index")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at {u}")
        edges.append((u, v))
    top = max((max(e) for e in edges), default=-1) + 1
    if n is None:
        n = header_n if header_n is not None else top
    if top > n:
        raise GraphError(f"vertex index {top - 1} >= n={n}")
    seen = set()
    for u, v in edges:
        key = (min(u, v), max(u, v))
        if key in seen:
            log.warning("duplicate edge %d-%d collapsed", *key)
        seen.add(key)
    return Graph.from_edges(n, edges)


def serialize_edgelist(g: Graph) -> str:
    lines = [f"# n={g.n}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


FORMATS = ("graph6", "edgelist")


def parse_graph(text: str, fmt: str) -> Graph:
    if fmt == "graph6":
        return parse_graph6(text)
    if fmt == "edgelist":
        return parse_edgelist(text)
    raise GraphError(f"unknown format {fmt!r}")


def serialize_graph(g: Graph, fmt: str) -> str:
    if fmt == "graph6":
        return serialize_graph6(g)
    if fmt == "edgelist":
        return serialize_edgelist(g)
    raise GraphError(f"unknown format {fmt!r}")


# ------------------------------------------------------------ standard graphs

def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(k: int) -> Graph:
    """K_{1,k} with centre 0."""
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def empty_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def lcf_graph(n: int, shifts: Sequence[int], repeats: int) -> Graph:
    """Hamiltonian cycle 0..n-1 plus LCF chords."""
    edges = [(i, (i + 1) % n) for i in range(n)]
    seq = list(shifts) * repeats
    for i, s in enumerate(seq):
        edges.append((i, (i + s) % n))
    return Graph.from_edges(n, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def heawood_graph() -> Graph:
    return lcf_graph(14, [5, -5], 7)


def pappus_graph() -> Graph:
    return lcf_graph(18, [5, 7, -7, 7, -7, -5], 3)


def mcgee_graph() -> Graph:
    return lcf_graph(24, [12, 7, -7], 8)


NAMED_GRAPHS = {
    "petersen": petersen_graph,
    "heawood": heawood_graph,
    "pappus": pappus_graph,
    "mcgee": mcgee_graph,
}
