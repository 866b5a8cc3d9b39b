"""Graph families that satisfy the witness constructions' hypotheses."""

import itertools
import random

import networkx as nx

from broadcast_indep.exact_solvers import Broadcast
from broadcast_indep.graph_core import Graph, all_pairs_distances, is_connected


def from_nx(h: nx.Graph) -> Graph:
    index = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return Graph.from_edges(len(index), [(index[a], index[b]) for a, b in h.edges()])


def random_lift(base: Graph, copies: int, rng: random.Random) -> Graph:
    """Random permutation lift: keeps degrees and never shortens cycles."""
    while True:
        edges = []
        for u, v in base.edges():
            perm = list(range(copies))
            rng.shuffle(perm)
            edges += [(u * copies + i, v * copies + perm[i]) for i in range(copies)]
        g = Graph.from_edges(base.n * copies, edges)
        if is_connected(g):
            return g


def projective_plane_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q), q prime: (q+1)-regular, girth 6."""
    pts = []
    for v in itertools.product(range(q), repeat=3):
        if any(v):
            lead = next(c for c in v if c)
            inv = pow(lead, -1, q)
            norm = tuple(c * inv % q for c in v)
            if norm not in pts:
                pts.append(norm)
    m = len(pts)
    edges = [(i, m + j) for i, p in enumerate(pts) for j, l in enumerate(pts)
             if sum(a * b for a, b in zip(p, l)) % q == 0]
    return Graph.from_edges(2 * m, edges)


def hexagonal_torus(rows: int, cols: int) -> Graph:
    return from_nx(nx.hexagonal_lattice_graph(rows, cols, periodic=True))


def hypercube(d: int) -> Graph:
    return from_nx(nx.hypercube_graph(d))


def torus_grid(a: int, b: int) -> Graph:
    return from_nx(nx.grid_2d_graph(a, b, periodic=True))


def random_valid_broadcast(g: Graph, rng: random.Random, dist=None,
                           density: float = 0.5, big: float = 0.5) -> Broadcast:
    """Greedy random independent broadcast.

    Vertices are visited in random order; each takes a value no larger than
    its eccentricity and strictly below its distance to every earlier
    broadcaster, provided it lies outside their ranges.  With probability
    ``big`` the largest admissible value is used, otherwise a uniform one.
    """
    dist = all_pairs_distances(g) if dist is None else dist
    ecc = [int(max(row)) for row in dist]
    vals = [0] * g.n
    order = list(range(g.n))
    rng.shuffle(order)
    for x in order:
        if rng.random() > density:
            continue
        cap = ecc[x]
        ok = True
        for y in range(g.n):
            if vals[y]:
                if dist[x][y] <= vals[y]:
                    ok = False
                    break
                cap = min(cap, int(dist[x][y]) - 1)
        if ok and cap >= 1:
            vals[x] = cap if rng.random() < big else rng.randint(1, cap)
    return Broadcast(tuple(vals))


def necklace(base: Graph, copies: int, rng: random.Random) -> Graph:
    """Copies of ``base`` in a row, consecutive ones joined by one random edge.

    The joining edges lie on no cycle, so girth and minimum degree are those
    of ``base`` while the diameter grows linearly in ``copies``.
    """
    n = base.n
    edges = [(c * n + u, c * n + v) for c in range(copies) for u, v in base.edges()]
    edges += [(c * n + rng.randrange(n), (c + 1) * n + rng.randrange(n))
              for c in range(copies - 1)]
    return Graph.from_edges(n * copies, edges)
