"""Randomised construction of connected graphs with girth >= k and minimum
degree >= k whose star centres carry a heavy independent broadcast.

Pipeline (:func:`run_construction`)::

    sample_host -> glue_stars -> break_short_cycles -> repair_min_degree
                -> add_bridges -> center_broadcast

Randomness comes from two ``random.Random`` (MT19937) streams: the host
stream seeded with ``seed`` draws one ``random()`` per vertex pair in
lexicographic order; the glue stream seeded with ``seed + GLUE_SEED_OFFSET``
draws two ``randrange(k)`` per host edge (lower endpoint first) in
lexicographic edge order.  Everything else is deterministic.

Star i of the glued graph occupies the vertex block ``i*(k+1) .. i*(k+1)+k``:
the centre first, then its k leaves.
"""

from __future__ import annotations

import csv
import io
import logging
import random
import statistics
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .exact_solvers import (
    Broadcast,
    Budget,
    alpha_b_exact,
    is_independent_set,
    is_packing,
    max_independent_set,
    validate_broadcast,
)
from .graph_core import (
    Graph,
    all_pairs_distances,
    components,
    girth,
    is_connected,
    min_degree,
    shortest_cycle,
)

log = logging.getLogger(__name__)

SCHEMA = 1
GLUE_SEED_OFFSET = 0x9E3779B9

CSV_COLUMNS = (
    "schema", "seed", "n", "k", "epsilon", "F", "ell", "n_ell", "bridges",
    "girth", "min_degree", "weight", "alpha", "alpha_is_bound", "ratio",
    "degenerate_stage",
)


# ------------------------------------------------------------- star system

@dataclass(frozen=True)
class StarSystem:
    """Host graph H, the glued graph G and the still-alive host vertices.

    ``glue`` lists ``(i, j, x_i, x_j)`` per host edge u_i u_j (i < j) with
    the chosen leaves; ``collisions`` holds host edges whose leaf pair was
    already glued and so added no new edge.
    """

    host: Graph
    k: int
    graph: Graph
    glue: tuple[tuple[int, int, int, int], ...]
    collisions: tuple[tuple[int, int], ...] = ()
    alive: frozenset[int] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.alive is None:
            object.__setattr__(self, "alive", frozenset(range(self.host.n)))

    @classmethod
    def build(cls, host: Graph, k: int, glue) -> "StarSystem":
        block = k + 1
        edges = [(i * block, i * block + t) for i in range(host.n) for t in range(1, k + 1)]
        seen = set()
        collisions = []
        for i, j, xi, xj in glue:
            key = (min(xi, xj), max(xi, xj))
            if key in seen:
                collisions.append((i, j))
                log.info("glue collision on host edge %d-%d (leaves %d-%d)", i, j, *key)
                continue
            seen.add(key)
            edges.append(key)
        g = Graph.from_edges(host.n * block, edges)
        return cls(host, k, g, tuple(glue), tuple(collisions))

    @property
    def block(self) -> int:
        return self.k + 1

    def center(self, i: int) -> int:
        return i * self.block

    def leaves(self, i: int) -> range:
        return range(i * self.block + 1, (i + 1) * self.block)

    def star_of(self, v: int) -> int:
        return v // self.block

    @property
    def ports(self) -> dict[tuple[int, int], tuple[int, int]]:
        return {(i, j): (xi, xj) for i, j, xi, xj in self.glue}

    def alive_vertices(self) -> list[int]:
        return [v for i in sorted(self.alive) for v in range(i * self.block, (i + 1) * self.block)]

    def surviving_graph(self) -> tuple[Graph, list[int]]:
        """G(H') for the alive hosts, relabelled; also returns new -> old."""
        return self.graph.induced(self.alive_vertices())


def sample_host(n: int, epsilon: float, rng_seed: int) -> Graph:
    """G(n, p) with p = n**(epsilon - 1); one draw per pair, pairs in
    lexicographic order."""
    if n < 2:
        raise ValueError("host graph needs n >= 2")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon={epsilon} outside (0, 1)")
    p = n ** (epsilon - 1)
    rng = random.Random(rng_seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def glue_stars(host: Graph, k: int, rng_seed: int) -> StarSystem:
    """Replace every host vertex by a star K_{1,k} and every host edge by an
    edge between uniformly chosen leaves of the two stars."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = random.Random(rng_seed)
    block = k + 1
    glue = []
    for i, j in host.edges():
        xi = i * block + 1 + rng.randrange(k)
        xj = j * block + 1 + rng.randrange(k)
        glue.append((i, j, xi, xj))
    return StarSystem.build(host, k, glue)


def count_short_cycles(g: Graph, below: int) -> int:
    """Number of cycles of length < ``below`` (each counted once)."""
    total = 0
    for s in range(g.n):
        stack = [(s, [s])]
        while stack:
            u, path = stack.pop()
            for w in g.adj[u]:
                if w == s and len(path) >= 3:
                    total += 1
                elif w > s and w not in path and len(path) + 1 < below:
                    stack.append((w, path + [w]))
    return total // 2


def break_short_cycles(system: StarSystem, k: int) -> tuple[StarSystem, list[int]]:
    """Delete host vertices until the alive host has no cycle shorter than k.

    Each round takes a shortest cycle (first found, roots ascending) and
    removes its smallest vertex.  Returns the reduced system and F in
    removal order.
    """
    alive = set(system.alive)
    removed = []
    while True:
        order = sorted(alive)
        sub, old = system.host.induced(order)
        cyc = shortest_cycle(sub, below=k)
        if cyc is None:
            break
        victim = min(old[v] for v in cyc)
        alive.discard(victim)
        removed.append(victim)
    return replace(system, alive=frozenset(alive)), removed


@dataclass(frozen=True)
class RepairStep:
    x: int  # low-degree leaf, original vertex index
    star: int  # its star u_s
    neighbours: tuple[int, ...]  # N: stars its glue edges reach

    def to_json(self) -> dict:
        return {"x": self.x, "star": self.star, "N": list(self.neighbours)}


def is_independent_transversal(system: StarSystem, vertices) -> bool:
    """Independent in G, avoids every centre, meets each leaf set at most once."""
    vs = list(vertices)
    if not is_independent_set(system.graph, vs):
        return False
    if any(v % system.block == 0 for v in vs):
        return False
    stars = [system.star_of(v) for v in vs]
    return len(stars) == len(set(stars))


def repair_min_degree(system: StarSystem, k: int) -> tuple[StarSystem, list[RepairStep]]:
    """Strip stars until every vertex of G(H_i) has degree >= k.

    Each step takes the smallest vertex x of degree < k, then removes its
    star and every star its glue edges reach.
    """
    g = system.graph
    block = system.block
    alive = set(system.alive)
    steps = []
    while alive:
        low = None
        for i in sorted(alive):
            for v in range(i * block, (i + 1) * block):
                deg = sum(1 for u in g.adj[v] if u // block in alive)
                if deg < k:
                    low = v
                    break
            if low is not None:
                break
        if low is None:
            break
        s = low // block
        nbrs = tuple(sorted({u // block for u in g.adj[low] if u // block in alive} - {s}))
        alive -= {s, *nbrs}
        steps.append(RepairStep(low, s, nbrs))
    xs = [st.x for st in steps]
    if not is_independent_transversal(system, xs):
        raise AssertionError(f"repair leaves {xs} are not an independent transversal")
    return replace(system, alive=frozenset(alive)), steps


@dataclass(frozen=True)
class BridgedGraph:
    """Connected G* on the surviving stars.

    Surviving stars are relabelled in ascending order, so star t of G*
    again occupies the block t*(k+1) .. t*(k+1)+k.
    """

    graph: Graph
    k: int
    stars: tuple[int, ...]  # original host index of each surviving star
    old_of_new: tuple[int, ...]
    bridges: tuple[tuple[int, int], ...]  # in G* labels

    @property
    def centers(self) -> list[int]:
        return [t * (self.k + 1) for t in range(len(self.stars))]

    def as_star_system(self) -> StarSystem:
        """G* viewed as a star system over its own (quotient) host."""
        block = self.k + 1
        glue = []
        for u, v in self.graph.edges():
            if u % block and v % block and u // block != v // block:
                glue.append((u // block, v // block, u, v))
        host = Graph.from_edges(len(self.stars), [(i, j) for i, j, _, _ in glue])
        return StarSystem(host, self.k, self.graph, tuple(glue))


def add_bridges(system: StarSystem) -> BridgedGraph:
    """Join consecutive components leaf-to-leaf until G(H_l) is connected.

    Components are ordered by their smallest vertex; component c is joined
    to c+1 through the first leaf of each one's lowest star.
    """
    if not system.alive:
        raise ValueError("no surviving star")
    sub, old = system.surviving_graph()
    block = system.block
    label = components(sub)
    firsts: dict[int, int] = {}
    for v in range(sub.n):
        firsts.setdefault(label[v], v)
    # first vertex of a component is a centre; its first leaf follows it
    anchors = [firsts[c] + 1 for c in sorted(firsts)]
    bridges = list(zip(anchors, anchors[1:]))
    g = Graph.from_edges(sub.n, sub.edges() + bridges) if bridges else sub
    stars = tuple(sorted(system.alive))
    assert all(v % block for e in bridges for v in e)
    return BridgedGraph(g, system.k, stars, tuple(old), tuple(bridges))


def center_broadcast(bridged: BridgedGraph) -> Broadcast:
    """f = 2 on every surviving centre, 0 elsewhere."""
    if len(bridged.stars) < 2:
        raise ValueError("a single star has ecc(centre) = 1 < 2")
    return Broadcast.from_mapping(bridged.graph.n, {c: 2 for c in bridged.centers})


def max_independent_transversal(system: StarSystem, budget: Budget | None = None):
    """Largest independent transversal of the alive stars.

    Solved as a maximum independent set on the alive leaves with each leaf
    set made a clique (at most one leaf per star).  Returns the solver
    result; its witness is in ``system.graph`` labels.
    """
    leaves = [v for i in sorted(system.alive) for v in system.leaves(i)]
    pos = {v: t for t, v in enumerate(leaves)}
    edges = [
        (pos[u], pos[v])
        for u in leaves
        for v in system.graph.adj[u]
        if v in pos and u < v
    ]
    for i in system.alive:
        ls = [pos[v] for v in system.leaves(i)]
        edges += [(a, b) for a in ls for b in ls if a < b]
    aux = Graph.from_edges(len(leaves), edges)
    if aux.n == 0:
        res = max_independent_set(Graph.from_edges(1, []), budget)
        res.optimum, res.witness = 0, ()
        return res
    res = max_independent_set(aux, budget)
    res.witness = tuple(leaves[t] for t in res.witness)
    res.parameter = "beta"
    return res


# ------------------------------------------------------------- full runs

@dataclass
class ConstructionOptions:
    alpha_node_limit: int | None = 200_000
    beta_node_limit: int | None = 200_000
    alpha_b_max_n: int = 0  # run alpha_b_exact on G* up to this many vertices
    alpha_b_node_limit: int | None = 200_000
    enforce_epsilon: bool = True


@dataclass
class ConstructionReport:
    seed: int
    n: int
    k: int
    epsilon: float
    p: float
    edges_of_H: int = 0
    short_cycles_in_H: int | None = None
    glue_collisions: int = 0
    F: list[int] = field(default_factory=list)
    repair_log: list[RepairStep] = field(default_factory=list)
    transversal_ok: bool | None = None
    n_ell: int = 0
    bridges_added: int = 0
    vertices: int = 0
    edges: int = 0
    girth: int | None = None
    min_degree: int | None = None
    connected: bool | None = None
    broadcast_weight: int = 0
    broadcast_valid: bool | None = None
    centers_packing: bool | None = None
    alpha: int | None = None
    alpha_is_bound: bool = False
    beta: int | None = None
    alpha_b: int | None = None
    alpha_b_exact: bool = False
    achieved_ratio: float | None = None
    degenerate_stage: str = ""
    graph6: str = ""

    schema: int = SCHEMA

    @property
    def ell(self) -> int:
        return len(self.repair_log)

    @property
    def degenerate(self) -> bool:
        return bool(self.degenerate_stage)

    @property
    def reference_ratio(self) -> float:
        return 2 * (1 - 1 / self.k)

    def accounting_holds(self) -> bool:
        removed = sum(1 + len(s.neighbours) for s in self.repair_log)
        return self.n_ell == self.n - len(self.F) - removed

    def to_json(self) -> dict:
        return {
            "schema": self.schema,
            "seed": self.seed,
            "n": self.n,
            "k": self.k,
            "epsilon": self.epsilon,
            "p": self.p,
            "edges_of_H": self.edges_of_H,
            "short_cycles_in_H": self.short_cycles_in_H,
            "glue_collisions": self.glue_collisions,
            "F": self.F,
            "ell": self.ell,
            "repair_log": [s.to_json() for s in self.repair_log],
            "transversal_ok": self.transversal_ok,
            "n_ell": self.n_ell,
            "bridges_added": self.bridges_added,
            "vertices": self.vertices,
            "edges": self.edges,
            "girth": self.girth,
            "min_degree": self.min_degree,
            "connected": self.connected,
            "broadcast_weight": self.broadcast_weight,
            "broadcast_valid": self.broadcast_valid,
            "centers_packing": self.centers_packing,
            "alpha": self.alpha,
            "alpha_is_bound": self.alpha_is_bound,
            "beta": self.beta,
            "alpha_b": self.alpha_b,
            "alpha_b_exact": self.alpha_b_exact,
            "achieved_ratio": self.achieved_ratio,
            "reference_ratio": self.reference_ratio,
            "degenerate_stage": self.degenerate_stage or None,
            "graph6": self.graph6,
        }

    def csv_row(self) -> dict:
        return {
            "schema": self.schema,
            "seed": self.seed,
            "n": self.n,
            "k": self.k,
            "epsilon": repr(self.epsilon),
            "F": len(self.F),
            "ell": self.ell,
            "n_ell": self.n_ell,
            "bridges": self.bridges_added,
            "girth": "" if self.girth is None else self.girth,
            "min_degree": "" if self.min_degree is None else self.min_degree,
            "weight": self.broadcast_weight,
            "alpha": "" if self.alpha is None else self.alpha,
            "alpha_is_bound": int(self.alpha_is_bound),
            "ratio": "" if self.achieved_ratio is None else repr(self.achieved_ratio),
            "degenerate_stage": self.degenerate_stage,
        }


def default_epsilon(k: int) -> Fraction:
    """0.9 / (2 k^2), comfortably inside (0, 1/k^2)."""
    return Fraction(9, 20 * k * k)


def run_construction(n: int, k: int, epsilon: float, seed: int,
                     options: ConstructionOptions | None = None) -> ConstructionReport:
    """Run the whole pipeline once.  Degenerate runs stop at the failing
    stage and say so in ``degenerate_stage``; they are never retried here."""
    from .graph_core import serialize_graph6

    options = options or ConstructionOptions()
    epsilon = float(epsilon)
    if k < 3:
        raise ValueError("k must be at least 3")
    if options.enforce_epsilon and not 0 < epsilon < 1 / k**2:
        raise ValueError(f"epsilon={epsilon} outside (0, 1/k^2)")
    host = sample_host(n, epsilon, seed)
    rep = ConstructionReport(seed=seed, n=n, k=k, epsilon=epsilon, p=n ** (epsilon - 1))
    rep.edges_of_H = host.m
    if k <= 8:
        rep.short_cycles_in_H = count_short_cycles(host, k)
    system = glue_stars(host, k, seed + GLUE_SEED_OFFSET)
    rep.glue_collisions = len(system.collisions)

    system, rep.F = break_short_cycles(system, k)
    if 2 * len(rep.F) > n:
        rep.n_ell = len(system.alive)
        rep.degenerate_stage = "short_cycles"
        return rep

    system, rep.repair_log = repair_min_degree(system, k)
    rep.transversal_ok = is_independent_transversal(system, [s.x for s in rep.repair_log])
    rep.n_ell = len(system.alive)
    if rep.n_ell == 0:
        rep.degenerate_stage = "repair"
        return rep

    bridged = add_bridges(system)
    gstar = bridged.graph
    rep.bridges_added = len(bridged.bridges)
    rep.vertices, rep.edges = gstar.n, gstar.m
    rep.girth = girth(gstar)
    rep.min_degree = min_degree(gstar)
    rep.connected = is_connected(gstar)
    rep.graph6 = serialize_graph6(gstar)
    if rep.n_ell < 2:
        rep.degenerate_stage = "single_star"
        return rep

    f = center_broadcast(bridged)
    dist = all_pairs_distances(gstar)
    rep.broadcast_weight = f.weight
    rep.broadcast_valid = not validate_broadcast(gstar, f, dist)
    rep.centers_packing = is_packing(gstar, bridged.centers, dist)

    alpha = max_independent_set(
        gstar, Budget(time_ms=None, node_limit=options.alpha_node_limit), lexmin=False
    )
    if alpha.time_budget_hit:
        beta = max_independent_transversal(
            bridged.as_star_system(), Budget(time_ms=None, node_limit=options.beta_node_limit)
        )
        if not beta.time_budget_hit:
            rep.beta = beta.optimum
            bound = rep.n_ell + (k - 1) * beta.optimum
        else:
            bound = k * rep.n_ell
        rep.alpha, rep.alpha_is_bound = bound, True
    else:
        rep.alpha = alpha.optimum
    rep.achieved_ratio = rep.broadcast_weight / rep.alpha

    if gstar.n <= options.alpha_b_max_n:
        ab = alpha_b_exact(gstar, Budget(time_ms=None, node_limit=options.alpha_b_node_limit))
        rep.alpha_b, rep.alpha_b_exact = ab.optimum, not ab.time_budget_hit
    return rep


def structural_violations(rep: ConstructionReport) -> list[str]:
    """Everything a non-degenerate run promises, as a list of failures."""
    if rep.degenerate:
        return []
    out = []
    if rep.girth is not None and rep.girth < rep.k:
        out.append(f"girth {rep.girth} < k={rep.k}")
    if rep.min_degree is None or rep.min_degree < rep.k:
        out.append(f"min degree {rep.min_degree} < k={rep.k}")
    if not rep.connected:
        out.append("G* disconnected")
    if not rep.broadcast_valid:
        out.append("centre broadcast invalid")
    if rep.broadcast_weight != 2 * rep.n_ell:
        out.append("broadcast weight != 2 n_ell")
    if not rep.accounting_holds():
        out.append("n_ell accounting identity fails")
    if not rep.centers_packing:
        out.append("surviving centres are not a packing")
    if not rep.transversal_ok:
        out.append("repair leaves are not an independent transversal")
    if any(len(s.neighbours) >= rep.k for s in rep.repair_log):
        out.append("a repair step removed k or more neighbouring stars")
    if rep.alpha_b is not None and rep.alpha_b_exact and rep.alpha_b < rep.broadcast_weight:
        out.append("alpha_b(G*) < 2 n_ell")
    return out


def run_with_retries(n: int, k: int, epsilon: float, seed: int, retries: int,
                     options: ConstructionOptions | None = None) -> list[ConstructionReport]:
    """Explicit retry mode: seed, seed+1, ... until a non-degenerate run or
    ``retries`` extra attempts; every attempt is returned."""
    reports = []
    for attempt in range(retries + 1):
        rep = run_construction(n, k, epsilon, seed + attempt, options)
        reports.append(rep)
        if not rep.degenerate:
            break
    return reports


def sweep_csv(reports: list[ConstructionReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerow(rep.csv_row())
    return buf.getvalue()


def _quantiles(values: list[float]) -> dict | None:
    if not values:
        return None
    vs = sorted(values)
    return {
        "min": vs[0],
        "q25": _quantile(vs, 0.25),
        "median": statistics.median(vs),
        "q75": _quantile(vs, 0.75),
        "max": vs[-1],
    }


def _quantile(vs: list[float], q: float) -> float:
    if len(vs) == 1:
        return vs[0]
    pos = q * (len(vs) - 1)
    lo = int(pos)
    hi = min(lo + 1, len(vs) - 1)
    return vs[lo] + (vs[hi] - vs[lo]) * (pos - lo)


def sweep_summary(reports: list[ConstructionReport]) -> dict:
    """Per (n, k, epsilon): run counts, degenerate fraction and achieved
    ratio quantiles against the reference 2(1 - 1/k)."""
    groups: dict[tuple, list[ConstructionReport]] = {}
    for rep in reports:
        groups.setdefault((rep.n, rep.k, rep.epsilon), []).append(rep)
    out = []
    for (n, k, eps), reps in sorted(groups.items()):
        ratios = [r.achieved_ratio for r in reps if r.achieved_ratio is not None]
        stages: dict[str, int] = {}
        for r in reps:
            if r.degenerate:
                stages[r.degenerate_stage] = stages.get(r.degenerate_stage, 0) + 1
        out.append({
            "n": n,
            "k": k,
            "epsilon": eps,
            "runs": len(reps),
            "degenerate": sum(r.degenerate for r in reps),
            "degenerate_fraction": sum(r.degenerate for r in reps) / len(reps),
            "degenerate_stages": dict(sorted(stages.items())),
            "ratio": _quantiles(ratios),
            "max_ratio": max(ratios) if ratios else None,
            "reference_ratio": 2 * (1 - 1 / k),
            "structural_violations": sum(bool(structural_violations(r)) for r in reps),
        })
    return {"schema": SCHEMA, "groups": out}
