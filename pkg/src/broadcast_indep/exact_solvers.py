"""Exact independence, packing and broadcast-independence numbers.

All solvers are deterministic and return lexicographically smallest optimal
witnesses.  They run under a :class:`Budget`; when it runs out the result is
flagged with ``time_budget_hit`` and carries the best solution found so far,
which is then only a lower bound.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Sequence

from .graph_core import (
    Graph,
    GraphError,
    all_pairs_distances,
    eccentricities,
    require_connected,
    square_graph,
)

DEFAULT_TIME_MS = 60_000
BRUTEFORCE_MAX_N = 10


@dataclass(frozen=True)
class Broadcast:
    """A vertex-indexed function f: V -> N0.  Validity is checked separately."""

    values: tuple[int, ...]
    weight: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise ValueError("broadcast values must be nonnegative")
        object.__setattr__(self, "weight", sum(self.values))

    @classmethod
    def zeros(cls, n: int) -> "Broadcast":
        return cls((0,) * n)

    @classmethod
    def from_mapping(cls, n: int, values: dict[int, int]) -> "Broadcast":
        out = [0] * n
        for v, val in values.items():
            out[v] = val
        return cls(tuple(out))

    @property
    def support(self) -> list[int]:
        """The broadcasting vertices, in ascending order."""
        return [v for v, val in enumerate(self.values) if val > 0]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, v: int) -> int:
        return self.values[v]


@dataclass(frozen=True)
class Violation:
    condition: str  # "B1" or "B2"
    vertices: tuple[int, ...]
    detail: str


@dataclass
class SolverResult:
    parameter: str
    optimum: int
    witness: tuple[int, ...] | Broadcast
    nodes_explored: int = 0
    time_budget_hit: bool = False
    wall_ms: float = 0.0

    def to_json(self, timings: bool = False) -> dict:
        wit = self.witness
        out = {
            "parameter": self.parameter,
            "optimum": self.optimum,
            "witness": list(wit.values) if isinstance(wit, Broadcast) else list(wit),
            "nodes": self.nodes_explored,
            "budget_hit": self.time_budget_hit,
        }
        if timings:
            out["wall_ms"] = round(self.wall_ms, 3)
        return out


@dataclass
class Budget:
    """Wall-clock and/or search-node limit for one solve.

    A node limit makes budget exhaustion reproducible, which the wall clock
    cannot guarantee; the generator pipeline relies on that.
    """

    time_ms: float | None = DEFAULT_TIME_MS
    node_limit: int | None = None


class _BudgetExceeded(Exception):
    pass


class _Meter:
    def __init__(self, budget: Budget | None):
        budget = budget or Budget()
        self.start = time.perf_counter()
        self.deadline = (
            None if budget.time_ms is None else self.start + budget.time_ms / 1000.0
        )
        self.node_limit = budget.node_limit
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _BudgetExceeded
        if self.deadline is not None and not self.nodes & 1023:
            if time.perf_counter() > self.deadline:
                raise _BudgetExceeded

    @property
    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.start) * 1000.0


# ------------------------------------------------------------------ checks

def _bits(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    if mask.bit_count() * 8 > mask.bit_length():
        return [i for i, c in enumerate(bin(mask)[:1:-1]) if c == "1"]
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def is_independent_set(g: Graph, vertices: Sequence[int]) -> bool:
    vs = set(vertices)
    return all(not (set(g.adj[v]) & vs) for v in vs)


def is_packing(g: Graph, vertices: Sequence[int], dist=None) -> bool:
    """Pairwise distance at least 3 (checked on ``g`` itself, not its square)."""
    vs = sorted(set(vertices))
    if dist is None:
        dist = all_pairs_distances(g)
    return all(dist[u][v] >= 3 for u, v in itertools.combinations(vs, 2))


def validate_broadcast(g: Graph, f: Broadcast, dist=None) -> list[Violation]:
    """Check (B1) f(x) <= ecc(x) and (B2) dist(x, y) > max(f(x), f(y)).

    Returns the violations found; an empty list means ``f`` is an
    independent broadcast on ``g``.
    """
    require_connected(g)
    if len(f) != g.n:
        raise GraphError(f"broadcast has {len(f)} values for a graph on {g.n} vertices")
    if dist is None:
        dist = all_pairs_distances(g)
    out = []
    support = f.support
    for x in support:
        ecc = max(dist[x])
        if f[x] > ecc:
            out.append(Violation("B1", (x,), f"f({x})={f[x]} > ecc({x})={ecc}"))
    for x, y in itertools.combinations(support, 2):
        d = dist[x][y]
        top = max(f[x], f[y])
        if d <= top:
            out.append(
                Violation("B2", (x, y), f"dist({x},{y})={d} <= max(f)={top}")
            )
    return out


def is_independent_broadcast(g: Graph, f: Broadcast) -> bool:
    return not validate_broadcast(g, f)


# ------------------------------------------------------ independence number

class _MISSearch:
    """Exact maximum independent set over neighbourhood bitmasks.

    ``solve(cand, floor)`` is fail-soft: it returns an independent set inside
    ``cand``, and that set is maximum whenever alpha(cand) > floor.

    Exact reductions applied before branching: vertices of degree <= 1 and
    degree-2 vertices with adjacent neighbours are taken; a degree-2 vertex
    v with nonadjacent neighbours u, w is folded into a new vertex z joined
    to N(u) | N(w) - v (alpha drops by exactly one; z in the solution means
    u and w, otherwise v).  Connected components are solved separately.
    Branching is on a maximum-degree vertex; the bound is the smaller of a
    greedy clique-cover count and the degree-sum bound.
    """

    def __init__(self, masks: Sequence[int], meter: _Meter):
        self.masks = list(masks)
        self.meter = meter

    def bound(self, cand: int) -> int:
        masks = self.masks
        cover = 0
        rest = cand
        while rest:
            low = rest & -rest
            clique = low
            common = masks[low.bit_length() - 1] & rest
            while common:
                lw = common & -common
                clique |= lw
                common &= masks[lw.bit_length() - 1]
            rest &= ~clique
            cover += 1
        # an independent set of size t meets t distinct edge stars, so the
        # t smallest degrees sum to at most |E|
        degs = sorted((masks[v] & cand).bit_count() for v in _bits(cand))
        edges = sum(degs) // 2
        t = acc = 0
        for d in degs:
            acc += d
            if acc > edges:
                break
            t += 1
        return min(cover, t)

    def _component(self, cand: int) -> int:
        masks = self.masks
        seen = frontier = cand & -cand
        while frontier:
            grow = 0
            for v in _bits(frontier):
                grow |= masks[v]
            frontier = grow & cand & ~seen
            seen |= frontier
        return seen

    def _fold(self, v: int, u: int, w: int, cand: int, undo: list) -> tuple[int, int]:
        masks = self.masks
        z = len(masks)
        zmask = (masks[u] | masks[w]) & cand & ~((1 << v) | (1 << u) | (1 << w))
        masks.append(zmask)
        zbit = 1 << z
        for t in _bits(zmask):
            undo.append((t, masks[t]))
            masks[t] |= zbit
        cand = (cand & ~((1 << v) | (1 << u) | (1 << w))) | zbit
        return cand, z

    def solve(self, cand: int, floor: int, dirty: int | None = None) -> tuple[int, int]:
        """``dirty`` marks vertices whose degree may have dropped below 3
        since the last reduction pass; None means all of ``cand``."""
        self.meter.tick()
        masks = self.masks
        taken = 0
        size = 0
        folds: list[tuple[int, int, int, int]] = []  # (z, v, u, w)
        undo: list[tuple[int, int]] = []
        base_len = len(masks)
        dirty = cand if dirty is None else dirty & cand
        try:
            while dirty:
                low = dirty & -dirty
                dirty ^= low
                v = low.bit_length() - 1
                nb = masks[v] & cand
                d = nb.bit_count()
                if d > 2:
                    continue
                if d == 2:
                    u, w = _bits(nb)
                    if not masks[u] >> w & 1:
                        cand, z = self._fold(v, u, w, cand, undo)
                        folds.append((z, v, u, w))
                        size += 1
                        dirty = (dirty | masks[z] | (1 << z)) & cand
                        continue
                # degree <= 1, or a triangle through v: v is simplicial
                gone = nb | low
                taken |= low
                size += 1
                cand &= ~gone
                touched = 0
                for t in _bits(nb):
                    touched |= masks[t]
                dirty = (dirty | touched) & cand
            best_size, best_set = self._split(cand, floor - size)
            best_size += size
            best_set |= taken
            # unfold innermost first
            for z, v, u, w in reversed(folds):
                if best_set >> z & 1:
                    best_set = (best_set & ~(1 << z)) | (1 << u) | (1 << w)
                else:
                    best_set |= 1 << v
            return best_size, best_set
        finally:
            for t, old in reversed(undo):
                masks[t] = old
            del masks[base_len:]

    def _split(self, cand: int, floor: int) -> tuple[int, int]:
        if not cand:
            return 0, 0
        comp = self._component(cand)
        if comp == cand:
            return self._branch(cand, floor)
        parts = []
        rest = cand
        while rest:
            c = self._component(rest)
            parts.append(c)
            rest &= ~c
        parts.sort(key=lambda c: (c.bit_count(), c & -c))
        ubs = [self.bound(c) for c in parts]
        total, chosen = 0, 0
        for i, c in enumerate(parts):
            need = floor - total - sum(ubs[i + 1:])
            s, m = self._branch(c, need)
            total += s
            chosen |= m
            if s <= need:
                return total, chosen
        return total, chosen

    def _branch(self, cand: int, floor: int) -> tuple[int, int]:
        if self.bound(cand) <= floor:
            return 0, 0
        masks = self.masks
        pivot, pdeg = -1, -1
        for v in _bits(cand):
            d = (masks[v] & cand).bit_count()
            if d > pdeg:
                pivot, pdeg = v, d
        bit = 1 << pivot
        nb = masks[pivot] & cand
        touched = 0
        for t in _bits(nb):
            touched |= masks[t]
        s_in, m_in = self.solve(cand & ~(nb | bit), floor - 1, touched)
        s_in += 1
        m_in |= bit
        s_out, m_out = self.solve(cand & ~bit, max(floor, s_in), nb)
        if s_out > s_in:
            return s_out, m_out
        return s_in, m_in


def _mis(masks: Sequence[int], n: int, budget: Budget | None, parameter: str,
         lexmin: bool = True) -> SolverResult:
    meter = _Meter(budget)
    full = (1 << n) - 1
    search = _MISSearch(masks, meter)
    # a greedy set is kept as fallback witness for budget exhaustion
    fallback, blocked = 0, 0
    for v in sorted(range(n), key=lambda u: (masks[u].bit_count(), u)):
        if not blocked >> v & 1:
            fallback |= 1 << v
            blocked |= masks[v] | (1 << v)
    try:
        opt, found = search.solve(full, -1)
    except _BudgetExceeded:
        return SolverResult(parameter, fallback.bit_count(), tuple(_bits(fallback)),
                            meter.nodes, True, meter.elapsed_ms)
    if not lexmin:
        return SolverResult(parameter, opt, tuple(_bits(found)), meter.nodes, False,
                            meter.elapsed_ms)
    # lexicographically smallest optimum: fix vertices in index order
    chosen: list[int] = []
    cand = full
    need = opt
    try:
        for v in range(n):
            if need == 0:
                break
            if not cand >> v & 1:
                continue
            sub = cand & ~masks[v] & ~((1 << (v + 1)) - 1)
            if need == 1 or search.solve(sub, need - 2)[0] >= need - 1:
                chosen.append(v)
                need -= 1
                cand = sub
            else:
                cand &= ~(1 << v)
    except _BudgetExceeded:
        return SolverResult(parameter, opt, tuple(_bits(found)), meter.nodes, True,
                            meter.elapsed_ms)
    return SolverResult(parameter, opt, tuple(chosen), meter.nodes, False, meter.elapsed_ms)


def max_independent_set(g: Graph, budget: Budget | None = None,
                        lexmin: bool = True) -> SolverResult:
    """alpha(g) with a maximum independent set.

    With ``lexmin`` (the default) the witness is the lexicographically
    smallest maximum independent set; this costs up to n extra decision
    searches, so callers that only need the value may switch it off.
    """
    if g.n < 1:
        raise GraphError("independence number needs at least one vertex")
    res = _mis(g.masks, g.n, budget, "alpha", lexmin)
    assert is_independent_set(g, res.witness)
    return res


def max_packing(g: Graph, budget: Budget | None = None) -> SolverResult:
    """rho(g), computed as alpha of the square graph."""
    if g.n < 1:
        raise GraphError("packing number needs at least one vertex")
    res = _mis(square_graph(g).masks, g.n, budget, "rho")
    assert is_packing(g, res.witness)
    return res


# ------------------------------------------- broadcast independence number

def alpha_b_bruteforce(g: Graph, max_n: int = BRUTEFORCE_MAX_N) -> SolverResult:
    """Reference oracle: enumerate every f with 0 <= f(x) <= ecc(x).

    Assignments are generated in index order with values ascending, and a
    partial assignment is dropped as soon as one of its pairs breaks (B2),
    so exactly the valid broadcasts are reached.  No weight-based pruning.
    """
    require_connected(g)
    if g.n > max_n:
        raise GraphError(f"brute force capped at {max_n} vertices (got {g.n})")
    meter = _Meter(Budget(time_ms=None))
    dist = all_pairs_distances(g)
    ecc = [int(max(row)) for row in dist]
    n = g.n
    vals = [0] * n
    best = [-1, None]

    def rec(i: int, weight: int) -> None:
        meter.tick()
        if i == n:
            if weight > best[0]:
                best[0], best[1] = weight, tuple(vals)
            return
        for v in range(ecc[i] + 1):
            if v:
                ok = all(
                    dist[i][j] > max(v, vals[j]) for j in range(i) if vals[j]
                )
                if not ok:
                    continue
            vals[i] = v
            rec(i + 1, weight + v)
        vals[i] = 0

    rec(0, 0)
    f = Broadcast(best[1])
    assert not validate_broadcast(g, f, dist)
    return SolverResult("alpha_b", best[0], f, meter.nodes, False, meter.elapsed_ms)


class _BroadcastSearch:
    """Branch and bound over per-vertex values with (B2) cap propagation.

    ``caps[y]`` is the largest value y may still take.  Setting f(x)=v > 0
    drops every unassigned y to 0 when dist(x, y) <= v and otherwise to at
    most dist(x, y) - 1.

    Pruning bound: the unassigned vertices are covered by fixed groups
    S = N[v] (pairwise distance <= 2).  Two positive vertices of such a
    group both have value 1, so S adds at most max(largest cap in S,
    number of leaves of S with positive cap).  This never exceeds the plain
    sum of caps.
    """

    def __init__(self, g: Graph, dist, ecc, meter: _Meter):
        self.g = g
        self.n = g.n
        self.dist = dist
        self.meter = meter
        self.ecc = ecc
        self.groups = self._groups()
        self.assigned = [False] * g.n
        self.vals = [0] * g.n
        self.best = -1
        self.best_vals: tuple[int, ...] | None = None

    def _groups(self) -> list[tuple[int, list[int]]]:
        g = self.g
        covered = [False] * g.n
        groups = []
        for v in sorted(range(g.n), key=lambda u: (-g.degree(u), u)):
            if covered[v]:
                continue
            leaves = [u for u in g.adj[v] if not covered[u]]
            covered[v] = True
            for u in leaves:
                covered[u] = True
            groups.append((v, leaves))
        return groups

    def bound(self, caps: list[int]) -> int:
        assigned = self.assigned
        total = 0
        for centre, leaves in self.groups:
            top = 0 if assigned[centre] else caps[centre]
            count = 0
            for u in leaves:
                if not assigned[u] and caps[u]:
                    count += 1
                    if caps[u] > top:
                        top = caps[u]
            total += top if top > count else count
        return total

    def propagate(self, caps: list[int], x: int, v: int) -> list[int]:
        new = caps[:]
        row = self.dist[x]
        assigned = self.assigned
        for y in range(self.n):
            if y == x or assigned[y]:
                continue
            d = row[y]
            if d <= v:
                new[y] = 0
            elif d - 1 < new[y]:
                new[y] = d - 1
        return new

    def optimise(self, order: Sequence[int], caps: list[int], i: int, weight: int) -> None:
        """Find the optimum; larger values first for early good incumbents."""
        self.meter.tick()
        if i == len(order):
            if weight > self.best:
                self.best, self.best_vals = weight, tuple(self.vals)
            return
        if weight + self.bound(caps) <= self.best:
            return
        x = order[i]
        self.assigned[x] = True
        for v in range(caps[x], 0, -1):
            self.vals[x] = v
            self.optimise(order, self.propagate(caps, x, v), i + 1, weight + v)
        self.vals[x] = 0
        self.optimise(order, caps, i + 1, weight)
        self.assigned[x] = False

    def first_reaching(self, caps: list[int], x: int, weight: int, target: int) -> bool:
        """Depth-first in index order with values ascending; the first
        complete assignment of weight >= target is the lexicographically
        smallest one."""
        self.meter.tick()
        if x == self.n:
            if weight >= target:
                self.best, self.best_vals = weight, tuple(self.vals)
                return True
            return False
        if weight + self.bound(caps) < target:
            return False
        self.assigned[x] = True
        self.vals[x] = 0
        if self.first_reaching(caps, x + 1, weight, target):
            return True
        for v in range(1, caps[x] + 1):
            self.vals[x] = v
            if self.first_reaching(self.propagate(caps, x, v), x + 1, weight + v, target):
                return True
        self.vals[x] = 0
        self.assigned[x] = False
        return False


def _seed_broadcast(g: Graph, dist, ecc) -> tuple[int, ...]:
    """Cheap valid incumbent.

    For every value c, greedily pick vertices with ecc >= c that lie pairwise
    more than c apart (lowest degree first) and give each the value c; keep
    the heaviest.  c = 1 is a greedy independent set and c = diam a single
    peripheral vertex.
    """
    order = sorted(range(g.n), key=lambda u: (g.degree(u), u))
    best: tuple[int, ...] = (0,) * g.n
    best_w = 0
    for c in range(1, max(ecc) + 1):
        eligible = [v for v in order if ecc[v] >= c]
        if c * len(eligible) <= best_w:
            continue
        chosen: list[int] = []
        for v in eligible:
            row = dist[v]
            if all(row[u] > c for u in chosen):
                chosen.append(v)
        if c * len(chosen) > best_w:
            best_w = c * len(chosen)
            vals = [0] * g.n
            for v in chosen:
                vals[v] = c
            best = tuple(vals)
    return best


def alpha_b_exact(g: Graph, budget: Budget | None = None) -> SolverResult:
    """alpha_b(g) by branch and bound; witness is the lexicographically
    smallest optimal broadcast vector."""
    require_connected(g)
    meter = _Meter(budget)
    if g.n == 1:
        return SolverResult("alpha_b", 0, Broadcast((0,)), 1, False, meter.elapsed_ms)
    dist = all_pairs_distances(g)
    ecc = [int(max(row)) for row in dist]
    search = _BroadcastSearch(g, dist, ecc, meter)
    seed = _seed_broadcast(g, dist, ecc)
    search.best, search.best_vals = sum(seed), seed
    order = sorted(range(g.n), key=lambda v: (-ecc[v], v))
    try:
        search.optimise(order, list(ecc), 0, 0)
    except _BudgetExceeded:
        f = Broadcast(search.best_vals)
        return SolverResult("alpha_b", f.weight, f, meter.nodes, True, meter.elapsed_ms)
    opt, found = search.best, search.best_vals
    search.assigned = [False] * g.n
    search.vals = [0] * g.n
    try:
        hit = search.first_reaching(list(ecc), 0, 0, opt)
        assert hit
        found = search.best_vals
        flagged = False
    except _BudgetExceeded:
        flagged = True
    f = Broadcast(found)
    assert f.weight == opt and not validate_broadcast(g, f, dist)
    return SolverResult("alpha_b", opt, f, meter.nodes, flagged, meter.elapsed_ms)


def diametral_broadcast(g: Graph, budget: Budget | None = None) -> Broadcast:
    """The better of f = 1 on a maximum independent set and f = ecc on a
    single peripheral vertex (ties go to the independent set)."""
    require_connected(g)
    ecc = eccentricities(g)
    mis = max_independent_set(g, budget)
    diam = max(ecc)
    if diam > mis.optimum:
        return Broadcast.from_mapping(g.n, {ecc.index(diam): diam})
    return Broadcast.from_mapping(g.n, {v: 1 for v in mis.witness})
