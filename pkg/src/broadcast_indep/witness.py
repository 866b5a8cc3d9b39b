"""Independent-set witnesses extracted from an independent broadcast.

Each broadcasting vertex x gets a set I(x) whose shape depends on f(x) and on
the girth/degree regime.  The union of the I(x) is an independent set, so its
size certifies a lower bound on alpha(G) in terms of the broadcast weight:

* ``thm1``   (girth >= 6, min degree >= 3):  alpha >= weight / 2, strictly
  unless every positive value is 2;
* ``thm3i``  (girth >= 6, min degree >= 5):  alpha >= weight - |{x: f(x) >= 2}|;
* ``thm3ii`` (girth >= 4, min degree >= 10/xi, 2 <= xi < 4):  alpha >= weight / xi.

Sizes are computed, never assumed; :func:`verify_witness` re-checks every
claim and returns a machine-readable certificate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_solvers import Broadcast, is_packing, validate_broadcast
from .graph_core import (
    Graph,
    GraphError,
    all_pairs_distances,
    girth,
    is_connected,
    min_degree,
)

THEOREMS = ("thm1", "thm3i", "thm3ii")


class HypothesisViolation(GraphError):
    """Input outside the girth/degree/validity regime of a construction."""

    def __init__(self, hypothesis: str):
        super().__init__(hypothesis)
        self.hypothesis = hypothesis


@dataclass(frozen=True)
class WitnessEntry:
    x: int
    value: int
    rule: str
    path: tuple[int, ...]
    vertices: tuple[int, ...]
    bound: int  # smallest |I(x)| the construction guarantees

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "f": self.value,
            "rule": self.rule,
            "path": list(self.path),
            "set": list(self.vertices),
            "size": self.size,
            "bound": self.bound,
            "bound_satisfied": self.size >= self.bound,
        }


@dataclass(frozen=True)
class WitnessFamily:
    theorem: str
    entries: tuple[WitnessEntry, ...]
    xi: Fraction | None = None

    @property
    def union(self) -> frozenset[int]:
        return frozenset(v for e in self.entries for v in e.vertices)

    def to_json(self) -> dict:
        out: dict = {"theorem": self.theorem}
        if self.xi is not None:
            out["xi"] = str(self.xi)
        out["entries"] = [e.to_json() for e in self.entries]
        return out


@dataclass(frozen=True)
class Check:
    clause: str
    subject: str
    holds: bool
    detail: str

    def to_json(self) -> dict:
        return {"clause": self.clause, "subject": self.subject,
                "holds": self.holds, "detail": self.detail}


@dataclass
class Certificate:
    theorem: str
    checks: list[Check] = field(default_factory=list)
    union_size: int = 0
    weight: int = 0

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.checks if not c.holds]

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "certified": self.ok,
            "weight": self.weight,
            "alpha_lower_bound": self.union_size,
            "checks": [c.to_json() for c in self.checks],
        }


def as_fraction(xi) -> Fraction:
    """Exact value of xi; floats are taken at their binary value."""
    if isinstance(xi, Fraction):
        return xi
    if isinstance(xi, str):
        return Fraction(xi)
    return Fraction(xi)


def shortest_path_of_length(g: Graph, x: int, length: int, dist=None) -> list[int]:
    """An isometric path x = x_0, ..., x_length with dist(x, x_i) = i.

    The endpoint is the smallest vertex at distance ``length``; each earlier
    vertex is the smallest neighbour one step closer to x.
    """
    row = all_pairs_distances(g)[x] if dist is None else dist[x]
    if length < 0:
        raise ValueError("negative path length")
    at = [v for v in range(g.n) if row[v] == length]
    if not at:
        raise GraphError(f"no vertex at distance {length} from {x} (ecc too small)")
    path = [at[0]]
    for i in range(length - 1, -1, -1):
        path.append(next(u for u in g.adj[path[-1]] if row[u] == i))
    path.reverse()
    return path


def _check_hypotheses(g: Graph, f: Broadcast, min_girth: int, min_deg) -> list:
    if not is_connected(g):
        raise HypothesisViolation("graph is disconnected")
    gg = girth(g)
    if gg is not None and gg < min_girth:
        raise HypothesisViolation(f"girth {gg} < {min_girth}")
    d = min_degree(g)
    if min_deg is not None and d < min_deg:
        raise HypothesisViolation(f"minimum degree {d} < {min_deg}")
    dist = all_pairs_distances(g)
    bad = validate_broadcast(g, f, dist)
    if bad:
        raise HypothesisViolation(f"not an independent broadcast: {bad[0].detail}")
    return dist


def _ball_layers(g: Graph, row, x: int, radii: Sequence[int]) -> set[int]:
    return {y for y in range(g.n) if row[y] in radii}


def witness_thm1(g: Graph, f: Broadcast) -> WitnessFamily:
    """I(x) for girth >= 6, min degree >= 3, following four value ranges."""
    dist = _check_hypotheses(g, f, 6, 3)
    entries = []
    for x in f.support:
        v = f[x]
        row = dist[x]
        path: tuple[int, ...] = ()
        if v <= 2:
            rule, s = "singleton", {x}
            bound = 1
        elif v <= 5:
            rule, s = "neighbourhood", set(g.adj[x])
            bound = 3
        elif v <= 13:
            rule, s = "distance_0_2", _ball_layers(g, row, x, (0, 2))
            bound = 7
        else:
            ell = (v - 9) // 4
            p = shortest_path_of_length(g, x, 2 * ell + 4, dist)
            s = _ball_layers(g, row, x, (0, 2))
            for i in range(1, ell + 1):
                s |= set(g.adj[p[2 * i + 3]]) - {p[2 * i + 2]}
            rule, path = "distance_0_2_path", tuple(p)
            bound = 7 + 2 * ell
        required = 1 if v == 2 else v // 2 + 1
        entries.append(WitnessEntry(x, v, rule, path, tuple(sorted(s)), max(bound, required)))
    return WitnessFamily("thm1", tuple(entries))


def witness_thm3i(g: Graph, f: Broadcast) -> WitnessFamily:
    """I(x) for girth >= 6, min degree >= 5."""
    dist = _check_hypotheses(g, f, 6, 5)
    entries = []
    for x in f.support:
        v = f[x]
        if v <= 2:
            entries.append(WitnessEntry(x, v, "singleton", (), (x,), 1))
            continue
        ell = (v + 1) // 4
        p = shortest_path_of_length(g, x, 2 * ell - 1, dist)
        s = set(g.adj[x])
        for i in range(2, ell + 1):
            s |= set(g.adj[p[2 * i - 2]]) - {p[2 * i - 3]}
        bound = max(5 + 4 * (ell - 1), v - 1)
        entries.append(WitnessEntry(x, v, "path_neighbourhoods", tuple(p),
                                    tuple(sorted(s)), bound))
    return WitnessFamily("thm3i", tuple(entries))


def witness_thm3ii(g: Graph, f: Broadcast, xi) -> WitnessFamily:
    """I(x) for girth >= 4 and min degree >= 10/xi, with 2 <= xi < 4."""
    xi = as_fraction(xi)
    if not 2 <= xi < 4:
        raise HypothesisViolation(f"xi={xi} outside [2, 4)")
    if g.n and min_degree(g) * xi < 10:
        raise HypothesisViolation(f"minimum degree {min_degree(g)} < 10/xi = {10 / xi}")
    dist = _check_hypotheses(g, f, 4, None)
    delta = min_degree(g)
    entries = []
    for x in f.support:
        v = f[x]
        required = math.ceil(Fraction(v) / xi)
        if v <= 2:
            entries.append(WitnessEntry(x, v, "singleton", (), (x,), max(1, required)))
            continue
        ell = (v + 5) // 8
        p = shortest_path_of_length(g, x, 4 * ell - 3, dist)
        s: set[int] = set()
        for i in range(1, ell + 1):
            s |= set(g.adj[p[4 * (i - 1)]])
        entries.append(WitnessEntry(x, v, "spaced_neighbourhoods", tuple(p),
                                    tuple(sorted(s)), max(delta * ell, required)))
    return WitnessFamily("thm3ii", tuple(entries), xi)


def build_witness(g: Graph, f: Broadcast, theorem: str, xi=None) -> WitnessFamily:
    if theorem == "thm1":
        return witness_thm1(g, f)
    if theorem == "thm3i":
        return witness_thm3i(g, f)
    if theorem == "thm3ii":
        if xi is None:
            raise ValueError("thm3ii needs xi")
        return witness_thm3ii(g, f, xi)
    raise ValueError(f"unknown theorem {theorem!r}")


def _required(theorem: str, value: int, xi: Fraction | None) -> int:
    if theorem == "thm1":
        return 1 if value == 2 else value // 2 + 1
    if theorem == "thm3i":
        return value if value == 1 else value - 1
    return math.ceil(Fraction(value) / xi)


def verify_witness(g: Graph, f: Broadcast, w: WitnessFamily) -> Certificate:
    """Re-check a witness family from scratch.

    Clauses, in order: each I(x) independent; pairwise disjoint; no edge
    between different I(x); per-entry size bounds; the aggregate bound of
    the family's theorem (plus the strictness / packing side conditions).
    """
    cert = Certificate(w.theorem, weight=f.weight)
    add = cert.checks.append
    support = f.support
    covered = [e.x for e in w.entries]
    add(Check("cover", "support", covered == support,
              f"entries {covered} vs support {support}"))

    for e in w.entries:
        bad = [(u, v) for u, v in itertools.combinations(e.vertices, 2) if g.has_edge(u, v)]
        add(Check("independent", f"I({e.x})", not bad,
                  f"edges inside: {bad}" if bad else f"{e.size} vertices, no edge"))

    clashes = []
    joins = []
    for a, b in itertools.combinations(w.entries, 2):
        common = set(a.vertices) & set(b.vertices)
        if common:
            clashes.append(f"I({a.x})&I({b.x})={sorted(common)}")
        sb = set(b.vertices)
        edge = next(((u, v) for u in a.vertices for v in g.adj[u] if v in sb), None)
        if edge is not None:
            joins.append(f"I({a.x})-I({b.x}) via {edge}")
    add(Check("disjoint", "pairs", not clashes, "; ".join(clashes) or "pairwise disjoint"))
    add(Check("non_adjacent", "pairs", not joins, "; ".join(joins) or "no joining edge"))

    for e in w.entries:
        need = max(e.bound, _required(w.theorem, e.value, w.xi))
        add(Check("entry_bound", f"I({e.x})", e.size >= need,
                  f"|I({e.x})|={e.size} >= {need} (f={e.value}, rule={e.rule})"))

    total = sum(e.size for e in w.entries)
    cert.union_size = len(w.union)
    weight = f.weight
    if w.theorem == "thm1":
        add(Check("aggregate", "sum", 2 * total >= weight,
                  f"sum|I|={total} >= weight/2 = {Fraction(weight, 2)}"))
        if any(f[x] != 2 for x in support):
            add(Check("strict", "sum", 2 * total > weight,
                      f"sum|I|={total} > weight/2 = {Fraction(weight, 2)}"))
    elif w.theorem == "thm3i":
        heavy = [x for x in support if f[x] != 1]
        add(Check("aggregate", "sum", total >= weight - len(heavy),
                  f"sum|I|={total} >= weight - |X\\X1| = {weight - len(heavy)}"))
        add(Check("packing", "X\\X1", is_packing(g, heavy),
                  f"{len(heavy)} vertices with f >= 2 pairwise at distance >= 3"))
    else:
        add(Check("aggregate", "sum", w.xi * total >= weight,
                  f"sum|I|={total} >= weight/xi = {Fraction(weight) / w.xi}"))
    return cert


def strict_improvement_check(g: Graph, packing: Sequence[int]) -> tuple[int, ...] | None:
    """Swap one packing vertex for two nonadjacent neighbours of it.

    Returns the resulting independent set of size |X| + 1, or None when no
    vertex of X has two nonadjacent neighbours.
    """
    xs = sorted(set(packing))
    if not is_packing(g, xs):
        raise GraphError("input is not a packing")
    for x in xs:
        for y, z in itertools.combinations(g.adj[x], 2):
            if g.has_edge(y, z):
                continue
            out = tuple(sorted((set(xs) - {x}) | {y, z}))
            # a packing keeps neighbours of x away from the rest of X
            if all(not g.has_edge(a, b) for a, b in itertools.combinations(out, 2)):
                return out
    return None
