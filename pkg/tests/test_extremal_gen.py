import itertools
import math
import random
from fractions import Fraction

import networkx as nx
import pytest

from broadcast_indep.exact_solvers import (
    Budget,
    alpha_b_exact,
    is_packing,
    max_independent_set,
    max_packing,
    validate_broadcast,
)
from broadcast_indep.extremal_gen import (
    CSV_COLUMNS,
    ConstructionOptions,
    StarSystem,
    add_bridges,
    break_short_cycles,
    center_broadcast,
    count_short_cycles,
    default_epsilon,
    glue_stars,
    is_independent_transversal,
    max_independent_transversal,
    repair_min_degree,
    run_construction,
    run_with_retries,
    sample_host,
    structural_violations,
    sweep_csv,
    sweep_summary,
)
from broadcast_indep.graph_core import (
    Graph,
    complete_graph,
    cycle_graph,
    girth,
    is_connected,
    min_degree,
    parse_graph6,
    path_graph,
)

# out-of-regime parameters that give small non-degenerate G*
SMALL = dict(n=30, k=3, epsilon=0.8)
LOOSE = ConstructionOptions(alpha_node_limit=100_000, enforce_epsilon=False)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


# ------------------------------------------------------------------ host

def test_host_edge_probability():
    assert 100 ** (0.05 - 1) == pytest.approx(0.012589, abs=1e-6)
    h = sample_host(2, 0.5, 1)
    p = 2 ** -0.5
    assert (h.m == 1) == (random.Random(1).random() < p)
    assert sample_host(2, 0.5, 1) == h


def test_host_density_within_three_standard_errors():
    n, eps, runs = 50, 0.1, 10_000
    p = n ** (eps - 1)
    pairs = n * (n - 1) // 2
    edges = sum(sample_host(n, eps, s).m for s in range(runs))
    se = math.sqrt(p * (1 - p) / (pairs * runs))
    assert abs(edges / (pairs * runs) - p) < 3 * se


def test_host_rejects_bad_epsilon():
    for eps in (0, 1, -0.2, 1.5):
        with pytest.raises(ValueError):
            sample_host(10, eps, 0)


# ------------------------------------------------------------------ glue

def test_glue_single_edge():
    s = glue_stars(Graph.from_edges(2, [(0, 1)]), 3, 0)
    assert (s.graph.n, s.graph.m) == (8, 7)


def test_glue_edge_count_with_collisions():
    rng = random.Random(3)
    for seed in range(30):
        n, k = rng.randint(2, 12), rng.randint(1, 4)
        h = sample_host(n, 0.9, seed)
        s = glue_stars(h, k, seed)
        assert s.graph.m == n * k + h.m - len(s.collisions)
        # every glued pair joins leaves of the two host endpoints
        for i, j, xi, xj in s.glue:
            assert s.star_of(xi) == i and s.star_of(xj) == j
            assert xi % s.block and xj % s.block


def test_glue_path_host_gives_three_stars_two_links():
    s = glue_stars(path_graph(3), 3, 5)
    g = s.graph
    assert g.n == 12
    for i in range(3):
        assert g.degree(s.center(i)) == 3
    links = [(u, v) for u, v in g.edges() if s.star_of(u) != s.star_of(v)]
    assert sorted((s.star_of(u), s.star_of(v)) for u, v in links) == [(0, 1), (1, 2)]


def test_leaf_sets_and_centres_partition_vertices():
    s = glue_stars(sample_host(10, 0.8, 2), 4, 2)
    seen = []
    for i in range(10):
        seen += [s.center(i), *s.leaves(i)]
    assert sorted(seen) == list(range(s.graph.n))


# ----------------------------------------------------------- short cycles

def test_acyclic_host_breaks_nothing():
    s = glue_stars(path_graph(6), 4, 0)
    assert break_short_cycles(s, 4)[1] == []


def test_triangle_host_loses_smallest_vertex():
    s = glue_stars(cycle_graph(3), 4, 0)
    s2, removed = break_short_cycles(s, 4)
    assert removed == [0]
    sub, _ = s2.host.induced(sorted(s2.alive))
    assert girth(sub) is None and sub.m == 1


def test_short_cycle_count_matches_networkx():
    rng = random.Random(9)
    for _ in range(30):
        h = sample_host(rng.randint(3, 10), 0.85, rng.randint(0, 999))
        ref = sum(1 for c in nx.simple_cycles(to_nx(h), length_bound=4))
        assert count_short_cycles(h, 5) == ref


def test_few_hosts_removed_in_sparse_regime():
    n, k, eps = 200, 4, 0.05
    small = 0
    for seed in range(100):
        s = glue_stars(sample_host(n, eps, seed), k, seed)
        _, removed = break_short_cycles(s, k)
        small += len(removed) < n / 2
    assert small >= 90


def test_surviving_host_has_girth_at_least_k():
    for seed in range(20):
        s = glue_stars(sample_host(25, 0.9, seed), 5, seed)
        s2, _ = break_short_cycles(s, 5)
        sub, _ = s2.host.induced(sorted(s2.alive))
        assert girth(sub) is None or girth(sub) >= 5


# ------------------------------------------------------------------ repair

def _dense_system(k=3):
    """Host K_7 with each leaf carrying two glue edges: minimum degree k."""
    host = complete_graph(7)
    glue = []
    for i, j in host.edges():
        slot_i = [v for v in host.adj[i]].index(j) // 2
        slot_j = [v for v in host.adj[j]].index(i) // 2
        glue.append((i, j, i * (k + 1) + 1 + slot_i, j * (k + 1) + 1 + slot_j))
    return StarSystem.build(host, k, glue)


def test_repair_nothing_when_degrees_suffice():
    s = _dense_system()
    assert min_degree(s.graph) == 3
    s2, steps = repair_min_degree(s, 3)
    assert steps == [] and s2.alive == s.alive


def test_repair_isolated_star():
    s = StarSystem.build(Graph.from_edges(1, []), 3, [])
    s2, steps = repair_min_degree(s, 3)
    assert [(st.x, st.star, st.neighbours) for st in steps] == [(1, 0, ())]
    assert s2.alive == frozenset()


def test_repair_steps_form_independent_transversal():
    for seed in range(40):
        s = glue_stars(sample_host(40, 0.8, seed), 3, seed)
        s, _ = break_short_cycles(s, 3)
        s2, steps = repair_min_degree(s, 3)
        xs = [st.x for st in steps]
        assert is_independent_transversal(s, xs)
        assert all(len(st.neighbours) < 3 for st in steps)
        sub, _ = s2.surviving_graph()
        if sub.n:
            assert min_degree(sub) >= 3


# ----------------------------------------------------------------- bridges

def test_bridges_count():
    connected = StarSystem.build(Graph.from_edges(2, [(0, 1)]), 3, [(0, 1, 1, 5)])
    assert add_bridges(connected).bridges == ()
    two = StarSystem.build(Graph.from_edges(2, []), 3, [])
    assert len(add_bridges(two).bridges) == 1
    many = StarSystem.build(Graph.from_edges(5, []), 3, [])
    b = add_bridges(many)
    assert len(b.bridges) == 4 and is_connected(b.graph)


def test_bridges_join_leaves_only():
    b = add_bridges(StarSystem.build(Graph.from_edges(4, []), 3, []))
    assert all(u % 4 and v % 4 for u, v in b.bridges)


# ------------------------------------------------------- centre broadcast

def test_two_glued_stars_centre_broadcast():
    s = StarSystem.build(Graph.from_edges(2, [(0, 1)]), 3, [(0, 1, 1, 5)])
    b = add_bridges(s)
    f = center_broadcast(b)
    assert f.values[0] == f.values[4] == 2 and f.weight == 4
    assert validate_broadcast(b.graph, f) == []


def test_single_star_rejected():
    b = add_bridges(StarSystem.build(Graph.from_edges(1, []), 3, []))
    with pytest.raises(ValueError):
        center_broadcast(b)


def test_centre_broadcast_below_exact_optimum_on_small_systems():
    rng = random.Random(12)
    for _ in range(25):
        n = rng.randint(2, 4)
        s = glue_stars(sample_host(n, 0.9, rng.randint(0, 99)), 3, rng.randint(0, 99))
        b = add_bridges(s)
        f = center_broadcast(b)
        assert validate_broadcast(b.graph, f) == []
        res = alpha_b_exact(b.graph)
        assert not res.time_budget_hit and res.optimum >= f.weight


# ------------------------------------------------------------------ beta

def test_beta_examples():
    one = StarSystem.build(Graph.from_edges(1, []), 3, [])
    assert max_independent_transversal(one).optimum == 1
    two = StarSystem.build(Graph.from_edges(2, [(0, 1)]), 3, [(0, 1, 1, 5)])
    res = max_independent_transversal(two)
    assert res.optimum == 2 and is_independent_transversal(two, res.witness)
    glue = [(0, 1, a, b) for a in (1, 2, 3) for b in (5, 6, 7)]
    full = StarSystem.build(Graph.from_edges(2, [(0, 1)]), 3, glue)
    assert full.graph.m == 6 + 9
    assert max_independent_transversal(full).optimum == 1


def test_beta_matches_bruteforce():
    rng = random.Random(21)
    for _ in range(30):
        n = rng.randint(2, 5)
        s = glue_stars(sample_host(n, 0.95, rng.randint(0, 99)), 3, rng.randint(0, 99))
        best = 0
        for choice in itertools.product(*[[None, *s.leaves(i)] for i in range(n)]):
            vs = [v for v in choice if v is not None]
            if is_independent_transversal(s, vs):
                best = max(best, len(vs))
        assert max_independent_transversal(s).optimum == best


# ------------------------------------------------------------- full runs

def test_default_epsilon_inside_regime():
    for k in (3, 4, 5):
        assert 0 < default_epsilon(k) < Fraction(1, k * k)


def test_epsilon_regime_enforced():
    with pytest.raises(ValueError):
        run_construction(30, 3, 0.2, 0)
    with pytest.raises(ValueError):
        run_construction(30, 2, 0.01, 0)


@pytest.fixture(scope="module")
def small_runs():
    return [run_construction(seed=s, options=LOOSE, **SMALL) for s in range(12)]


def test_small_runs_include_non_degenerate(small_runs):
    assert sum(not r.degenerate for r in small_runs) >= 2


def test_structural_guarantees_on_generated_graphs(small_runs):
    for r in small_runs:
        assert structural_violations(r) == []
        if r.degenerate:
            continue
        g = parse_graph6(r.graph6)
        assert is_connected(g) and min_degree(g) >= r.k
        assert girth(g) >= r.k
        centres = [t * (r.k + 1) for t in range(r.n_ell)]
        assert is_packing(g, centres)
        assert r.broadcast_weight == 2 * r.n_ell


def test_alpha_is_exact_and_ratio_at_least_one(small_runs):
    for r in small_runs:
        if r.degenerate:
            continue
        assert not r.alpha_is_bound
        assert r.achieved_ratio >= 1
        g = parse_graph6(r.graph6)
        assert max_independent_set(g, lexmin=False).optimum == r.alpha


def test_alpha_bound_used_when_budget_runs_out():
    opts = ConstructionOptions(alpha_node_limit=1, enforce_epsilon=False)
    runs = [run_construction(seed=s, options=opts, **SMALL) for s in range(12)]
    for r in runs:
        if not r.degenerate:
            assert r.alpha_is_bound
            exact = run_construction(seed=r.seed, options=LOOSE, **SMALL)
            assert r.alpha >= exact.alpha


def test_degenerate_runs_are_reported():
    r = run_construction(30, 3, float(default_epsilon(3)), 0)
    assert r.degenerate and r.degenerate_stage == "repair"
    assert r.accounting_holds()


def test_runs_are_deterministic():
    a = run_construction(seed=6, options=LOOSE, **SMALL).to_json()
    b = run_construction(seed=6, options=LOOSE, **SMALL).to_json()
    assert a == b


def test_retry_mode_walks_seeds():
    reps = run_with_retries(30, 3, 0.8, 0, 5, LOOSE)
    assert [r.seed for r in reps] == list(range(len(reps)))
    assert all(r.degenerate for r in reps[:-1])


def test_sweep_csv_and_summary(small_runs):
    text = sweep_csv(small_runs)
    lines = text.splitlines()
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert len(lines) == 1 + len(small_runs)
    assert all(line.startswith("1,") for line in lines[1:])
    summ = sweep_summary(small_runs)
    grp = summ["groups"][0]
    assert grp["runs"] == 12 and grp["structural_violations"] == 0
    assert grp["reference_ratio"] == pytest.approx(4 / 3)
    ratios = [r.achieved_ratio for r in small_runs if r.achieved_ratio is not None]
    assert grp["max_ratio"] == max(ratios)
    assert sweep_csv([]).splitlines() == [",".join(CSV_COLUMNS)]


def test_packing_number_at_least_surviving_stars(small_runs):
    for r in small_runs:
        if r.degenerate:
            continue
        g = parse_graph6(r.graph6)
        res = max_packing(g, Budget(time_ms=None, node_limit=200_000))
        assert res.optimum >= r.n_ell


def test_exact_alpha_b_on_a_small_generated_graph():
    opts = ConstructionOptions(enforce_epsilon=False, alpha_b_max_n=48, alpha_b_node_limit=500_000)
    r = run_construction(14, 3, 0.95, 25, opts)
    assert not r.degenerate and r.vertices == 40
    assert r.alpha_b_exact and r.alpha_b >= r.broadcast_weight == 20
    assert structural_violations(r) == []
