import random
from fractions import Fraction

import pytest

from edgeorient import (
    Counters,
    LayerBuckets,
    SearchState,
    SolverConfig,
    batched_bfs,
    brute_force_dstar,
    build_graph,
    eager_layer_count,
    eager_path_search,
    exhaustive_dfs,
    fast_improve,
    find_improving_path,
    initial_orientation,
    max_out_degree,
    naive_dfs,
    orientation_from_arcs,
    solve_rpo,
    validate,
)
from conftest import bowtie, complete, cycle, random_graph, star, triangle


class TestFindImprovingPath:
    def test_triangle_early_check_hit(self):
        g = triangle()
        o = initial_orientation(g)  # out-degrees [0, 1, 2]
        state = SearchState(g.n)
        state.new_epoch()
        p = find_improving_path(g, o, 2, 0, state, 2)
        assert p is not None
        assert p.vertices == (2, 0)

    def test_directed_cycle_has_no_target(self):
        g = cycle(3)
        o = orientation_from_arcs(g, [(0, 1), (1, 2), (2, 0)])
        state = SearchState(g.n)
        state.new_epoch()
        assert find_improving_path(g, o, 0, -1, state, 1) is None

    def test_peak_vertices_not_traversed_as_interior(self):
        # a=0, b=1, p=2, q=3, t=4; arcs chosen so d(a)=d(p)=2 (the peak)
        # and the only route from a to the degree-0 vertex t runs through p.
        g = build_graph([(0, 2), (0, 1), (1, 2), (2, 4), (2, 3), (3, 0)])
        o = orientation_from_arcs(
            g, [(0, 2), (0, 1), (1, 2), (2, 4), (2, 3), (3, 0)]
        )
        assert o.out_degree == [2, 1, 2, 1, 0]
        state = SearchState(g.n)
        state.new_epoch()
        assert find_improving_path(g, o, 0, 0, state, 2) is None
        # the path exists once peak-skipping is off
        state.new_epoch()
        p = find_improving_path(g, o, 0, 0, state, -1)
        assert p is not None and p.target == 4

    def test_shared_visited_within_epoch(self):
        # one epoch: a vertex marked by an earlier search is never expanded
        # again, so total expansions across searches stay below n + sources.
        rng = random.Random(1)
        g = random_graph(rng, 40, 0.2)
        o = initial_orientation(g)
        fast_improve(g, o)
        k = max_out_degree(o)
        state = SearchState(g.n)
        state.new_epoch()
        before = state.vertices_visited
        sources = [v for v in range(g.n) if o.out_degree[v] == k]
        for v in sources:
            find_improving_path(g, o, v, -1, state, k)  # unsatisfiable bound
        assert state.vertices_visited - before <= g.n


class TestExhaustiveDfs:
    @pytest.mark.parametrize(
        "graph,expected",
        [(triangle(), 1), (complete(4), 2), (bowtie(), 2)],
    )
    def test_small_instances(self, graph, expected):
        o = initial_orientation(graph)
        assert exhaustive_dfs(graph, o) == expected
        validate(graph, o)

    def test_flip_count_recorded(self):
        g = star(5)
        o = orientation_from_arcs(g, [(0, i) for i in range(1, 6)])
        counters = Counters()
        k = exhaustive_dfs(g, o, counters=counters)
        assert k == 1
        assert 1 <= counters.paths_flipped <= g.m


class TestBatchedBfs:
    def test_star_improves_round_by_round(self):
        g = star(5)
        o = orientation_from_arcs(g, [(0, i) for i in range(1, 6)])
        assert batched_bfs(g, o) == 1
        validate(g, o)

    def test_triangle(self):
        g = triangle()
        o = initial_orientation(g)
        assert batched_bfs(g, o) == 1

    def test_directed_cycle_terminates_immediately(self):
        g = cycle(4)
        o = orientation_from_arcs(g, [(i, (i + 1) % 4) for i in range(4)])
        counters = Counters()
        assert batched_bfs(g, o, counters=counters) == 1
        assert counters.paths_flipped == 0


class TestEagerLayerCount:
    def test_dynamic_formula(self):
        cfg = SolverConfig()
        assert eager_layer_count(5, Fraction(5, 6), cfg) == 2

    def test_clamped_to_one(self):
        cfg = SolverConfig()
        assert eager_layer_count(4, 4, cfg) == 1

    def test_fixed_value_wins(self):
        cfg = SolverConfig(eager_layers=5)
        assert eager_layer_count(4, 0.5, cfg) == 5
        assert eager_layer_count(100, 99, cfg) == 5

    def test_round_half_up(self):
        cfg = SolverConfig()
        # sqrt(6.25) = 2.5 rounds up to 3
        assert eager_layer_count(7, 0.75, cfg) == 3


class TestEagerPathSearch:
    def test_balanced_star_is_noop(self):
        g = star(5)
        o = orientation_from_arcs(g, [(0, i) for i in range(1, 6)])
        fast_improve(g, o)
        assert max_out_degree(o) == 1
        before = bytes(o.direction)
        eager_path_search(g, o, SolverConfig())
        assert bytes(o.direction) == before

    def test_never_increases_peak(self):
        rng = random.Random(17)
        for _ in range(40):
            g = random_graph(rng, rng.randint(3, 16), rng.random())
            o = initial_orientation(g)
            fast_improve(g, o)
            before = max_out_degree(o)
            counters = Counters()
            eager_path_search(g, o, SolverConfig(), counters=counters)
            validate(g, o)
            assert max_out_degree(o) <= before

    def test_single_layer_degenerate(self):
        # all vertices share one out-degree: only the peak layer exists
        g = cycle(5)
        o = orientation_from_arcs(g, [(i, (i + 1) % 5) for i in range(5)])
        eager_path_search(g, o, SolverConfig())
        assert max_out_degree(o) == 1


class TestLayerBuckets:
    def test_buckets_group_by_degree(self):
        g = triangle()
        o = initial_orientation(g)
        buckets = LayerBuckets(o)
        assert buckets.bucket(0) == [0]
        assert buckets.bucket(1) == [1]
        assert buckets.bucket(2) == [2]
        assert buckets.peak() == [2]
        assert buckets.bucket(7) == []


class TestSolverConfig:
    def test_defaults(self):
        cfg = SolverConfig()
        assert cfg.density_threshold == 10.0
        assert cfg.eager_layers is None
        assert cfg.eager_size == 100
        assert cfg.finisher_threshold == 10

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            SolverConfig(eager_size=0)
        with pytest.raises(ValueError):
            SolverConfig(density_threshold=-1)


class TestSolveRpo:
    def test_triangle(self):
        _, report = solve_rpo(triangle())
        assert report.dstar == 1

    def test_k5_two_pseudoforests(self):
        o, report = solve_rpo(complete(5))
        assert report.dstar == 2
        validate(complete(5), o)

    def test_report_phases_and_counters(self):
        _, report = solve_rpo(complete(6), instance="k6")
        assert report.instance == "k6"
        assert all(v >= 0 for v in report.timings_ms.values())
        assert report.counters["paths_flipped"] <= 15
        assert report.certificate["present"]

    def test_engines_agree_on_randoms(self):
        rng = random.Random(29)
        for _ in range(40):
            g = random_graph(rng, rng.randint(2, 12), rng.choice([0.2, 0.5, 0.8]))
            want = brute_force_dstar(g)
            _, report = solve_rpo(g)
            assert report.dstar == want
            o = initial_orientation(g)
            fast_improve(g, o)
            assert naive_dfs(g, o) == want
