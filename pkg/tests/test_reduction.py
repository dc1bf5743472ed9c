import math
import random
from fractions import Fraction

from edgeorient import (
    SolverConfig,
    brute_force_dstar,
    build_graph,
    charikar_peel,
    exhaustive_dfs,
    fast_improve,
    initial_orientation,
    max_out_degree,
    maybe_reduce,
    merge_orientation,
    reduce,
    validate,
)
from conftest import bowtie, complete, random_graph, star


class TestCharikarPeel:
    def test_k4_densest_is_full_graph(self):
        rho, order = charikar_peel(complete(4))
        assert rho == Fraction(3, 2)
        assert sorted(order) == [0, 1, 2, 3]

    def test_star_density_only_decreases(self):
        rho, _ = charikar_peel(star(5))
        assert rho == Fraction(5, 6)

    def test_empty(self):
        rho, order = charikar_peel(build_graph([]))
        assert rho == 0
        assert order == []

    def test_min_degree_ties_break_by_lowest_id(self):
        # all vertices of a 4-cycle have degree 2
        g = build_graph([(0, 1), (1, 2), (2, 3), (0, 3)])
        _, order = charikar_peel(g)
        assert order[0] == 0

    def test_queue_operation_bound(self):
        rng = random.Random(5)
        for _ in range(20):
            g = random_graph(rng, rng.randint(2, 25), rng.random())
            stats = {}
            charikar_peel(g, stats)
            assert stats["queue_ops"] <= 2 * g.m + g.n


class TestReduce:
    def test_star_fully_removed(self):
        g = star(5)
        out = reduce(g)
        assert out.lower_bound == 1
        assert out.residual.m == 0 and out.residual.n == 0
        assert len(out.removed) == 6
        # each leaf forced to orient its single edge outward
        forced_counts = {v: len(edges) for v, edges in out.removed}
        assert all(c <= out.lower_bound for c in forced_counts.values())
        merged = merge_orientation(out, initial_orientation(out.residual))
        validate(g, merged)
        assert max_out_degree(merged) == 1

    def test_k4_nothing_removed(self):
        out = reduce(complete(4))
        assert out.lower_bound == 2
        assert out.removed == []
        assert out.residual.m == 6 and out.residual.n == 4

    def test_bowtie_fully_removed_at_dstar(self):
        g = bowtie()
        out = reduce(g)
        assert out.lower_bound == 2
        assert out.residual.m == 0
        max_forced = max(len(edges) for _, edges in out.removed)
        assert max_forced == 2 == brute_force_dstar(g)

    def test_forced_plus_residual_partition_edges(self):
        rng = random.Random(11)
        for _ in range(30):
            g = random_graph(rng, rng.randint(2, 14), rng.random())
            out = reduce(g)
            forced = [e for _, edges in out.removed for e in edges]
            assert sorted(forced + list(out.edge_map)) == list(range(g.m))
            for v, edges in out.removed:
                assert len(edges) <= out.lower_bound
                for e in edges:
                    assert v in g.endpoints(e)


class TestMaybeReduce:
    def test_sparse_graph_passes_through(self):
        # road-network-like density
        g = build_graph([(i, i + 1) for i in range(50)])
        out = maybe_reduce(g, SolverConfig())
        assert out.is_pass_through
        assert out.lower_bound == 0
        assert out.residual is g

    def test_dense_graph_reduces(self):
        g = complete(40)  # m/n = 19.5 > 10
        out = maybe_reduce(g, SolverConfig())
        assert out.lower_bound == 20

    def test_threshold_zero_always_reduces(self):
        g = build_graph([(0, 1)])
        out = maybe_reduce(g, SolverConfig(density_threshold=0.0))
        assert not out.is_pass_through or out.removed


class TestSafety:
    def test_lower_bound_never_exceeds_dstar(self, atlas_connected):
        for g in atlas_connected:
            rho, _ = charikar_peel(g)
            assert math.ceil(rho) <= brute_force_dstar(g)

    def test_residual_solve_plus_merge_matches_oracle(self):
        rng = random.Random(23)
        for _ in range(60):
            g = random_graph(rng, rng.randint(2, 12), rng.choice([0.2, 0.5, 0.8]))
            out = reduce(g)
            o = initial_orientation(out.residual)
            fast_improve(out.residual, o)
            exhaustive_dfs(out.residual, o)
            merged = merge_orientation(out, o)
            validate(g, merged)
            assert max_out_degree(merged) == brute_force_dstar(g)
