import numpy as np
import pytest

from gbig.attribution import (
    Attribution,
    BasePointSpec,
    LinearSurrogate,
    base_point_features,
    explanation_mask,
    gb_ig,
    gb_ig_multi_base,
    integrated_gradients,
    path_information,
    path_probability,
    path_set_entropy,
    select_base_point,
)
from gbig.errors import IsolatedNodeError
from gbig.gcn import GcnClassifier, init_weights
from gbig.graphs import Graph, k_hop_nodes, max_distance_set, shortest_paths
from oracles import entropy_of_path_set, random_graph


def star5():
    return Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


def path3():
    return Graph(3, [(0, 1), (1, 2)])


class TestBasePointFeatures:
    def test_zero(self, rng):
        X = rng.standard_normal((4, 3))
        B = base_point_features(BasePointSpec("zero"), X, {0, 2})
        assert np.array_equal(B, np.zeros((2, 3)))

    def test_gaussian_sigma_zero_is_identity(self, rng):
        X = rng.standard_normal((4, 3))
        B = base_point_features(BasePointSpec("gaussian", sigma=0.0), X, {1, 3})
        assert np.array_equal(B, X[[1, 3]])

    def test_uniform_degenerate_ranges(self, rng):
        X = rng.standard_normal((4, 3))
        ranges = np.array([[2.0, 2.0], [-1.0, -1.0], [0.5, 0.5]])
        spec = BasePointSpec("uniform", feature_ranges=ranges)
        B = base_point_features(spec, X, {0, 1, 2})
        assert B == pytest.approx(np.tile([2.0, -1.0, 0.5], (3, 1)))

    def test_uniform_requires_ranges(self, rng):
        X = rng.standard_normal((4, 3))
        with pytest.raises(ValueError):
            base_point_features(BasePointSpec("uniform"), X, {0})

    def test_uniform_draws_within_ranges_and_seeded(self, rng):
        X = rng.standard_normal((4, 3))
        ranges = np.array([[-1.0, 1.0], [0.0, 2.0], [5.0, 6.0]])
        spec = BasePointSpec("uniform", seed=5, feature_ranges=ranges)
        B = base_point_features(spec, X, {0, 1, 2, 3})
        assert np.all(B >= ranges[:, 0]) and np.all(B <= ranges[:, 1])
        assert np.array_equal(B, base_point_features(spec, X, {0, 1, 2, 3}))

    def test_unknown_strategy_and_negative_sigma(self):
        with pytest.raises(ValueError):
            BasePointSpec("mirror")
        with pytest.raises(ValueError):
            BasePointSpec("gaussian", sigma=-1.0)

    def test_empty_scope(self, rng):
        with pytest.raises(ValueError):
            base_point_features(BasePointSpec("zero"), rng.standard_normal((2, 2)), set())


class TestIntegratedGradients:
    def test_baseline_equal_to_input_gives_zero(self, rng):
        g = path3()
        X = rng.standard_normal((3, 4))
        model = LinearSurrogate(rng.standard_normal((3, 4)))
        attr = integrated_gradients(model, g, X, 1, X[[0, 1, 2]])
        assert np.array_equal(attr.values, np.zeros_like(X))

    def test_constant_model_gives_zero(self, rng):
        g = path3()
        X = rng.standard_normal((3, 4))
        model = GcnClassifier.from_weights(
            g, [np.zeros((4, 8)), np.zeros((8, 8)), np.zeros((8, 2))]
        )
        attr = integrated_gradients(model, g, X, 0, np.zeros((3, 4)))
        assert np.array_equal(attr.values, np.zeros_like(X))

    @pytest.mark.parametrize("steps", [1, 7, 64])
    def test_linear_completeness_exact(self, rng, steps):
        g = star5()
        X = rng.standard_normal((5, 3))
        coef = rng.standard_normal((5, 3))
        model = LinearSurrogate(coef)
        baseline = np.zeros((5, 3))
        attr = integrated_gradients(model, g, X, 0, baseline, steps=steps)
        expected = model.predict_proba(X)[0, 0] - model.predict_proba(baseline)[0, 0]
        assert attr.values.sum() == pytest.approx(expected, abs=1e-9)

    def test_baseline_shape_checked(self, rng):
        g = path3()
        X = rng.standard_normal((3, 4))
        with pytest.raises(ValueError):
            integrated_gradients(LinearSurrogate(X), g, X, 0, np.zeros((2, 4)))

    def test_values_confined_to_receptive_field(self, rng):
        g = Graph(6, [(i, i + 1) for i in range(5)])
        X = rng.standard_normal((6, 3))
        model = LinearSurrogate(rng.standard_normal((6, 3)))
        attr = integrated_gradients(model, g, X, 0, np.zeros((4, 3)))
        assert np.all(attr.values[[4, 5]] == 0)


class TestPathInformation:
    def test_k2_edge(self):
        assert path_information(Graph(2, [(0, 1)]), (0, 1)) == 0.0

    def test_path_graph(self):
        assert path_information(path3(), (0, 1, 2)) == pytest.approx(1.0)

    def test_star_edge(self):
        assert path_information(star5(), (0, 1)) == pytest.approx(2.0)


class TestPathProbability:
    def test_k2_edge(self):
        assert path_probability(Graph(2, [(0, 1)]), (0, 1)) == 1.0

    def test_path_graph(self):
        assert path_probability(path3(), (0, 1, 2)) == pytest.approx(0.5)

    def test_consistent_with_information(self, rng):
        for _ in range(20):
            g = random_graph(rng, 10, 0.4)
            reachable = sorted(k_hop_nodes(g, 0, 10) - {0})
            if not reachable:
                continue
            for p in shortest_paths(g, 0, reachable[-1], budget=64, truncate=True):
                assert -np.log2(path_probability(g, p)) == pytest.approx(
                    path_information(g, p), abs=1e-12
                )


class TestPathSetEntropy:
    def test_empty(self):
        assert path_set_entropy(path3(), []) == 0.0

    def test_single_path(self):
        assert path_set_entropy(path3(), [(0, 1, 2)]) == pytest.approx(0.5)

    def test_diamond(self):
        g = Graph(4, [(0, 2), (2, 1), (0, 3), (3, 1)])
        paths = shortest_paths(g, 0, 1)
        # two symmetric three-node paths with degree 2 everywhere
        assert path_set_entropy(g, paths) == pytest.approx(0.75)


class TestSelectBasePoint:
    def test_unique_candidate(self):
        assert select_base_point(path3(), 0) == 2

    def test_star_leaf_ties_break_low(self):
        assert select_base_point(star5(), 1) == 2

    def test_isolated(self):
        g = Graph(3, [(0, 1)])
        with pytest.raises(IsolatedNodeError):
            select_base_point(g, 2)

    def test_crafted_two_candidate_graph_matches_brute_force(self):
        # Nodes 6 and 7 both sit two hops from 0 but reach it through
        # differently-branched middles, so their entropies differ.
        g = Graph(8, [(0, 1), (0, 2), (0, 3), (1, 6), (2, 6), (3, 7), (3, 4), (4, 5)])
        cands = max_distance_set(g, 0)
        best = max(
            sorted(cands),
            key=lambda b: (entropy_of_path_set(g, shortest_paths(g, b, 0)), -b),
        )
        assert select_base_point(g, 0) == best

    @pytest.mark.parametrize("seed", range(10))
    def test_random_graphs_match_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(rng, 10, 0.3)
        try:
            got = select_base_point(g, 0, budget=4096)
        except IsolatedNodeError:
            return
        cands = sorted(max_distance_set(g, 0))
        entropies = [
            entropy_of_path_set(g, shortest_paths(g, b, 0, budget=4096)) for b in cands
        ]
        assert got == cands[int(np.argmax(entropies))]
        assert got in max_distance_set(g, 0)


class TestGbIg:
    def test_identical_features_give_zero(self, rng):
        g = star5()
        X = np.tile(rng.standard_normal(3), (5, 1))
        model = LinearSurrogate(rng.standard_normal((5, 3)))
        attr = gb_ig(model, g, X, 1, 2)
        assert np.array_equal(attr.values, np.zeros_like(X))

    @pytest.mark.parametrize("mode", ["target-substitution", "path-node"])
    def test_adjacent_single_step(self, rng, mode):
        g = Graph(2, [(0, 1)])
        X = rng.standard_normal((2, 3))
        coef = rng.standard_normal((2, 3))
        model = LinearSurrogate(coef)
        attr = gb_ig(model, g, X, 1, 0, mode=mode)
        row = coef[1] if mode == "target-substitution" else coef[0]
        assert attr.values[1] == pytest.approx((X[1] - X[0]) * row, abs=1e-12)
        assert np.all(attr.values[0] == 0)

    def test_linear_telescoping_per_path(self, rng):
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        X = rng.standard_normal((5, 3))
        coef = rng.standard_normal((5, 3))
        model = LinearSurrogate(coef)
        attr = gb_ig(model, g, X, 4, 0, weighting="unweighted")
        # target-substitution gradients are the target slot's row, so the
        # step sum telescopes to the slot difference between endpoints
        expected = float(np.dot(X[4] - X[0], coef[4]))
        assert attr.base["per_path_sums"] == pytest.approx([expected], abs=1e-9)
        assert attr.values.sum() == pytest.approx(expected, abs=1e-9)

    def test_per_path_weighting_divides_by_edge_count(self, rng):
        g = Graph(4, [(0, 2), (2, 1), (0, 3), (3, 1)])
        X = rng.standard_normal((4, 3))
        model = LinearSurrogate(rng.standard_normal((4, 3)))
        unweighted = gb_ig(model, g, X, 1, 0, weighting="unweighted")
        weighted = gb_ig(model, g, X, 1, 0, weighting="per-path")
        # both shortest paths have two edges
        assert weighted.values == pytest.approx(unweighted.values / 2, abs=1e-12)

    def test_invalid_mode_and_weighting(self, rng):
        g = path3()
        X = rng.standard_normal((3, 2))
        model = LinearSurrogate(np.ones((3, 2)))
        with pytest.raises(ValueError):
            gb_ig(model, g, X, 2, 0, mode="midpoint")
        with pytest.raises(ValueError):
            gb_ig(model, g, X, 2, 0, weighting="quadratic")

    def test_deterministic(self, small_bundle, trained_model):
        b = small_bundle
        t = b.masks["test"][0]
        base = select_base_point(b.graph, t, truncate=True)
        a1 = gb_ig(trained_model, b.graph, b.features, t, base, truncate=True)
        a2 = gb_ig(trained_model, b.graph, b.features, t, base, truncate=True)
        assert np.array_equal(a1.values, a2.values)


class TestGbIgMultiBase:
    def test_single_base_equals_gb_ig(self, rng):
        g = path3()
        X = rng.standard_normal((3, 2))
        model = LinearSurrogate(rng.standard_normal((3, 2)))
        multi = gb_ig_multi_base(model, g, X, 0)
        single = gb_ig(model, g, X, 0, 2)
        assert np.array_equal(multi.values, single.values)

    def test_star_center_sums_single_edges(self, rng):
        g = star5()
        X = rng.standard_normal((5, 3))
        coef = rng.standard_normal((5, 3))
        model = LinearSurrogate(coef)
        attr = gb_ig_multi_base(model, g, X, 0)
        expected = np.zeros_like(X)
        for leaf in range(1, 5):
            expected[0] += (X[0] - X[leaf]) * coef[0]
        assert attr.values == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_equals_sum_over_bases(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(rng, 9, 0.35)
        X = rng.standard_normal((9, 3))
        model = LinearSurrogate(rng.standard_normal((9, 3)))
        try:
            multi = gb_ig_multi_base(model, g, X, 0, budget=4096)
        except IsolatedNodeError:
            return
        total = np.zeros_like(X)
        for b in sorted(max_distance_set(g, 0)):
            total += gb_ig(model, g, X, 0, b, budget=4096).values
        assert multi.values == pytest.approx(total, abs=1e-12)


class TestExplanationMask:
    def _attr(self, g, values, target=0):
        return Attribution(target=target, values=np.asarray(values, float),
                           method="test")

    def test_single_nonzero_node(self):
        attr = self._attr(path3(), [[0.0], [2.5], [0.0]])
        mask = explanation_mask(attr, path3())
        assert mask.nodes == {1}

    def test_all_equal_keeps_everything(self):
        attr = self._attr(path3(), [[1.0], [1.0], [1.0]])
        mask = explanation_mask(attr, path3())
        assert mask.nodes == {0, 1, 2}
        assert all(s == 1.0 for s in mask.scores.values())

    def test_hand_min_max(self):
        # L1 scores 10, 9, 1 normalize to 1, 8/9, 0
        attr = self._attr(path3(), [[10.0], [-9.0], [1.0]])
        mask = explanation_mask(attr, path3(), threshold=0.8)
        assert mask.nodes == {0, 1}
        assert mask.scores[1] == pytest.approx(8 / 9)
        assert mask.scores[2] == 0.0

    def test_scores_cover_receptive_field_only(self, rng):
        g = Graph(6, [(i, i + 1) for i in range(5)])
        attr = self._attr(g, rng.standard_normal((6, 2)))
        mask = explanation_mask(attr, g)
        assert set(mask.scores) == {0, 1, 2, 3}
        assert mask.nodes <= {0, 1, 2, 3}

    def test_threshold_validated(self):
        attr = self._attr(path3(), np.ones((3, 1)))
        for bad in (0.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                explanation_mask(attr, path3(), threshold=bad)
