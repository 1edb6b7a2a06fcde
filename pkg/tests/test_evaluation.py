import numpy as np
import pytest

import clearmatch.evaluation as evaluation_mod
from clearmatch import (
    LayoutMismatch,
    LiftingSet,
    SynthConfig,
    ViewLayout,
    build_aggregate,
    check_cycle_consistency,
    check_distinctness,
    clique_metrics,
    edge_metrics,
    eigengap_estimate,
    gen_ground_truth,
    inject_mismatch,
    monte_carlo,
    to_pairwise,
)
from clearmatch.evaluation import (
    TRIAL_COLUMNS,
    TrialFailure,
    TrialResult,
    means_csv,
    trials_csv,
)
from conftest import random_layout, random_lifting


def two_cliques_with_one_bad_edge(k: int = 10):
    """Ground truth: two k-cliques over k two-item views; output adds a
    single wrong edge joining the clusters."""
    layout = ViewLayout((2,) * k)
    lift = LiftingSet(layout, 2, ((0, 1),) * k)
    truth = to_pairwise(lift)
    bad = (0, 0, 1, 1)
    output = build_aggregate(
        layout,
        [
            (*layout.locate(a), *layout.locate(b))
            for a, b in truth.edges
        ]
        + [bad],
    )
    return output, truth


class TestSynthConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SynthConfig(0, 3, 0.5, 0.1)
        with pytest.raises(ValueError):
            SynthConfig(5, 0, 0.5, 0.1)
        with pytest.raises(ValueError):
            SynthConfig(5, 3, 0.0, 0.1)
        with pytest.raises(ValueError):
            SynthConfig(5, 3, 1.2, 0.1)
        with pytest.raises(ValueError):
            SynthConfig(5, 3, 0.5, -0.1)


class TestGenGroundTruth:
    def test_full_ratio_gives_disjoint_n_cliques(self):
        lift, agg = gen_ground_truth(SynthConfig(4, 5, 1.0, 0.0, seed=1))
        assert agg.layout.sizes == (4,) * 5
        assert all(sorted(row) == [0, 1, 2, 3] for row in lift.assignment)
        # 4 disjoint cliques across 5 views
        assert len(agg.edges) == 4 * (5 * 4 // 2)
        assert check_cycle_consistency(agg)

    def test_view_sizes_and_distinctness(self):
        lift, agg = gen_ground_truth(SynthConfig(100, 10, 0.5, 0.0, seed=2))
        assert agg.layout.sizes == (50,) * 10
        assert check_distinctness(agg).ok()
        assert all(list(row) == sorted(row) for row in lift.assignment)

    def test_ratio_rounding_is_exact(self):
        # 0.1 * 30 must give 3 per view despite float representation
        _, agg = gen_ground_truth(SynthConfig(30, 3, 0.1, 0.0, seed=3))
        assert agg.layout.sizes == (3, 3, 3)

    def test_determinism(self):
        a = gen_ground_truth(SynthConfig(20, 6, 0.5, 0.0, seed=9))
        b = gen_ground_truth(SynthConfig(20, 6, 0.5, 0.0, seed=9))
        c = gen_ground_truth(SynthConfig(20, 6, 0.5, 0.0, seed=10))
        assert a[0] == b[0]
        assert a[1].edges == b[1].edges
        assert a[1].edges != c[1].edges


class TestInjectMismatch:
    def test_rate_zero_identity(self):
        _, truth = gen_ground_truth(SynthConfig(10, 5, 0.6, 0.0, seed=4))
        assert inject_mismatch(truth, 0.0, seed=1) is truth

    def test_preserves_count_symmetry_distinctness(self):
        rng = np.random.default_rng(61)
        for _ in range(40):
            layout = random_layout(rng, max_views=6, max_items=6)
            m = max(layout.sizes) + int(rng.integers(0, 3))
            truth = to_pairwise(random_lifting(rng, layout, m))
            rate = float(rng.uniform(0.0, 1.0))
            noisy = inject_mismatch(truth, rate, seed=int(rng.integers(1 << 31)))
            assert len(noisy.edges) == len(truth.edges)
            assert check_distinctness(noisy).ok()

    def test_two_by_two_full_rate_swaps_the_block(self):
        layout = ViewLayout((2, 2))
        truth = build_aggregate(layout, [(0, 0, 1, 0), (0, 1, 1, 1)])
        noisy = inject_mismatch(truth, 1.0, seed=5)
        assert noisy.edge_set == {(0, 3), (1, 2)}

    def test_noise_actually_changes_edges(self):
        _, truth = gen_ground_truth(SynthConfig(20, 8, 0.5, 0.0, seed=6))
        noisy = inject_mismatch(truth, 0.3, seed=7)
        assert noisy.edges != truth.edges

    def test_degree_preserving_keeps_degrees(self):
        rng = np.random.default_rng(62)
        for _ in range(20):
            layout = ViewLayout(tuple(int(rng.integers(4, 7)) for _ in range(5)))
            m = max(layout.sizes)
            truth = to_pairwise(random_lifting(rng, layout, m))
            noisy = inject_mismatch(
                truth, 0.2, seed=int(rng.integers(1 << 31)), degree_preserving=True
            )
            assert np.array_equal(noisy.degrees, truth.degrees)

    def test_single_item_views_skip_gracefully(self):
        layout = ViewLayout((1, 1, 1))
        truth = build_aggregate(layout, [(0, 0, 1, 0), (1, 0, 2, 0), (0, 0, 2, 0)])
        noisy = inject_mismatch(truth, 1.0, seed=8)
        # no view offers a wrong counterpart, so nothing can flip
        assert noisy.edges == truth.edges

    def test_determinism(self):
        _, truth = gen_ground_truth(SynthConfig(15, 6, 0.5, 0.0, seed=10))
        assert (
            inject_mismatch(truth, 0.4, seed=3).edges
            == inject_mismatch(truth, 0.4, seed=3).edges
        )

    def test_rate_validation(self):
        _, truth = gen_ground_truth(SynthConfig(5, 3, 1.0, 0.0, seed=1))
        with pytest.raises(ValueError):
            inject_mismatch(truth, 1.5, seed=1)


class TestEdgeMetrics:
    def test_perfect(self, seven):
        assert edge_metrics(seven, seven) == (1.0, 1.0, 1.0)

    def test_empty_output_convention(self, seven):
        empty = build_aggregate(seven.layout, [])
        assert edge_metrics(empty, seven) == (1.0, 0.0, 0.0)

    def test_empty_truth_convention(self, seven):
        empty = build_aggregate(seven.layout, [])
        p, r, f1 = edge_metrics(seven, empty)
        assert (p, r) == (0.0, 1.0)
        assert f1 == 0.0

    def test_spurious_edges_arithmetic(self):
        layout = ViewLayout((2, 2, 2))
        truth = to_pairwise(LiftingSet(layout, 2, ((0, 1),) * 3))
        extra = [(0, 0, 1, 1), (1, 0, 2, 1)]
        output = build_aggregate(
            layout,
            [(*layout.locate(a), *layout.locate(b)) for a, b in truth.edges] + extra,
        )
        p, r, _ = edge_metrics(output, truth)
        assert p == pytest.approx(len(truth.edges) / (len(truth.edges) + 2))
        assert r == 1.0

    def test_layout_mismatch(self, seven):
        with pytest.raises(LayoutMismatch):
            edge_metrics(seven, build_aggregate(ViewLayout((1, 1)), []))


class TestCliqueMetrics:
    def test_equals_edge_metrics_when_consistent(self):
        rng = np.random.default_rng(63)
        for _ in range(20):
            layout = random_layout(rng)
            m = max(layout.sizes) + 1
            output = to_pairwise(random_lifting(rng, layout, m))
            truth = to_pairwise(random_lifting(rng, layout, m))
            assert clique_metrics(output, truth) == edge_metrics(output, truth)

    def test_two_clique_bridge_hand_count(self):
        output, truth = two_cliques_with_one_bad_edge(k=10)
        p, r, _ = edge_metrics(output, truth)
        assert p == pytest.approx(90 / 91)
        assert r == 1.0
        cp, cr, _ = clique_metrics(output, truth)
        assert cp == pytest.approx(90 / 190)
        assert cr == 1.0

    def test_closure_precision_never_exceeds_edge_precision_here(self):
        output, truth = two_cliques_with_one_bad_edge(k=4)
        assert clique_metrics(output, truth)[0] < edge_metrics(output, truth)[0]


class TestEigengap:
    def test_disjoint_cliques_recover_m(self):
        for m, views in [(2, 4), (3, 5), (5, 3)]:
            layout = ViewLayout((m,) * views)
            agg = to_pairwise(
                LiftingSet(layout, m, (tuple(range(m)),) * views)
            )
            assert eigengap_estimate(agg) == m

    def test_empty_graph_returns_one(self):
        assert eigengap_estimate(build_aggregate(ViewLayout((2, 2)), [])) == 1

    def test_single_vertex(self):
        assert eigengap_estimate(build_aggregate(ViewLayout((1,)), [])) == 1


class TestMonteCarlo:
    def test_noiseless_cell(self):
        results = monte_carlo([SynthConfig(6, 4, 1.0, 0.0)], trials=1)
        (res,) = results
        assert isinstance(res, TrialResult)
        assert res.report.f1 == 1.0
        assert res.report.consistent and res.report.distinct
        assert res.report.m_hat == 6
        assert res.input_f1 == 1.0

    def test_thread_count_invariance(self):
        grid = [SynthConfig(8, 4, 0.5, 0.2), SynthConfig(8, 6, 0.5, 0.1)]
        serial = monte_carlo(grid, trials=3, base_seed=17, threads=1)
        threaded = monte_carlo(grid, trials=3, base_seed=17, threads=4)

        def strip(res):
            return [
                (r.cell_index, r.trial, r.report.f1, r.report.m_hat, r.input_f1)
                for r in res
            ]

        assert strip(serial) == strip(threaded)

    def test_rerun_determinism(self):
        grid = [SynthConfig(8, 5, 0.5, 0.25)]
        a = monte_carlo(grid, trials=4, base_seed=3)
        b = monte_carlo(grid, trials=4, base_seed=3)
        assert [r.report.f1 for r in a] == [r.report.f1 for r in b]
        assert [r.report.eigengap_m for r in a] == [r.report.eigengap_m for r in b]

    def test_failures_collected_per_trial(self, monkeypatch):
        calls = {"n": 0}
        real_clear = evaluation_mod.clear

        def flaky(agg, mode="optimal"):
            calls["n"] += 1
            if calls["n"] == 1:
                raise RuntimeError("boom")
            return real_clear(agg, mode=mode)

        monkeypatch.setattr(evaluation_mod, "clear", flaky)
        results = monte_carlo([SynthConfig(6, 4, 1.0, 0.0)], trials=2)
        assert isinstance(results[0], TrialFailure)
        assert "boom" in results[0].message
        assert isinstance(results[1], TrialResult)

    def test_fail_fast_mode(self, monkeypatch):
        monkeypatch.setattr(
            evaluation_mod,
            "clear",
            lambda agg, mode="optimal": (_ for _ in ()).throw(RuntimeError("dead")),
        )
        with pytest.raises(RuntimeError):
            monte_carlo(
                [SynthConfig(6, 4, 1.0, 0.0)], trials=1, collect_failures=False
            )

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            monte_carlo([SynthConfig(6, 4, 1.0, 0.0)], trials=0)
        with pytest.raises(ValueError):
            monte_carlo([SynthConfig(6, 4, 1.0, 0.0)], trials=1, threads=0)


class TestCsvEmission:
    def test_trials_csv_layout(self):
        results = monte_carlo([SynthConfig(6, 4, 1.0, 0.0)], trials=2)
        text = trials_csv(results)
        lines = text.strip().split("\n")
        assert lines[0] == ",".join(TRIAL_COLUMNS)
        assert len(lines) == 3
        first = lines[1].split(",")
        assert first[:4] == ["4", "1.0", "0.0", "0"]
        assert first[4:7] == ["1.0", "1.0", "1.0"]

    def test_means_csv_aggregates_per_cell(self):
        grid = [SynthConfig(6, 4, 1.0, 0.0), SynthConfig(6, 5, 1.0, 0.0)]
        results = monte_carlo(grid, trials=3)
        text = means_csv(results)
        lines = text.strip().split("\n")
        assert len(lines) == 3
        for line in lines[1:]:
            cells = line.split(",")
            assert cells[3] == "3"  # trial column holds the count
            assert cells[6] == "1.0"  # mean f1

    def test_failed_trials_left_out_of_rows(self, monkeypatch):
        monkeypatch.setattr(
            evaluation_mod,
            "clear",
            lambda agg, mode="optimal": (_ for _ in ()).throw(RuntimeError("nope")),
        )
        results = monte_carlo([SynthConfig(6, 4, 1.0, 0.0)], trials=2)
        assert trials_csv(results).strip().split("\n") == [",".join(TRIAL_COLUMNS)]
        assert means_csv(results).strip().split("\n") == [",".join(TRIAL_COLUMNS)]
