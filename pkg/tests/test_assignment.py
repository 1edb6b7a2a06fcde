import itertools

import numpy as np
import pytest

from clearmatch import ShapeError, greedy_sort_assign, hungarian


def brute_force(cost: np.ndarray) -> tuple[tuple[int, ...], float]:
    """Exhaustive minimum; among exact ties, the first (lexicographically
    smallest) injection wins because permutations() is ordered."""
    r, c = cost.shape
    best: tuple[int, ...] | None = None
    best_cost = np.inf
    for perm in itertools.permutations(range(c), r):
        total = sum(cost[i, perm[i]] for i in range(r))
        if total < best_cost:
            best_cost, best = total, perm
    return best if best is not None else (), float(best_cost if r else 0.0)


class TestHungarian:
    def test_worked_example_cost_block(self):
        cost = np.array([[0.0, 2.28], [2.28, 0.0]])
        result = hungarian(cost)
        assert result.row_to_col == (0, 1)
        assert result.cost == 0.0

    def test_unique_zeros_chosen(self):
        cost = np.array([[5.0, 0.0, 9.0], [0.0, 7.0, 8.0]])
        result = hungarian(cost)
        assert result.row_to_col == (1, 0)
        assert result.cost == 0.0

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(41)
        for _ in range(120):
            r = int(rng.integers(1, 6))
            c = int(rng.integers(r, 7))
            cost = rng.uniform(0.0, 10.0, size=(r, c))
            got = hungarian(cost)
            _, want_cost = brute_force(cost)
            assert got.cost == pytest.approx(want_cost, abs=1e-9)
            assert sorted(set(got.row_to_col)) == sorted(got.row_to_col)

    def test_lexicographic_tie_canonicalization(self):
        # small integer costs force many exactly-optimal assignments
        rng = np.random.default_rng(42)
        for _ in range(200):
            r = int(rng.integers(1, 5))
            c = int(rng.integers(r, 6))
            cost = rng.integers(0, 3, size=(r, c)).astype(float)
            got = hungarian(cost)
            want, want_cost = brute_force(cost)
            assert got.cost == want_cost
            assert got.row_to_col == want

    def test_extreme_magnitudes(self):
        rng = np.random.default_rng(43)
        for _ in range(40):
            cost = rng.uniform(0, 1, size=(3, 4)) * 10.0 ** rng.integers(0, 13)
            got = hungarian(cost)
            _, want_cost = brute_force(cost)
            assert got.cost == pytest.approx(want_cost, rel=1e-12)

    def test_square_permutation_costs(self):
        cost = np.array([[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]])
        got = hungarian(cost)
        _, want_cost = brute_force(cost)
        assert got.cost == want_cost

    def test_empty_rows(self):
        got = hungarian(np.empty((0, 4)))
        assert got.row_to_col == () and got.cost == 0.0

    def test_deterministic(self):
        rng = np.random.default_rng(44)
        cost = rng.uniform(size=(5, 7))
        assert hungarian(cost) == hungarian(cost)

    def test_shape_and_value_errors(self):
        with pytest.raises(ShapeError):
            hungarian(np.zeros((3, 2)))
        with pytest.raises(ShapeError):
            hungarian(np.zeros(4))
        with pytest.raises(ValueError):
            hungarian(np.array([[1.0, np.nan]]))
        with pytest.raises(ValueError):
            hungarian(np.array([[1.0, np.inf]]))


class TestGreedySortAssign:
    def test_worked_example_agrees_with_optimal(self):
        cost = np.array([[0.0, 2.28], [2.28, 0.0]])
        assert greedy_sort_assign(cost).row_to_col == (0, 1)

    def test_documented_suboptimality(self):
        cost = np.array([[1.0, 2.0], [2.0, 100.0]])
        greedy = greedy_sort_assign(cost)
        optimal = hungarian(cost)
        assert greedy.row_to_col == (0, 1)
        assert greedy.cost == 101.0
        assert optimal.row_to_col == (1, 0)
        assert optimal.cost == 4.0

    def test_row_major_tie_scan(self):
        # all-equal costs: scan order alone decides -> identity assignment
        cost = np.ones((3, 5))
        assert greedy_sort_assign(cost).row_to_col == (0, 1, 2)

    def test_never_beats_optimal_and_stays_injective(self):
        rng = np.random.default_rng(45)
        for _ in range(300):
            r = int(rng.integers(1, 7))
            c = int(rng.integers(r, 9))
            cost = rng.uniform(size=(r, c))
            greedy = greedy_sort_assign(cost)
            assert len(set(greedy.row_to_col)) == r
            assert greedy.cost >= hungarian(cost).cost - 1e-12

    def test_cost_accumulates_selected_entries(self):
        rng = np.random.default_rng(46)
        cost = rng.uniform(size=(4, 6))
        got = greedy_sort_assign(cost)
        assert got.cost == pytest.approx(
            sum(cost[i, j] for i, j in enumerate(got.row_to_col))
        )

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            greedy_sort_assign(np.zeros((3, 2)))
