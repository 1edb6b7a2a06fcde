"""Shared fixtures: the seven-vertex walkthrough graph and random input
generators used by the fuzz suites."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from clearmatch import AggregateAssociation, LiftingSet, ViewLayout, build_aggregate

# Six views (the first with two items), twelve cross-view matches.  This
# is the package's canonical small example: one ambiguous item in view 1
# matched into two different groups, so the graph is not a cluster graph.
SEVEN_LAYOUT = ViewLayout((2, 1, 1, 1, 1, 1))
SEVEN_QUADS = (
    (0, 0, 1, 0),
    (0, 1, 2, 0),
    (0, 1, 3, 0),
    (0, 1, 4, 0),
    (0, 1, 5, 0),
    (1, 0, 2, 0),
    (2, 0, 3, 0),
    (2, 0, 4, 0),
    (2, 0, 5, 0),
    (3, 0, 4, 0),
    (3, 0, 5, 0),
    (4, 0, 5, 0),
)


@pytest.fixture
def seven() -> AggregateAssociation:
    return build_aggregate(SEVEN_LAYOUT, SEVEN_QUADS)


def random_layout(rng: np.random.Generator, max_views=6, max_items=5) -> ViewLayout:
    n = int(rng.integers(2, max_views + 1))
    return ViewLayout(tuple(int(rng.integers(1, max_items + 1)) for _ in range(n)))


def random_block_aggregate(
    rng: np.random.Generator, layout: ViewLayout
) -> AggregateAssociation:
    """Arbitrary valid input: every view-pair block is a random partial
    permutation, with no consistency across blocks."""
    quads = []
    for i in range(layout.n_views):
        for j in range(i + 1, layout.n_views):
            mi, mj = layout.sizes[i], layout.sizes[j]
            k = int(rng.integers(0, min(mi, mj) + 1))
            if k == 0:
                continue
            rows = rng.choice(mi, size=k, replace=False)
            cols = rng.choice(mj, size=k, replace=False)
            quads += [(i, int(a), j, int(b)) for a, b in zip(rows, cols)]
    return build_aggregate(layout, quads)


def random_lifting(
    rng: np.random.Generator, layout: ViewLayout, universe_size: int
) -> LiftingSet:
    rows = tuple(
        tuple(int(x) for x in rng.choice(universe_size, size=s, replace=False))
        for s in layout.sizes
    )
    return LiftingSet(layout, universe_size, rows)


# reference embedding rows for the seven-vertex graph (one column
# convention; comparisons are up to signed column permutation)
REFERENCE_U = np.array(
    [
        [-0.94, 0.34],
        [0.47, 0.88],
        [-0.88, 0.48],
        [0.07, 0.99],
        [0.47, 0.88],
        [0.47, 0.88],
        [0.47, 0.88],
    ]
)


def assert_same_up_to_signed_column_permutation(got, want, atol):
    k = got.shape[1]
    assert want.shape[1] == k
    for perm in itertools.permutations(range(k)):
        for signs in itertools.product((1.0, -1.0), repeat=k):
            cand = got[:, list(perm)] * np.array(signs)
            if np.allclose(cand, want, atol=atol):
                return
    raise AssertionError(f"no signed column permutation matches:\n{got}\nvs\n{want}")
