"""The rectification pipeline: noisy associations in, consistent out.

Given an aggregate association the solver runs five steps:

1. eigendecompose the symmetrized normalized Laplacian per connected
   component (:mod:`.spectral`);
2. estimate the universe size: count eigenvalues strictly below 1/2,
   then raise the count to the largest view so projection stays
   feasible;
3. embed every item as its row in the matrix of eigenvectors for the
   smallest eigenvalues, rows normalized to unit length;
4. pick one pivot row per universe item: start from the first usable
   row, then repeatedly take the row least aligned with the pivots so
   far (smallest sum of absolute inner products, ties to the smallest
   row index);
5. per view, assign items to pivots by squared embedding distance -
   optimally (Hungarian) or greedily - which yields universe labels
   that are cycle consistent and distinct by construction.

The returned objective is the degree-normalized overlap between the
rectified matches and the input.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .assignment import greedy_sort_assign, hungarian
from .associations import (
    AggregateAssociation,
    LiftingSet,
    ViewLayout,
    normalized_objective,
    to_pairwise,
)
from .errors import InsufficientNonZeroRows
from .spectral import Spectrum, component_spectrum

__all__ = [
    "Embedding",
    "PivotSet",
    "Diagnostics",
    "Solution",
    "estimate_universe_size",
    "embed",
    "select_pivots",
    "project",
    "clear",
    "postprocess_min_cluster",
]

# Rows with pre-normalization norm at or below this are treated as
# zero: they carry no spectral information (their component contributed
# no selected eigenvector) and are excluded from pivot candidacy.
ZERO_ROW_TOL = 1e-12


@dataclass(frozen=True)
class Embedding:
    """Row-normalized spectral coordinates, one row per global vertex."""

    rows: np.ndarray
    zero_rows: tuple[int, ...]

    @property
    def width(self) -> int:
        return self.rows.shape[1]


@dataclass(frozen=True)
class PivotSet:
    """Chosen pivot rows: indices into the embedding, and their vectors."""

    indices: tuple[int, ...]
    vectors: np.ndarray


@dataclass(frozen=True)
class Diagnostics:
    """Solver-internal quantities kept for inspection and reporting."""

    eigenvalues: tuple[float, ...]
    m_tilde: int
    m_hat: int
    pivot_indices: tuple[int, ...]


@dataclass(frozen=True)
class Solution:
    """A consistent association plus how the solver arrived at it."""

    universe_size: int
    lifting: LiftingSet
    pairwise: AggregateAssociation
    objective: float
    diagnostics: Diagnostics
    source: AggregateAssociation


def estimate_universe_size(
    spectrum: Spectrum, layout: ViewLayout
) -> tuple[int, int]:
    """(m_hat, m_tilde): usable universe size and the raw spectral count.

    m_tilde counts eigenvalues strictly below 1/2.  Every component
    contributes at least its zero eigenvalue, so m_tilde is at least
    the number of components.  m_hat = max(m_tilde, largest view),
    which keeps one label per item available in every view.
    """
    m_tilde = int(np.count_nonzero(spectrum.eigenvalues < 0.5))
    m_hat = max(m_tilde, max(layout.sizes))
    return m_hat, m_tilde


def embed(spectrum: Spectrum, m_hat: int) -> Embedding:
    """Rows of the first ``m_hat`` eigenvector columns, unit-normalized.

    Rows of norm <= ZERO_ROW_TOL are recorded and left as zero; they
    appear only when some component contributes no selected column
    (impossible for the pipeline's own m_hat, possible under manual
    universe-size overrides).
    """
    total = spectrum.eigenvectors.shape[0]
    if not 0 <= m_hat <= total:
        raise ValueError(f"universe size {m_hat} not in [0, {total}]")
    rows = spectrum.eigenvectors[:, :m_hat].copy()
    norms = np.linalg.norm(rows, axis=1)
    zero = norms <= ZERO_ROW_TOL
    keep = ~zero
    rows[keep] /= norms[keep, None]
    return Embedding(rows=rows, zero_rows=tuple(np.flatnonzero(zero)))


def select_pivots(embedding: Embedding, m_hat: int) -> PivotSet:
    """Greedy pivot choice: one maximally novel row per universe item.

    The first usable row seeds the set; each next pivot minimizes the
    summed |cosine| against the pivots chosen so far, with exact ties
    going to the smallest row index.  Zero rows are never candidates.
    """
    rows = embedding.rows
    total = rows.shape[0]
    usable = np.ones(total, dtype=bool)
    usable[list(embedding.zero_rows)] = False
    if int(usable.sum()) < m_hat:
        raise InsufficientNonZeroRows(
            f"{int(usable.sum())} usable rows but {m_hat} pivots requested"
        )
    if m_hat == 0:
        return PivotSet((), np.empty((0, rows.shape[1])))

    score = np.zeros(total)
    blocked = np.where(usable, 0.0, np.inf)
    indices: list[int] = []
    first = int(np.flatnonzero(usable)[0])
    pick = first
    while True:
        indices.append(pick)
        if len(indices) == m_hat:
            break
        score = score + np.abs(rows @ rows[pick])
        blocked[pick] = np.inf
        ranked = score + blocked
        best = float(np.min(ranked))
        # rows equal by graph symmetry tie only up to rounding noise;
        # the smallest-index rule must see through that
        pick = int(np.flatnonzero(ranked <= best + 1e-9 * (1.0 + best))[0])
    return PivotSet(tuple(indices), rows[indices].copy())


def project(
    embedding: Embedding,
    pivots: PivotSet,
    layout: ViewLayout,
    mode: str = "optimal",
) -> LiftingSet:
    """Per view, assign items to pivots by squared embedding distance.

    mode "optimal" solves each view's assignment exactly; "greedy" uses
    the sorted scan.  Each view gets distinct labels, so the result is
    a valid lifting whatever the costs look like.
    """
    if mode not in ("optimal", "greedy"):
        raise ValueError(f"unknown projection mode {mode!r}")
    solve = hungarian if mode == "optimal" else greedy_sort_assign
    piv = pivots.vectors
    labels: list[tuple[int, ...]] = []
    for view in range(layout.n_views):
        verts = layout.vertices_of(view)
        rows = embedding.rows[verts.start : verts.stop]
        diff = rows[:, None, :] - piv[None, :, :]
        costs = np.einsum("ijk,ijk->ij", diff, diff)
        labels.append(solve(costs).row_to_col)
    return LiftingSet(layout, len(pivots.indices), tuple(labels))


def clear(
    agg: AggregateAssociation,
    mode: str = "optimal",
    override_m: int | None = None,
) -> Solution:
    """Rectify an aggregate association into a consistent solution.

    ``override_m`` replaces the estimated universe size (it must lie
    between the largest view and the total item count), which supports
    sweeping candidate sizes around the estimate.
    """
    spectrum = component_spectrum(agg)
    layout = agg.layout
    m_hat, m_tilde = estimate_universe_size(spectrum, layout)
    m_use = m_hat
    if override_m is not None:
        lo, hi = max(layout.sizes), layout.total
        if not lo <= override_m <= hi:
            raise ValueError(
                f"override_m={override_m} outside feasible range [{lo}, {hi}]"
            )
        m_use = override_m
    embedding = embed(spectrum, m_use)
    pivots = select_pivots(embedding, m_use)
    lifting = project(embedding, pivots, layout, mode)
    pairwise = to_pairwise(lifting)
    return Solution(
        universe_size=m_use,
        lifting=lifting,
        pairwise=pairwise,
        objective=normalized_objective(pairwise, agg),
        diagnostics=Diagnostics(
            eigenvalues=tuple(float(x) for x in spectrum.eigenvalues),
            m_tilde=m_tilde,
            m_hat=m_hat,
            pivot_indices=pivots.indices,
        ),
        source=agg,
    )


def postprocess_min_cluster(solution: Solution, min_size: int) -> Solution:
    """Dissolve small label classes into fresh singleton labels.

    Labels observed fewer than ``min_size`` times are retired; each of
    their members gets a brand-new label appended after the existing
    range (in global vertex order), so surviving labels keep their ids.
    The objective is recomputed against the original input.
    """
    if min_size < 1:
        raise ValueError("min_size must be at least 1")
    lifting = solution.lifting
    counts = np.zeros(lifting.universe_size, dtype=np.int64)
    for row in lifting.assignment:
        for uid in row:
            counts[uid] += 1
    dissolve = {uid for uid in range(lifting.universe_size)
                if 0 < counts[uid] < min_size}
    if not dissolve:
        return solution
    next_id = lifting.universe_size
    new_rows: list[tuple[int, ...]] = []
    for row in lifting.assignment:
        fixed = []
        for uid in row:
            if uid in dissolve:
                fixed.append(next_id)
                next_id += 1
            else:
                fixed.append(uid)
        new_rows.append(tuple(fixed))
    new_lifting = LiftingSet(lifting.layout, next_id, tuple(new_rows))
    new_pairwise = to_pairwise(new_lifting)
    return replace(
        solution,
        universe_size=next_id,
        lifting=new_lifting,
        pairwise=new_pairwise,
        objective=normalized_objective(new_pairwise, solution.source),
    )
