"""Cycle-consistent multi-view data association via graph spectra.

Noisy pairwise matchings between views (images, maps, frames) rarely
agree with each other: A matched to B and B to C need not imply A
matched to C.  This package repairs that.  It reads the aggregate
matching as a weighted graph, estimates the number of distinct
underlying items from the spectrum of a damped normalized Laplacian,
embeds every observation into that many dimensions, and re-assigns each
view's items to a common universe of labels.  The result is cycle
consistent by construction — it is induced by a labeling — and never
associates two items of the same view with each other.

    >>> from clearmatch import build_aggregate, clear
    >>> agg = build_aggregate(ViewLayout((2, 1)), [(0, 0, 1, 0)])
    >>> clear(agg).universe_size
    2

The top-level pipeline is :func:`clear`; the pieces it is built from
(component spectra, universe-size estimation, pivot selection, and the
assignment step) are exported for reuse, as are the evaluation-protocol
helpers behind the ``clearmatch`` command-line tool.
"""

from .associations import (
    AggregateAssociation,
    ClusterPartition,
    LiftingSet,
    PermutationBlockReport,
    ViewLayout,
    build_aggregate,
    check_cycle_consistency,
    check_distinctness,
    cluster_partition,
    normalized_objective,
    to_pairwise,
    transitive_closure,
)
from .assignment import Assignment, greedy_sort_assign, hungarian
from .errors import (
    ConvergenceFailure,
    IndexOutOfRange,
    InsufficientNonZeroRows,
    LayoutMismatch,
    SameViewEdge,
    ShapeError,
)
from .evaluation import (
    EvalReport,
    SynthConfig,
    clique_metrics,
    edge_metrics,
    eigengap_estimate,
    gen_ground_truth,
    inject_mismatch,
    monte_carlo,
)
from .pipeline import (
    Diagnostics,
    Embedding,
    PivotSet,
    Solution,
    clear,
    embed,
    estimate_universe_size,
    postprocess_min_cluster,
    project,
    select_pivots,
)
from .spectral import (
    ComponentDecomposition,
    Spectrum,
    component_spectrum,
    connected_components,
    normalized_laplacian,
    symmetric_eig,
    symmetrize,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateAssociation",
    "Assignment",
    "ClusterPartition",
    "ComponentDecomposition",
    "ConvergenceFailure",
    "Diagnostics",
    "EvalReport",
    "Embedding",
    "IndexOutOfRange",
    "InsufficientNonZeroRows",
    "LayoutMismatch",
    "LiftingSet",
    "PermutationBlockReport",
    "PivotSet",
    "SameViewEdge",
    "ShapeError",
    "Solution",
    "Spectrum",
    "SynthConfig",
    "ViewLayout",
    "build_aggregate",
    "check_cycle_consistency",
    "check_distinctness",
    "clear",
    "clique_metrics",
    "cluster_partition",
    "component_spectrum",
    "connected_components",
    "edge_metrics",
    "eigengap_estimate",
    "embed",
    "estimate_universe_size",
    "gen_ground_truth",
    "greedy_sort_assign",
    "hungarian",
    "inject_mismatch",
    "monte_carlo",
    "normalized_laplacian",
    "normalized_objective",
    "postprocess_min_cluster",
    "project",
    "select_pivots",
    "symmetric_eig",
    "symmetrize",
    "to_pairwise",
    "transitive_closure",
    "__version__",
]
