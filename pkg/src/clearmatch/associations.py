"""Multi-view association data model.

A problem instance is a set of views (images, scans, robot maps), each
observing some items, plus pairwise matches between items of different
views.  Everything downstream works on two representations:

``AggregateAssociation``
    The matches as an undirected graph over all items of all views.
    Stored sparsely as canonical unordered vertex pairs; the dense
    block-matrix form (identity diagonal blocks, one 0/1 block per view
    pair) is available via :meth:`AggregateAssociation.densify`.

``LiftingSet``
    A cycle-consistent solution: every item is labelled with a universe
    id, no two items of one view sharing a label.  Pairwise matches are
    recovered by joining items with equal labels (:func:`to_pairwise`),
    which by construction yields a disjoint union of cliques.

Vertices are indexed globally: views are concatenated in order, so view
``i`` with ``sizes[i]`` items occupies one contiguous index range.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, LayoutMismatch, SameViewEdge

__all__ = [
    "ViewLayout",
    "AggregateAssociation",
    "PermutationBlockReport",
    "LiftingSet",
    "ClusterPartition",
    "build_aggregate",
    "check_distinctness",
    "check_cycle_consistency",
    "transitive_closure",
    "to_pairwise",
    "cluster_partition",
    "normalized_objective",
]


@dataclass(frozen=True)
class ViewLayout:
    """Item counts per view, plus the global indexing they induce."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) < 1:
            raise ValueError("a layout needs at least one view")
        if any(s < 0 for s in sizes):
            raise ValueError("view sizes must be non-negative")
        object.__setattr__(self, "sizes", sizes)
        offsets = (0, *itertools.accumulate(sizes))
        object.__setattr__(self, "_offsets", offsets)

    @property
    def n_views(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        """Total number of items across all views."""
        return self._offsets[-1]

    def offset(self, view: int) -> int:
        return self._offsets[view]

    def vertex(self, view: int, item: int) -> int:
        """Global vertex id of ``item`` in ``view``."""
        if not 0 <= view < self.n_views:
            raise IndexOutOfRange(f"view {view} not in [0, {self.n_views})")
        if not 0 <= item < self.sizes[view]:
            raise IndexOutOfRange(
                f"item {item} not in [0, {self.sizes[view]}) for view {view}"
            )
        return self._offsets[view] + item

    def locate(self, vertex: int) -> tuple[int, int]:
        """Inverse of :meth:`vertex`: global id back to (view, item)."""
        if not 0 <= vertex < self.total:
            raise IndexOutOfRange(f"vertex {vertex} not in [0, {self.total})")
        view = bisect_right(self._offsets, vertex) - 1
        return view, vertex - self._offsets[view]

    def view_of(self, vertex: int) -> int:
        return self.locate(vertex)[0]

    def vertices_of(self, view: int) -> range:
        if not 0 <= view < self.n_views:
            raise IndexOutOfRange(f"view {view} not in [0, {self.n_views})")
        return range(self._offsets[view], self._offsets[view + 1])


@dataclass(frozen=True)
class AggregateAssociation:
    """Cross-view matches as an undirected graph over global vertices.

    ``edges`` is canonical: each pair sorted ascending, the tuple sorted
    lexicographically, no duplicates, never joining two items of one
    view.  Construction validates all of this, so any held instance is
    structurally sound (distinctness of blocks is a separate, weaker
    property checked by :func:`check_distinctness`).
    """

    layout: ViewLayout
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        total = self.layout.total
        views = self._view_lookup()
        prev = None
        for a, b in self.edges:
            if not (0 <= a < b < total):
                raise IndexOutOfRange(f"edge ({a}, {b}) outside [0, {total})")
            if views[a] == views[b]:
                raise SameViewEdge(
                    f"edge ({a}, {b}) joins two items of view {views[a]}"
                )
            if prev is not None and prev >= (a, b):
                raise ValueError("edges must be strictly sorted; use build_aggregate")
            prev = (a, b)

    def _view_lookup(self) -> np.ndarray:
        return np.repeat(np.arange(self.layout.n_views), self.layout.sizes)

    @cached_property
    def vertex_views(self) -> np.ndarray:
        """vertex_views[v] = view owning global vertex v."""
        return self._view_lookup()

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.layout.total, dtype=np.int64)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbour lists, one per global vertex."""
        neigh: list[list[int]] = [[] for _ in range(self.layout.total)]
        for a, b in self.edges:
            neigh[a].append(b)
            neigh[b].append(a)
        return tuple(tuple(sorted(ns)) for ns in neigh)

    def densify(self) -> np.ndarray:
        """Dense 0/1 matrix with identity diagonal blocks."""
        l = self.layout.total
        mat = np.eye(l)
        for a, b in self.edges:
            mat[a, b] = 1.0
            mat[b, a] = 1.0
        return mat


@dataclass(frozen=True)
class PermutationBlockReport:
    """Outcome of a distinctness check.

    ``violating_blocks`` lists view pairs (i, j) whose match block has a
    row or column with more than one entry.  ``intra_view_pairs`` is
    populated only by :func:`transitive_closure`: same-view item pairs
    that closure would have merged (reported as blocks (i, i)).
    """

    violating_blocks: tuple[tuple[int, int], ...]
    intra_view_pairs: tuple[tuple[int, int], ...] = field(default=())

    def ok(self) -> bool:
        return not self.violating_blocks


@dataclass(frozen=True)
class LiftingSet:
    """Universe labels for every item: one integer per item per view.

    Labels within one view are pairwise distinct, which is exactly the
    distinctness constraint; cycle consistency of the induced pairwise
    matches is automatic.
    """

    layout: ViewLayout
    universe_size: int
    assignment: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.universe_size < 0:
            raise ValueError("universe_size must be non-negative")
        if len(self.assignment) != self.layout.n_views:
            raise LayoutMismatch(
                f"{len(self.assignment)} assignment rows for "
                f"{self.layout.n_views} views"
            )
        for view, (row, size) in enumerate(zip(self.assignment, self.layout.sizes)):
            if len(row) != size:
                raise LayoutMismatch(
                    f"view {view} has {size} items but {len(row)} labels"
                )
            for uid in row:
                if not 0 <= uid < self.universe_size:
                    raise IndexOutOfRange(
                        f"universe id {uid} not in [0, {self.universe_size})"
                    )
            if len(set(row)) != len(row):
                raise ValueError(f"duplicate universe id within view {view}")

    def matrix(self) -> np.ndarray:
        """Dense 0/1 lifting matrix, one row per global vertex."""
        mat = np.zeros((self.layout.total, self.universe_size))
        for view, row in enumerate(self.assignment):
            base = self.layout.offset(view)
            for item, uid in enumerate(row):
                mat[base + item, uid] = 1.0
        return mat


@dataclass(frozen=True)
class ClusterPartition:
    """Partition of the global vertex set into label classes."""

    clusters: tuple[tuple[int, ...], ...]
    vertex_to_cluster: tuple[int, ...]


def build_aggregate(
    layout: ViewLayout,
    pairs: Iterable[tuple[int, int, int, int]],
) -> AggregateAssociation:
    """Assemble an aggregate from (view_i, item_i, view_j, item_j) pairs.

    Pairs are unordered and duplicates collapse.  Raises IndexOutOfRange
    for indices outside the layout and SameViewEdge when both endpoints
    belong to one view.
    """
    edges = set()
    for vi, ii, vj, ij in pairs:
        if vi == vj:
            raise SameViewEdge(
                f"pair (view {vi}, item {ii}) -- (view {vj}, item {ij}) "
                "stays within one view"
            )
        a = layout.vertex(vi, ii)
        b = layout.vertex(vj, ij)
        edges.add((a, b) if a < b else (b, a))
    return AggregateAssociation(layout, tuple(sorted(edges)))


def _from_vertex_pairs(
    layout: ViewLayout, pairs: Iterable[tuple[int, int]]
) -> AggregateAssociation:
    """Internal constructor from global vertex pairs (validated anew)."""
    edges = {(a, b) if a < b else (b, a) for a, b in pairs}
    return AggregateAssociation(layout, tuple(sorted(edges)))


def check_distinctness(agg: AggregateAssociation) -> PermutationBlockReport:
    """Report view pairs whose match block is not a partial permutation.

    A block violates distinctness exactly when some item has two or more
    partners in a single other view.  An empty report means every block
    is a partial permutation.
    """
    views = agg.vertex_views
    blocks: set[tuple[int, int]] = set()
    for v, neighbours in enumerate(agg.adjacency):
        seen: set[int] = set()
        for u in neighbours:
            w = int(views[u])
            if w in seen:
                blocks.add((int(views[v]), w))
            seen.add(w)
    return PermutationBlockReport(tuple(sorted(blocks)))


def _component_labels(adjacency: Sequence[Sequence[int]]) -> list[int]:
    """BFS component labels; components numbered by smallest member."""
    n = len(adjacency)
    label = [-1] * n
    current = 0
    for start in range(n):
        if label[start] != -1:
            continue
        queue = [start]
        label[start] = current
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for u in adjacency[v]:
                if label[u] == -1:
                    label[u] = current
                    queue.append(u)
        current += 1
    return label


def check_cycle_consistency(agg: AggregateAssociation) -> bool:
    """True iff the graph is a disjoint union of distinct-view cliques.

    Equivalently: a valid LiftingSet reproducing the matches exists.
    Each connected component must contain at most one item per view and
    all k*(k-1)/2 edges.
    """
    labels = _component_labels(agg.adjacency)
    n_comp = max(labels) + 1 if labels else 0
    comp_size = [0] * n_comp
    comp_edges = [0] * n_comp
    views_seen: list[set[int]] = [set() for _ in range(n_comp)]
    views = agg.vertex_views
    for v, c in enumerate(labels):
        comp_size[c] += 1
        w = int(views[v])
        if w in views_seen[c]:
            return False
        views_seen[c].add(w)
    for a, b in agg.edges:
        comp_edges[labels[a]] += 1
    return all(
        comp_edges[c] == comp_size[c] * (comp_size[c] - 1) // 2
        for c in range(n_comp)
    )


def transitive_closure(
    agg: AggregateAssociation,
) -> tuple[AggregateAssociation, PermutationBlockReport]:
    """Complete every connected component into a clique.

    Same-view pairs produced by the completion cannot be represented in
    an AggregateAssociation, so they are dropped from the returned edge
    set and reported instead (as blocks (i, i) plus the literal vertex
    pairs) for diagnostics; metrics that want to penalise them can count
    ``intra_view_pairs``.
    """
    labels = _component_labels(agg.adjacency)
    members: dict[int, list[int]] = {}
    for v, c in enumerate(labels):
        members.setdefault(c, []).append(v)
    views = agg.vertex_views
    closed: list[tuple[int, int]] = []
    intra: list[tuple[int, int]] = []
    blocks: set[tuple[int, int]] = set()
    for group in members.values():
        for a, b in itertools.combinations(group, 2):
            if views[a] == views[b]:
                intra.append((a, b))
                blocks.add((int(views[a]), int(views[a])))
            else:
                closed.append((a, b))
    report = PermutationBlockReport(tuple(sorted(blocks)), tuple(sorted(intra)))
    return _from_vertex_pairs(agg.layout, closed), report


def to_pairwise(lifting: LiftingSet) -> AggregateAssociation:
    """Pairwise matches induced by equal universe labels."""
    groups: dict[int, list[int]] = {}
    for view, row in enumerate(lifting.assignment):
        base = lifting.layout.offset(view)
        for item, uid in enumerate(row):
            groups.setdefault(uid, []).append(base + item)
    edges = []
    for group in groups.values():
        edges.extend(itertools.combinations(sorted(group), 2))
    return _from_vertex_pairs(lifting.layout, edges)


def cluster_partition(lifting: LiftingSet) -> ClusterPartition:
    """Non-empty label classes, ordered by smallest contained vertex."""
    groups: dict[int, list[int]] = {}
    for view, row in enumerate(lifting.assignment):
        base = lifting.layout.offset(view)
        for item, uid in enumerate(row):
            groups.setdefault(uid, []).append(base + item)
    clusters = sorted(tuple(sorted(g)) for g in groups.values())
    v2c = [-1] * lifting.layout.total
    for idx, cluster in enumerate(clusters):
        for v in cluster:
            v2c[v] = idx
    return ClusterPartition(tuple(clusters), tuple(v2c))


def normalized_objective(
    candidate: AggregateAssociation, observed: AggregateAssociation
) -> float:
    """Degree-normalized overlap between two association matrices.

    Both dense matrices P (candidate) and Q (observed) carry identity
    diagonal blocks; with C = diag(row sums) on each side the value is
    trace((C_p^-1/2 P C_p^-1/2)^T (C_q^-1/2 Q C_q^-1/2)).  Computed
    sparsely from shared edges; identical layouts required.
    """
    if candidate.layout != observed.layout:
        raise LayoutMismatch("candidate and observed layouts differ")
    cp = candidate.degrees + 1.0
    cq = observed.degrees + 1.0
    value = float(np.sum(1.0 / (cp * cq)))
    shared = candidate.edge_set & observed.edge_set
    if shared:
        idx = np.array(sorted(shared), dtype=np.int64)
        a, b = idx[:, 0], idx[:, 1]
        value += float(np.sum(2.0 / np.sqrt(cp[a] * cp[b] * cq[a] * cq[b])))
    return value
