"""On-disk formats: association and lifting JSON documents.

Association documents::

    {"views": [m1, ..., mn], "edges": [[vi, ii, vj, ij], ...]}

Lifting documents::

    {"views": [m1, ..., mn], "universe_size": m, "assignment": [[...], ...]}

All indices are zero-based.  Serialization is canonical (fixed key
order, edges sorted by endpoints), so re-encoding a loaded document is
byte stable.  Loaders raise ValueError naming the offending field;
structural validation (index ranges, same-view pairs, duplicate labels)
is delegated to the data-model constructors.
"""

from __future__ import annotations

import json
from typing import Any

from .associations import (
    AggregateAssociation,
    LiftingSet,
    ViewLayout,
    build_aggregate,
)

__all__ = [
    "association_payload",
    "lifting_payload",
    "load_association",
    "load_lifting",
    "dumps",
]


def dumps(payload: dict[str, Any]) -> str:
    """Canonical JSON text: two-space indent, keys in insertion order."""
    return json.dumps(payload, indent=2) + "\n"


def _edge_quads(agg: AggregateAssociation) -> list[list[int]]:
    quads = []
    for a, b in agg.edges:
        vi, ii = agg.layout.locate(a)
        vj, ij = agg.layout.locate(b)
        quads.append([vi, ii, vj, ij])
    return quads


def association_payload(agg: AggregateAssociation) -> dict[str, Any]:
    return {"views": list(agg.layout.sizes), "edges": _edge_quads(agg)}


def lifting_payload(lifting: LiftingSet) -> dict[str, Any]:
    return {
        "views": list(lifting.layout.sizes),
        "universe_size": lifting.universe_size,
        "assignment": [list(row) for row in lifting.assignment],
    }


def _layout_from(data: dict[str, Any]) -> ViewLayout:
    views = data.get("views")
    if not isinstance(views, list) or not views:
        raise ValueError('field "views" must be a non-empty list of counts')
    if not all(isinstance(s, int) and s >= 0 for s in views):
        raise ValueError('field "views" must hold non-negative integers')
    return ViewLayout(tuple(views))


def load_association(data: dict[str, Any]) -> AggregateAssociation:
    """Parse an association document (extra keys are ignored)."""
    if not isinstance(data, dict):
        raise ValueError("association document must be a JSON object")
    layout = _layout_from(data)
    edges = data.get("edges")
    if not isinstance(edges, list):
        raise ValueError('field "edges" must be a list of quadruples')
    quads = []
    for k, quad in enumerate(edges):
        if (
            not isinstance(quad, list)
            or len(quad) != 4
            or not all(isinstance(x, int) for x in quad)
        ):
            raise ValueError(
                f'field "edges"[{k}] must be [view_i, item_i, view_j, item_j]'
            )
        quads.append(tuple(quad))
    return build_aggregate(layout, quads)


def load_lifting(data: dict[str, Any]) -> LiftingSet:
    """Parse a lifting document (extra keys are ignored)."""
    if not isinstance(data, dict):
        raise ValueError("lifting document must be a JSON object")
    layout = _layout_from(data)
    size = data.get("universe_size")
    if not isinstance(size, int) or size < 0:
        raise ValueError('field "universe_size" must be a non-negative integer')
    assignment = data.get("assignment")
    if not isinstance(assignment, list) or not all(
        isinstance(row, list) and all(isinstance(x, int) for x in row)
        for row in assignment
    ):
        raise ValueError('field "assignment" must be a list of integer lists')
    return LiftingSet(layout, size, tuple(tuple(row) for row in assignment))
