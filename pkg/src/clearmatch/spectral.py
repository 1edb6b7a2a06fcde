"""Graph Laplacians and the dense symmetric eigensolver.

The association graph decomposes into connected components; eigenpairs
of the full normalized Laplacian are the disjoint union of per-component
eigenpairs with eigenvectors zero-padded to full length.  Solving per
component keeps the dense solve small and prevents numerically mixed
eigenvectors across components, so :func:`component_spectrum` is the
entry point the pipeline uses.

The eigensolver itself is deliberately self-contained: Householder
reduction to tridiagonal form followed by implicit-shift QL iteration,
with transforms accumulated into the eigenvector matrix.  Both kernels
are plain loops compiled with numba when available (pure-Python
otherwise, same numerics).  Results are deterministic: eigenvalues
ascend, ties keep component order, and each eigenvector's
largest-magnitude entry is made positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .associations import AggregateAssociation, _component_labels
from .errors import ConvergenceFailure, ShapeError

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

__all__ = [
    "ComponentDecomposition",
    "Spectrum",
    "connected_components",
    "normalized_laplacian",
    "symmetrize",
    "symmetric_eig",
    "component_spectrum",
    "MAX_DENSE_ORDER",
]

# Largest matrix the dense solver accepts before refusing outright.
MAX_DENSE_ORDER = 4096

# QL iterations allowed per eigenvalue before giving up.
_QL_ITERATION_CAP = 64


@dataclass(frozen=True)
class ComponentDecomposition:
    """Connected components, ordered by smallest contained vertex."""

    components: tuple[tuple[int, ...], ...]
    vertex_to_component: tuple[int, ...]


@dataclass(frozen=True)
class Spectrum:
    """Eigenpairs of the normalized Laplacian, merged across components.

    ``eigenvalues`` ascend; ``eigenvectors`` holds the matching columns,
    zero-padded outside their source component and orthonormal overall.
    ``component_of``/``component_sizes`` record each eigenpair's source
    component and its vertex count.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    component_of: tuple[int, ...]
    component_sizes: tuple[int, ...]
    decomposition: ComponentDecomposition


def connected_components(agg: AggregateAssociation) -> ComponentDecomposition:
    labels = _component_labels(agg.adjacency)
    n_comp = max(labels) + 1 if labels else 0
    members: list[list[int]] = [[] for _ in range(n_comp)]
    for v, c in enumerate(labels):
        members[c].append(v)
    return ComponentDecomposition(
        tuple(tuple(m) for m in members), tuple(labels)
    )


def normalized_laplacian(
    agg: AggregateAssociation, vertices: Sequence[int]
) -> np.ndarray:
    """Degree-plus-identity normalized Laplacian of a vertex subset.

    With A the adjacency restricted to ``vertices``, D its degrees and
    C = D + I, returns C^-1/2 (D - A) C^-1/2.	The +I guard keeps the
    scaling finite on isolated vertices (a single vertex yields [[0]]).
    Exactly symmetric by construction.
    """
    index = {v: k for k, v in enumerate(vertices)}
    n = len(index)
    adj = np.zeros((n, n))
    for v in vertices:
        for u in agg.adjacency[v]:
            if u in index:
                adj[index[v], index[u]] = 1.0
    deg = adj.sum(axis=1)
    lap = np.diag(deg) - adj
    scale = 1.0 / np.sqrt(deg + 1.0)
    return np.outer(scale, scale) * lap


def symmetrize(mat: np.ndarray) -> np.ndarray:
    """Symmetric part (M + M^T) / 2."""
    return (mat + mat.T) / 2.0


@njit(cache=True)
def _tred2(v):  # pragma: no cover - exercised via symmetric_eig
    """Householder reduction of symmetric ``v`` to tridiagonal form.

    In-place: ``v`` is replaced by the accumulated orthogonal transform.
    Returns (d, e) with the diagonal and subdiagonal (e[0] = 0).
    """
    n = v.shape[0]
    d = np.empty(n)
    e = np.zeros(n)
    for j in range(n):
        d[j] = v[n - 1, j]

    for i in range(n - 1, 0, -1):
        # Scale the row to avoid under/overflow in the norm.
        scale = 0.0
        h = 0.0
        for k in range(i):
            scale += abs(d[k])
        if scale == 0.0:
            e[i] = d[i - 1]
            for j in range(i):
                d[j] = v[i - 1, j]
                v[i, j] = 0.0
                v[j, i] = 0.0
        else:
            for k in range(i):
                d[k] /= scale
                h += d[k] * d[k]
            f = d[i - 1]
            g = math.sqrt(h)
            if f > 0.0:
                g = -g
            e[i] = scale * g
            h -= f * g
            d[i - 1] = f - g
            for j in range(i):
                e[j] = 0.0
            # Apply the similarity transform to the leading block.
            for j in range(i):
                f = d[j]
                v[j, i] = f
                g = e[j] + v[j, j] * f
                for k in range(j + 1, i):
                    g += v[k, j] * d[k]
                    e[k] += v[k, j] * f
                e[j] = g
            f = 0.0
            for j in range(i):
                e[j] /= h
                f += e[j] * d[j]
            hh = f / (h + h)
            for j in range(i):
                e[j] -= hh * d[j]
            for j in range(i):
                f = d[j]
                g = e[j]
                for k in range(j, i):
                    v[k, j] -= f * e[k] + g * d[k]
                d[j] = v[i - 1, j]
                v[i, j] = 0.0
        d[i] = h

    # Accumulate the Householder transforms into v.
    for i in range(n - 1):
        v[n - 1, i] = v[i, i]
        v[i, i] = 1.0
        h = d[i + 1]
        if h != 0.0:
            for k in range(i + 1):
                d[k] = v[k, i + 1] / h
            for j in range(i + 1):
                g = 0.0
                for k in range(i + 1):
                    g += v[k, i + 1] * v[k, j]
                for k in range(i + 1):
                    v[k, j] -= g * d[k]
        for k in range(i + 1):
            v[k, i + 1] = 0.0
    for j in range(n):
        d[j] = v[n - 1, j]
        v[n - 1, j] = 0.0
    v[n - 1, n - 1] = 1.0
    e[0] = 0.0
    return d, e


@njit(cache=True)
def _tql2(d, e, v, cap):  # pragma: no cover - exercised via symmetric_eig
    """Implicit-shift QL iteration on a tridiagonal matrix.

    Rotations are accumulated into the columns of ``v``.  Returns 0 on
    success, or 1 + (index of the eigenvalue that failed to converge
    within ``cap`` iterations).
    """
    n = d.shape[0]
    for i in range(1, n):
        e[i - 1] = e[i]
    e[n - 1] = 0.0

    f = 0.0
    tst1 = 0.0
    eps = 2.0 ** -52
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n:
            if abs(e[m]) <= eps * tst1:
                break
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > cap:
                    return l + 1
                # Implicit shift from the 2x2 leading block.
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = math.hypot(p, 1.0)
                if p < 0.0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                for i in range(l + 2, n):
                    d[i] -= h
                f += h
                # One QL sweep of Givens rotations, bottom-up.
                p = d[m]
                c = 1.0
                c2 = c
                c3 = c
                el1 = e[l + 1]
                s = 0.0
                s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = math.hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    for k in range(n):
                        h = v[k, i + 1]
                        v[k, i + 1] = s * v[k, i] + c * h
                        v[k, i] = c * v[k, i] - s * h
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if abs(e[l]) <= eps * tst1:
                    break
        d[l] = d[l] + f
        e[l] = 0.0
    return 0


def symmetric_eig(
    mat: np.ndarray, max_order: int = MAX_DENSE_ORDER
) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a dense symmetric matrix.

    Returns (values, vectors): eigenvalues ascending (stable order on
    exact ties) and the matching orthonormal eigenvector columns, each
    signed so its largest-magnitude entry is positive.  Raises
    ShapeError for non-square/non-symmetric input or order beyond
    ``max_order``, and ConvergenceFailure if QL stalls.
    """
    a = np.array(mat, dtype=np.float64, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > max_order:
        raise ShapeError(f"dense order {n} exceeds the cap of {max_order}")
    if n > 0:
        tol = 1e-10 * max(1.0, float(np.max(np.abs(a))))
        if float(np.max(np.abs(a - a.T))) > tol:
            raise ShapeError("matrix is not symmetric; symmetrize() it first")
    if n == 0:
        return np.empty(0), np.empty((0, 0))
    if n == 1:
        return a[0].copy(), np.ones((1, 1))

    d, e = _tred2(a)
    status = _tql2(d, e, a, _QL_ITERATION_CAP)
    if status != 0:
        raise ConvergenceFailure(
            f"QL iteration exceeded {_QL_ITERATION_CAP} sweeps "
            f"at eigenvalue index {status - 1} (order {n})"
        )

    order = np.argsort(d, kind="stable")
    values = d[order]
    vectors = a[:, order]
    peak = np.argmax(np.abs(vectors), axis=0)
    flip = vectors[peak, np.arange(n)] < 0.0
    vectors[:, flip] = -vectors[:, flip]
    return values, vectors


def component_spectrum(
    agg: AggregateAssociation, max_order: int = MAX_DENSE_ORDER
) -> Spectrum:
    """Eigenpairs of the symmetrized normalized Laplacian, per component.

    Each component is decomposed independently and its eigenvectors are
    zero-padded to the full vertex count; the union is sorted by
    eigenvalue with exact ties kept in (component, within-component)
    order, so the result is reproducible bit for bit.
    """
    decomp = connected_components(agg)
    l = agg.layout.total
    if l == 0:
        return Spectrum(np.empty(0), np.empty((0, 0)), (), (), decomp)

    values_parts: list[np.ndarray] = []
    comp_of: list[int] = []
    comp_size: list[int] = []
    within: list[int] = []
    vectors = np.zeros((l, l))
    col = 0
    for cid, verts in enumerate(decomp.components):
        lap = symmetrize(normalized_laplacian(agg, verts))
        try:
            vals, vecs = symmetric_eig(lap, max_order=max_order)
        except ConvergenceFailure as exc:
            raise ConvergenceFailure(
                f"component {cid}: {exc}", component=cid
            ) from exc
        values_parts.append(vals)
        idx = np.fromiter(verts, dtype=np.int64, count=len(verts))
        vectors[idx, col : col + len(verts)] = vecs
        comp_of.extend([cid] * len(verts))
        comp_size.extend([len(verts)] * len(verts))
        within.extend(range(len(verts)))
        col += len(verts)

    values = np.concatenate(values_parts)
    order = np.lexsort((np.array(within), np.array(comp_of), values))
    return Spectrum(
        eigenvalues=values[order],
        eigenvectors=vectors[:, order],
        component_of=tuple(int(comp_of[k]) for k in order),
        component_sizes=tuple(int(comp_size[k]) for k in order),
        decomposition=decomp,
    )
