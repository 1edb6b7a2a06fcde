"""Synthetic benchmarks: ground-truth generation, noise, and scoring.

The generator draws, for each view, a random subset of a common
universe; the induced pairwise matches are the ground truth.  Noise
rewires a fraction of the edges while keeping the graph symmetric and
each view block a partial permutation.  Scoring covers raw edge
precision/recall/F1 and the stricter clique variant, where the output
is transitively closed first and completion artifacts count against
precision.

``monte_carlo`` runs a config grid with per-trial seeds derived from a
(base seed, cell index, trial index) triple, so results are independent
of thread count and of which subset of the grid is run.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .associations import (
    AggregateAssociation,
    LiftingSet,
    ViewLayout,
    check_cycle_consistency,
    check_distinctness,
    to_pairwise,
    transitive_closure,
)
from .errors import LayoutMismatch
from .pipeline import clear
from .spectral import symmetric_eig, symmetrize

__all__ = [
    "SynthConfig",
    "EvalReport",
    "TrialResult",
    "TrialFailure",
    "TRIAL_COLUMNS",
    "gen_ground_truth",
    "inject_mismatch",
    "edge_metrics",
    "clique_metrics",
    "eigengap_estimate",
    "monte_carlo",
    "trials_csv",
    "means_csv",
]


@dataclass(frozen=True)
class SynthConfig:
    """One benchmark cell: universe size, view count, coverage, noise."""

    universe_size: int
    n_views: int
    ratio: float
    mismatch_rate: float
    seed: int = 0

    def __post_init__(self):
        if self.universe_size < 1:
            raise ValueError("universe_size must be positive")
        if self.n_views < 1:
            raise ValueError("n_views must be positive")
        if not 0.0 < self.ratio <= 1.0:
            raise ValueError("ratio must lie in (0, 1]")
        if not 0.0 <= self.mismatch_rate <= 1.0:
            raise ValueError("mismatch_rate must lie in [0, 1]")


@dataclass(frozen=True)
class EvalReport:
    """Scores of one solver output against one ground truth."""

    precision: float
    recall: float
    f1: float
    closure_precision: float
    closure_recall: float
    closure_f1: float
    consistent: bool
    distinct: bool
    m_hat: int
    m_tilde: int
    eigengap_m: int
    runtime_seconds: float


@dataclass(frozen=True)
class TrialResult:
    """One finished benchmark trial, addressed by (cell, trial)."""

    cell_index: int
    config: SynthConfig
    trial: int
    report: EvalReport
    input_f1: float


@dataclass(frozen=True)
class TrialFailure:
    """A trial whose solve raised; kept for per-cell failure counts."""

    cell_index: int
    config: SynthConfig
    trial: int
    message: str


def _per_view_count(cfg: SynthConfig) -> int:
    # ceil with a small backoff so e.g. 0.1 * 30 -> 3, not 4
    return min(cfg.universe_size, math.ceil(cfg.ratio * cfg.universe_size - 1e-9))


def gen_ground_truth(cfg: SynthConfig) -> tuple[LiftingSet, AggregateAssociation]:
    """Sample per-view subsets of the universe; return labels and matches.

    Each view observes ceil(ratio * universe_size) distinct universe
    items, drawn uniformly and listed in ascending label order.
    """
    k = _per_view_count(cfg)
    rng = np.random.default_rng(cfg.seed)
    rows = tuple(
        tuple(int(x) for x in np.sort(rng.choice(cfg.universe_size, k, replace=False)))
        for _ in range(cfg.n_views)
    )
    layout = ViewLayout((k,) * cfg.n_views)
    lifting = LiftingSet(layout, cfg.universe_size, rows)
    return lifting, to_pairwise(lifting)


def inject_mismatch(
    agg: AggregateAssociation,
    rate: float,
    seed: int,
    degree_preserving: bool = False,
) -> AggregateAssociation:
    """Rewire floor(rate * |edges|) edges to wrong counterparts.

    One flip picks a surviving edge (a, b), a random endpoint to keep,
    and a random different item b' in the dropped endpoint's view; (a, b)
    becomes (a, b').  If b' already had a partner a' in a's view, that
    edge swings to (a', b) — a full swap, which preserves every degree.
    With ``degree_preserving`` only full swaps are allowed.  Candidates
    where no legal flip exists are skipped and later edges take their
    place.  The edge count never changes and the result stays symmetric
    and distinct for distinct input.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError("rate must lie in [0, 1]")
    edges = list(agg.edges)
    target = int(len(edges) * rate)
    if target == 0:
        return agg
    layout = agg.layout
    views = [int(v) for v in agg.vertex_views]
    edge_set = set(edges)
    partner: list[dict[int, int]] = [dict() for _ in range(layout.total)]
    for a, b in edges:
        partner[a][views[b]] = b
        partner[b][views[a]] = a

    def drop(x: int, y: int) -> None:
        edge_set.remove((x, y) if x < y else (y, x))
        del partner[x][views[y]]
        del partner[y][views[x]]

    def put(x: int, y: int) -> None:
        edge_set.add((x, y) if x < y else (y, x))
        partner[x][views[y]] = y
        partner[y][views[x]] = x

    rng = np.random.default_rng(seed)
    flips = 0
    for k in rng.permutation(len(edges)):
        if flips >= target:
            break
        a, b = edges[k]
        if (a, b) not in edge_set:
            continue  # consumed by an earlier swap
        if rng.integers(2):
            a, b = b, a
        vj = views[b]
        off = layout.offset(vj)
        size = layout.sizes[vj]
        if size < 2:
            continue  # no wrong counterpart exists in a one-item view
        shift = int(rng.integers(size - 1))
        bp = off + (b - off + 1 + shift) % size
        ap = partner[bp].get(views[a])
        if ap == a:
            continue  # (a, bp) already present (non-distinct input)
        if degree_preserving and ap is None:
            continue
        drop(a, b)
        if ap is not None:
            drop(ap, bp)
            put(ap, b)
        put(a, bp)
        flips += 1
    return AggregateAssociation(layout, tuple(sorted(edge_set)))


def edge_metrics(
    output: AggregateAssociation, truth: AggregateAssociation
) -> tuple[float, float, float]:
    """(precision, recall, f1) over match edges.

    An empty side scores 1.0 for its ratio (no chance to be wrong); F1
    is 0.0 when both precision and recall are zero.
    """
    if output.layout != truth.layout:
        raise LayoutMismatch("output and truth layouts differ")
    out = output.edge_set
    tru = truth.edge_set
    correct = len(out & tru)
    p = correct / len(out) if out else 1.0
    r = correct / len(tru) if tru else 1.0
    f1 = 2.0 * p * r / (p + r) if p + r > 0.0 else 0.0
    return p, r, f1


def clique_metrics(
    output: AggregateAssociation, truth: AggregateAssociation
) -> tuple[float, float, float]:
    """Edge metrics after transitively closing the output.

    Completion can imply same-view pairs; those cannot be correct, so
    they stay in the precision denominator as implied-but-wrong output.
    """
    if output.layout != truth.layout:
        raise LayoutMismatch("output and truth layouts differ")
    closed, report = transitive_closure(output)
    out = closed.edge_set
    correct = len(out & truth.edge_set)
    n_out = len(out) + len(report.intra_view_pairs)
    p = correct / n_out if n_out else 1.0
    r = correct / len(truth.edges) if truth.edges else 1.0
    f1 = 2.0 * p * r / (p + r) if p + r > 0.0 else 0.0
    return p, r, f1


def eigengap_estimate(agg: AggregateAssociation) -> int:
    """Universe size by the largest-gap heuristic on the plain
    symmetric normalized Laplacian D^-1/2 (D - A) D^-1/2 (isolated
    vertices keep unit scale).  Returns the position of the first
    largest consecutive eigenvalue gap."""
    l = agg.layout.total
    if l == 0:
        return 0
    if l == 1:
        return 1
    deg = agg.degrees.astype(np.float64)
    lap = np.diag(deg) - agg.densify()
    scale = 1.0 / np.sqrt(np.where(deg > 0.0, deg, 1.0))
    values, _ = symmetric_eig(symmetrize(lap * np.outer(scale, scale)))
    return int(np.argmax(np.diff(values))) + 1


def _trial_seeds(base_seed: int, cell_index: int, trial: int) -> tuple[int, int]:
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(cell_index, trial))
    truth_seed, noise_seed = ss.generate_state(2, dtype=np.uint64)
    return int(truth_seed), int(noise_seed)


def _run_trial(
    cell_index: int, cfg: SynthConfig, trial: int, base_seed: int, mode: str
) -> TrialResult:
    truth_seed, noise_seed = _trial_seeds(base_seed, cell_index, trial)
    _, truth = gen_ground_truth(replace(cfg, seed=truth_seed))
    noisy = inject_mismatch(truth, cfg.mismatch_rate, seed=noise_seed)
    started = time.perf_counter()
    solution = clear(noisy, mode=mode)
    runtime = time.perf_counter() - started
    p, r, f1 = edge_metrics(solution.pairwise, truth)
    cp, cr, cf1 = clique_metrics(solution.pairwise, truth)
    report = EvalReport(
        precision=p,
        recall=r,
        f1=f1,
        closure_precision=cp,
        closure_recall=cr,
        closure_f1=cf1,
        consistent=check_cycle_consistency(solution.pairwise),
        distinct=check_distinctness(solution.pairwise).ok(),
        m_hat=solution.diagnostics.m_hat,
        m_tilde=solution.diagnostics.m_tilde,
        eigengap_m=eigengap_estimate(noisy),
        runtime_seconds=runtime,
    )
    input_f1 = edge_metrics(noisy, truth)[2]
    return TrialResult(cell_index, cfg, trial, report, input_f1)


def monte_carlo(
    grid: Sequence[SynthConfig],
    trials: int,
    base_seed: int = 0,
    mode: str = "optimal",
    threads: int = 1,
    collect_failures: bool = True,
) -> list[TrialResult | TrialFailure]:
    """Run every (cell, trial) pair; results come back in grid order.

    Seeds depend only on (base_seed, cell position, trial), so the
    output is invariant to ``threads`` and to slicing the grid.  A
    raising trial becomes a TrialFailure entry rather than aborting the
    sweep; pass ``collect_failures=False`` to fail fast instead.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if threads < 1:
        raise ValueError("threads must be positive")
    jobs = [
        (ci, cfg, t) for ci, cfg in enumerate(grid) for t in range(trials)
    ]

    def run(job: tuple[int, SynthConfig, int]) -> TrialResult | TrialFailure:
        ci, cfg, t = job
        try:
            return _run_trial(ci, cfg, t, base_seed, mode)
        except Exception as exc:  # noqa: BLE001 - reported per cell
            if not collect_failures:
                raise
            return TrialFailure(ci, cfg, t, f"{type(exc).__name__}: {exc}")

    if threads == 1:
        results = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))
    return results


TRIAL_COLUMNS = (
    "views",
    "ratio",
    "rate",
    "trial",
    "p",
    "r",
    "f1",
    "closure_p",
    "closure_r",
    "closure_f1",
    "consistent",
    "distinct",
    "m_hat",
    "m_tilde",
    "eigengap_m",
    "runtime_s",
)


def _fmt(x: float | int | bool) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def trials_csv(results: Iterable[TrialResult | TrialFailure]) -> str:
    """Per-trial rows (failures omitted), one line per (cell, trial)."""
    lines = [",".join(TRIAL_COLUMNS)]
    for res in results:
        if isinstance(res, TrialFailure):
            continue
        cfg, rep = res.config, res.report
        lines.append(
            ",".join(
                (
                    str(cfg.n_views),
                    _fmt(cfg.ratio),
                    _fmt(cfg.mismatch_rate),
                    str(res.trial),
                    _fmt(rep.precision),
                    _fmt(rep.recall),
                    _fmt(rep.f1),
                    _fmt(rep.closure_precision),
                    _fmt(rep.closure_recall),
                    _fmt(rep.closure_f1),
                    _fmt(rep.consistent),
                    _fmt(rep.distinct),
                    str(rep.m_hat),
                    str(rep.m_tilde),
                    str(rep.eigengap_m),
                    _fmt(rep.runtime_seconds),
                )
            )
        )
    return "\n".join(lines) + "\n"


def means_csv(results: Iterable[TrialResult | TrialFailure]) -> str:
    """Per-cell means under the same header; ``trial`` holds the count
    of finished trials and the flag columns hold fractions."""
    cells: dict[int, list[TrialResult]] = {}
    configs: dict[int, SynthConfig] = {}
    for res in results:
        configs.setdefault(res.cell_index, res.config)
        if isinstance(res, TrialResult):
            cells.setdefault(res.cell_index, []).append(res)
    lines = [",".join(TRIAL_COLUMNS)]
    for ci in sorted(configs):
        done = cells.get(ci, [])
        cfg = configs[ci]
        if not done:
            continue
        n = float(len(done))

        def mean(pick) -> float:
            return sum(pick(r.report) for r in done) / n

        lines.append(
            ",".join(
                (
                    str(cfg.n_views),
                    _fmt(cfg.ratio),
                    _fmt(cfg.mismatch_rate),
                    str(len(done)),
                    _fmt(mean(lambda r: r.precision)),
                    _fmt(mean(lambda r: r.recall)),
                    _fmt(mean(lambda r: r.f1)),
                    _fmt(mean(lambda r: r.closure_precision)),
                    _fmt(mean(lambda r: r.closure_recall)),
                    _fmt(mean(lambda r: r.closure_f1)),
                    _fmt(mean(lambda r: float(r.consistent))),
                    _fmt(mean(lambda r: float(r.distinct))),
                    _fmt(mean(lambda r: float(r.m_hat))),
                    _fmt(mean(lambda r: float(r.m_tilde))),
                    _fmt(mean(lambda r: float(r.eigengap_m))),
                    _fmt(mean(lambda r: r.runtime_seconds)),
                )
            )
        )
    return "\n".join(lines) + "\n"
