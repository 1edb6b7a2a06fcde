"""Command-line surface: solve, synthesize, evaluate, benchmark.

Exit codes are part of the contract: 0 success, 2 for anything wrong
with flags or input files (nothing is written in that case), 3 for a
pipeline failure on valid input (the message names the graph component
where applicable).

``run`` emits a solution document that is a superset of the association
format ("views" + "edges"), so it can be fed straight back to ``eval``.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import fileio
from .associations import (
    check_cycle_consistency,
    check_distinctness,
)
from .errors import ConvergenceFailure, InsufficientNonZeroRows
from .evaluation import (
    SynthConfig,
    TrialFailure,
    TrialResult,
    clique_metrics,
    edge_metrics,
    gen_ground_truth,
    inject_mismatch,
    means_csv,
    monte_carlo,
    trials_csv,
)
from .pipeline import clear, postprocess_min_cluster

__all__ = ["RunOptions", "cmd_run", "cmd_synth", "cmd_eval", "cmd_bench", "main", "entry"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PIPELINE = 3


@dataclass(frozen=True)
class RunOptions:
    """Everything ``run`` needs; built from flags or constructed directly."""

    input_path: str
    output_path: str | None = None
    mode: str = "optimal"
    override_m: int | None = None
    min_cluster: int | None = None
    emit_diagnostics: bool = False

    def __post_init__(self):
        if not self.input_path:
            raise ValueError("input path must be nonempty")
        if self.output_path is not None and not self.output_path:
            raise ValueError("output path must be nonempty")
        if self.mode not in ("optimal", "greedy"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.min_cluster is not None and self.min_cluster < 1:
            raise ValueError("min_cluster must be at least 1")


def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno}: {exc.msg}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_run(opts: RunOptions) -> int:
    agg = fileio.load_association(_read_json(opts.input_path))
    started = time.perf_counter()
    solution = clear(agg, mode=opts.mode, override_m=opts.override_m)
    if opts.min_cluster is not None:
        solution = postprocess_min_cluster(solution, opts.min_cluster)
    runtime = time.perf_counter() - started
    payload: dict[str, Any] = fileio.lifting_payload(solution.lifting)
    payload["edges"] = fileio.association_payload(solution.pairwise)["edges"]
    payload["m_hat"] = solution.diagnostics.m_hat
    payload["m_tilde"] = solution.diagnostics.m_tilde
    payload["objective"] = solution.objective
    payload["runtime_s"] = runtime
    if opts.emit_diagnostics:
        payload["diagnostics"] = {
            "pivot_indices": list(solution.diagnostics.pivot_indices),
            "eigenvalues": list(solution.diagnostics.eigenvalues),
        }
    _write_text(opts.output_path, fileio.dumps(payload))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = SynthConfig(
        universe_size=args.m,
        n_views=args.views,
        ratio=args.ratio,
        mismatch_rate=args.rate,
        seed=args.seed,
    )
    # one user seed, two independent streams
    truth_seed, noise_seed = (
        int(x)
        for x in np.random.SeedSequence(args.seed).generate_state(2, dtype=np.uint64)
    )
    lifting, truth = gen_ground_truth(
        SynthConfig(cfg.universe_size, cfg.n_views, cfg.ratio, cfg.mismatch_rate, truth_seed)
    )
    noisy = inject_mismatch(truth, cfg.mismatch_rate, seed=noise_seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "truth_lifting.json": fileio.dumps(fileio.lifting_payload(lifting)),
        "truth.json": fileio.dumps(fileio.association_payload(truth)),
        "noisy.json": fileio.dumps(fileio.association_payload(noisy)),
    }
    manifest = {
        "m": args.m,
        "views": args.views,
        "ratio": args.ratio,
        "rate": args.rate,
        "seed": args.seed,
        "files": sorted(files),
    }
    files["manifest.json"] = fileio.dumps(manifest)
    for name, text in files.items():
        (out / name).write_text(text)
    print(f"wrote {', '.join(sorted(files))} to {out}")
    return EXIT_OK


def _fmt_float(x: float) -> str:
    return repr(float(x))


def cmd_eval(args: argparse.Namespace) -> int:
    output = fileio.load_association(_read_json(args.output))
    truth = fileio.load_association(_read_json(args.truth))
    p, r, f1 = edge_metrics(output, truth)
    consistent = check_cycle_consistency(output)
    distinct = check_distinctness(output).ok()
    lines = [
        f"edge_precision {_fmt_float(p)}",
        f"edge_recall {_fmt_float(r)}",
        f"edge_f1 {_fmt_float(f1)}",
    ]
    closure: tuple[float, float, float] | None = None
    if args.clique:
        closure = clique_metrics(output, truth)
        lines += [
            f"closure_precision {_fmt_float(closure[0])}",
            f"closure_recall {_fmt_float(closure[1])}",
            f"closure_f1 {_fmt_float(closure[2])}",
            f"consistent {int(consistent)}",
            f"distinct {int(distinct)}",
        ]
    print("\n".join(lines))
    if not consistent:
        print(
            "warning: output associations are not cycle consistent; "
            "edge metrics overstate clique-level quality (see --clique)",
            file=sys.stderr,
        )
    if args.csv:
        path = Path(args.csv)
        header = "output,truth,p,r,f1,closure_p,closure_r,closure_f1,consistent,distinct\n"
        row = [args.output, args.truth, _fmt_float(p), _fmt_float(r), _fmt_float(f1)]
        row += (
            [_fmt_float(closure[0]), _fmt_float(closure[1]), _fmt_float(closure[2]),
             str(int(consistent)), str(int(distinct))]
            if closure is not None
            else ["", "", "", "", ""]
        )
        fresh = not path.exists() or path.stat().st_size == 0
        with path.open("a") as fh:
            if fresh:
                fh.write(header)
            fh.write(",".join(row) + "\n")
    return EXIT_OK


def _aligned_table(csv_text: str) -> str:
    rows = [line.split(",") for line in csv_text.strip().splitlines()]
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows
    )


def cmd_bench(args: argparse.Namespace) -> int:
    grid = [
        SynthConfig(args.m, views, ratio, rate)
        for views, ratio, rate in itertools.product(args.views, args.ratios, args.rates)
    ]
    results = monte_carlo(
        grid,
        trials=args.trials,
        base_seed=args.seed,
        mode=args.mode,
        threads=args.threads,
        collect_failures=True,
    )
    failures = [res for res in results if isinstance(res, TrialFailure)]
    for ci, cfg in enumerate(grid):
        cell_failures = [f for f in failures if f.cell_index == ci]
        if cell_failures:
            print(
                f"cell views={cfg.n_views} ratio={cfg.ratio} rate={cfg.mismatch_rate}: "
                f"{len(cell_failures)}/{args.trials} trials failed "
                f"({cell_failures[0].message})",
                file=sys.stderr,
            )
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trials.csv").write_text(trials_csv(results))
    means = means_csv(results)
    (out / "means.csv").write_text(means)
    print(_aligned_table(means))
    all_failed = not any(isinstance(res, TrialResult) for res in results)
    return EXIT_PIPELINE if all_failed else EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clearmatch",
        description="Cycle-consistent multi-view data association via graph spectra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve one association file")
    run.add_argument("input", help="association JSON file")
    run.add_argument("--out", help="solution JSON path (default: stdout)")
    run.add_argument("--mode", choices=("optimal", "greedy"), default="optimal")
    run.add_argument("--override-m", type=int, default=None,
                     help="force the universe size instead of estimating it")
    run.add_argument("--min-cluster", type=int, default=None,
                     help="dissolve output clusters smaller than this")
    run.add_argument("--emit-diagnostics", action="store_true",
                     help="include eigenvalues and pivot rows in the output")
    run.set_defaults(func=lambda a: cmd_run(RunOptions(
        input_path=a.input,
        output_path=a.out,
        mode=a.mode,
        override_m=a.override_m,
        min_cluster=a.min_cluster,
        emit_diagnostics=a.emit_diagnostics,
    )))

    synth = sub.add_parser("synth", help="generate a synthetic truth/noisy pair")
    synth.add_argument("--m", type=int, default=20, help="universe size")
    synth.add_argument("--views", type=int, default=10)
    synth.add_argument("--ratio", type=float, default=0.5)
    synth.add_argument("--rate", type=float, default=0.15)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out-dir", required=True)
    synth.set_defaults(func=cmd_synth)

    ev = sub.add_parser("eval", help="score an output file against a truth file")
    ev.add_argument("output", help="association or solution JSON file")
    ev.add_argument("truth", help="association JSON file")
    ev.add_argument("--clique", action="store_true",
                    help="also score after transitive closure")
    ev.add_argument("--csv", default=None, help="append one CSV row here")
    ev.set_defaults(func=cmd_eval)

    bench = sub.add_parser("bench", help="run a seeded benchmark grid")
    bench.add_argument("--m", type=int, default=20)
    bench.add_argument("--views", type=_int_list, default=[4, 6, 8, 10, 12, 14])
    bench.add_argument("--ratios", type=_float_list, default=[0.5])
    bench.add_argument(
        "--rates",
        type=_float_list,
        default=[0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55],
    )
    bench.add_argument("--trials", type=int, default=5)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--mode", choices=("optimal", "greedy"), default="optimal")
    bench.add_argument("--threads", type=int, default=1)
    bench.add_argument("--out-dir", required=True)
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceFailure as exc:
        where = "" if exc.component is None else f" (component {exc.component})"
        print(f"error: eigensolver did not converge{where}", file=sys.stderr)
        return EXIT_PIPELINE
    except InsufficientNonZeroRows as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main(sys.argv[1:]))
