"""Command-line front door for running benchmark experiments."""

from __future__ import annotations

import argparse
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import __version__
from .errors import ConfigError
from .harness import (
    AlgoParams,
    ALGORITHMS,
    SolutionAwareDeleteStream,
    gen_degree_delete_stream,
    gen_window_stream,
    load_snap_edges,
    run_experiment,
    write_csv,
    write_manifest,
)
from .oracle import CoverageFunction

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

WORKERS_ENV = "DYNSUBMAX_WORKERS"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    algo: str
    dataset: str
    stream: str  # "window:<int>" | "degdel" | "degdel-solution"
    ks: tuple[int, ...]
    eps: float
    eps1: float
    epsp: float
    seed: int
    repeats: int
    out: str
    sample_cap: int | None
    plot: bool


def parse_k_grid(spec: str) -> tuple[int, ...]:
    """Accepts '20', '10,20,30', or 'a..b:s' for the inclusive range a..b."""
    spec = spec.strip()
    if ".." in spec:
        lo_part, _, rest = spec.partition("..")
        hi_part, _, step_part = rest.partition(":")
        lo, hi = int(lo_part), int(hi_part)
        step = int(step_part) if step_part else 1
        if step < 1 or hi < lo:
            raise ConfigError(f"bad k grid {spec!r}")
        return tuple(range(lo, hi + 1, step))
    if "," in spec:
        return tuple(int(p) for p in spec.split(","))
    return (int(spec),)


def build_parser() -> _Parser:
    parser = _Parser(prog="dynsubmax", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one algorithm over a dataset stream")
    run.add_argument("--algo", required=True, choices=ALGORITHMS)
    run.add_argument("--dataset", required=True, help="edge-list file (whitespace pairs, # comments)")
    run.add_argument(
        "--stream",
        required=True,
        help="window:<int> (sliding window), degdel (delete by degree), "
        "degdel-solution (delete the top-degree solution node)",
    )
    run.add_argument("--k", required=True, help="cardinality budget: '20', '10,20,30', or '10..70:10'")
    run.add_argument("--eps", type=float, default=0.0, help="deletion laziness fraction in [0,1)")
    run.add_argument("--eps1", type=float, default=1.0, help="threshold ladder ratio")
    run.add_argument("--epsp", type=float, default=0.1, help="batch-selection error parameter")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--repeats", type=int, default=5)
    run.add_argument("--out", default="results", help="output directory")
    run.add_argument(
        "--peel-sample-cap",
        type=int,
        default=64,
        help="cap on mean-estimator samples per probe; 0 keeps the exact "
        "(very large) Chernoff-derived count",
    )
    run.add_argument("--no-plot", action="store_true", help="skip PNG figure rendering")
    return parser


def parse_args(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    ks = parse_k_grid(args.k)
    if any(k < 1 for k in ks):
        raise ConfigError("k must be >= 1")
    if not 0.0 <= args.eps < 1.0:
        raise ConfigError("eps must lie in [0, 1)")
    if args.repeats < 1:
        raise ConfigError("repeats must be >= 1")
    if not (args.stream.startswith("window:") or args.stream in ("degdel", "degdel-solution")):
        raise ConfigError(f"bad stream spec {args.stream!r}")
    if args.stream.startswith("window:"):
        if int(args.stream.split(":", 1)[1]) < 1:
            raise ConfigError("window must be >= 1")
    return RunConfig(
        algo=args.algo,
        dataset=args.dataset,
        stream=args.stream,
        ks=ks,
        eps=args.eps,
        eps1=args.eps1,
        epsp=args.epsp,
        seed=args.seed,
        repeats=args.repeats,
        out=args.out,
        sample_cap=None if args.peel_sample_cap == 0 else args.peel_sample_cap,
        plot=not args.no_plot,
    )


def _build_stream(config: RunConfig, graph):
    order = list(range(graph.node_count))
    random.Random(f"order:{config.seed}").shuffle(order)
    if config.stream.startswith("window:"):
        window = int(config.stream.split(":", 1)[1])
        return gen_window_stream(order, window)
    if config.stream == "degdel":
        return gen_degree_delete_stream(graph, random.Random(f"order:{config.seed}"))
    return SolutionAwareDeleteStream(tuple(order))


def _algo_tag(config: RunConfig) -> str:
    if config.algo in ("full", "simple"):
        return f"{config.algo}{str(config.eps).replace('.', '')}"
    return config.algo


def _run_cell(config: RunConfig, k: int):
    graph, _ = load_snap_edges(config.dataset)
    fn = CoverageFunction(graph)
    stream = _build_stream(config, graph)
    params = AlgoParams(
        lazy_eps=config.eps,
        ladder_eps=config.eps1,
        peel_eps=config.epsp,
        sample_cap=config.sample_cap,
    )
    result = run_experiment(config.algo, fn, stream, k, params, config.seed, config.repeats)
    return k, result.summary, result.blocks


def run_command(config: RunConfig) -> int:
    os.makedirs(config.out, exist_ok=True)
    workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_run_cell, [config] * len(config.ks), config.ks))
    else:
        cells = [_run_cell(config, k) for k in config.ks]
    cells.sort(key=lambda cell: cell[0])

    stem = os.path.splitext(os.path.basename(config.dataset))[0]
    stream_tag = config.stream.replace(":", "")
    prefix = os.path.join(config.out, f"{stem}_{stream_tag}_{_algo_tag(config)}")

    f_rows = [(k, s.mean_avg_value, s.std_avg_value) for k, s, _ in cells]
    oc_rows = [(k, s.mean_total_calls, s.std_total_calls) for k, s, _ in cells]
    write_csv(f"{prefix}_f.csv", ("k", "f", "stddev"), f_rows)
    write_csv(f"{prefix}_OC.csv", ("k", "OC", "stddev"), oc_rows)
    for k, _, blocks in cells:
        write_csv(f"{prefix}_f_ts_k{k}.csv", ("t", "f"), [(t, f) for t, f, _ in blocks])
        write_csv(f"{prefix}_OC_ts_k{k}.csv", ("t", "OC"), [(t, oc) for t, _, oc in blocks])

    window = config.stream.split(":", 1)[1] if config.stream.startswith("window:") else "-"
    manifest = {
        "dataset": config.dataset,
        "stream": config.stream,
        "window": window,
        "algo": config.algo,
        "k_grid": ",".join(str(k) for k in config.ks),
        "eps": config.eps,
        "eps1": config.eps1,
        "epsp": config.epsp,
        "sieve_eps": AlgoParams().sieve_eps,
        "seed": config.seed,
        "repeats": config.repeats,
        "peel_sample_cap": 0 if config.sample_cap is None else config.sample_cap,
        "order_seed": f"order:{config.seed}",
        "marginal_call_convention": "one call per evaluation; cached-base marginals cost one call",
        "unavailable_baselines": "sliding-window-specific algorithms are out of scope",
        "version": __version__,
    }
    write_manifest(f"{prefix}_manifest.txt", manifest)

    if config.plot:
        from .plotting import render_summary_figure, render_timestep_figure

        label = _algo_tag(config)
        render_summary_figure(f"{prefix}_f.png", label, f_rows, "f")
        render_summary_figure(f"{prefix}_OC.png", label, oc_rows, "oracle calls")
        for k, _, blocks in cells:
            render_timestep_figure(
                f"{prefix}_f_ts_k{k}.png", label, [(t, f) for t, f, _ in blocks], "f"
            )
            render_timestep_figure(
                f"{prefix}_OC_ts_k{k}.png", label, [(t, oc) for t, _, oc in blocks], "oracle calls"
            )

    for k, summary, _ in cells:
        print(
            f"k={k} mean_f={summary.mean_avg_value:.3f} "
            f"mean_calls={summary.mean_total_calls:.1f}"
        )
    return EXIT_OK


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
    except (_UsageError, ConfigError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run_command(config)
    except Exception as exc:  # surfaced with a stable exit code for scripts
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
