"""
Command-line front end.

    private-gossip graph gen --graph rgg --n 100 --radius auto --out rgg.txt
    private-gossip run --graph cycle --n 10 --sigma 1 --phi 0.98 --iters 20000 --seeds 100 --out trace.csv
    private-gossip sweep --graph rgg --n 100 --phi 0.5,0.9,0.995 --iters 100000 --seeds 20 --out fig/
    private-gossip theory --graph cycle --n 10 --phi 0.98

Every subcommand accepts --config FILE (key = value lines); flags override
the file. Exit status: 0 success, 1 run-time failure, 2 usage or
configuration error.
"""

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from private_gossip.harness.config import build_config, load_config_file, merge_settings, split_runtime
from private_gossip.harness.experiment import resolve_topology, run_experiment, sweep
from private_gossip.harness.fitting import fit_rate
from private_gossip.harness.output import emit_csv, emit_svg
from private_gossip.harness.schemas import Trace
from private_gossip.theory.bounds import corollary_bound, theorem_bound
from private_gossip.theory.duality import initial_dual_gap
from private_gossip.theory.rates import corollary_schedule, rate_report, rho
from private_gossip.topology.edgelist import format_edge_list, write_edge_list
from private_gossip.topology.spectral import algebraic_connectivity
from private_gossip.utils.errors import ConfigError, GossipError, OutputError
from private_gossip.utils.logging import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# argparse dests that are not experiment settings
_CONTROL = {"command", "graph_command", "config", "verbose", "quiet", "handler", "gamma", "horizon", "csv"}


def _add_topology(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("topology")
    group.add_argument("--graph", choices=["cycle", "path", "complete", "rgg", "file"], help="topology kind")
    group.add_argument("--n", help="vertex count")
    group.add_argument("--radius", help="RGG radius, or 'auto' for sqrt(log n / n)")
    group.add_argument("--graph-seed", help="first RGG seed to try")
    group.add_argument("--edges", help="edge-list file for --graph file")


def _add_noise(parser: argparse.ArgumentParser, phi_help: str) -> None:
    group = parser.add_argument_group("noise")
    group.add_argument("--sigma", help="noise standard deviation (scalar or comma list)")
    group.add_argument("--sigma2", help="noise variance (scalar or comma list)")
    group.add_argument("--phi", help=phi_help)


def _add_sampling(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("sampling")
    group.add_argument("--initial", choices=["uniform", "ramp", "explicit"], help="private value rule")
    group.add_argument("--values", help="explicit private values (comma list)")
    group.add_argument("--iters", help="iterations per run")
    group.add_argument("--seeds", help="number of runs")
    group.add_argument("--seed", help="seed of the first run")
    group.add_argument("--stride", help="record every stride-th iteration")
    group.add_argument("--window", help="trailing fraction used for rate fits")
    group.add_argument("--workers", help="worker processes (default: GOSSIP_THREADS or all cores)")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    parser.add_argument("-q", "--quiet", action="store_true", help="errors only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="private-gossip",
        description="Private randomized gossip via controlled noise insertion: simulator and rate calculator.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    graph = commands.add_parser("graph", help="topology utilities")
    graph_commands = graph.add_subparsers(dest="graph_command", required=True)
    gen = graph_commands.add_parser("gen", help="generate a topology and write its edge list")
    _add_common(gen)
    _add_topology(gen)
    gen.add_argument("--out", help="edge-list output path (default: print to stdout)")
    gen.set_defaults(handler=cmd_graph_gen)

    run = commands.add_parser("run", help="Monte Carlo run of one configuration")
    _add_common(run)
    _add_topology(run)
    _add_noise(run, "decay rate: scalar, comma list per node, 'threshold' or 'corollary:<gamma>'")
    _add_sampling(run)
    run.add_argument("--out", help="CSV output path (default trace.csv)")
    run.add_argument("--svg", help="SVG output path (default: CSV path with .svg suffix)")
    run.set_defaults(handler=cmd_run)

    grid = commands.add_parser("sweep", help="one run per decay rate, shared graph and seeds")
    _add_common(grid)
    _add_topology(grid)
    _add_noise(grid, "comma list of decay rates to sweep")
    _add_sampling(grid)
    grid.add_argument("--out", help="output directory (one CSV per phi plus sweep.svg)")
    grid.set_defaults(handler=cmd_sweep)

    theory = commands.add_parser("theory", help="print rates, thresholds and regime")
    _add_common(theory)
    _add_topology(theory)
    _add_noise(theory, "decay rate: scalar, comma list per node, 'threshold' or 'corollary:<gamma>'")
    theory.add_argument("--seed", help="seed of the private values used for --horizon")
    theory.add_argument("--initial", choices=["uniform", "ramp", "explicit"], help="private value rule")
    theory.add_argument("--values", help="explicit private values (comma list)")
    theory.add_argument("--gamma", type=float, help="also evaluate the corollary schedule with this gamma")
    theory.add_argument("--horizon", type=int, help="evaluate the bounds at this iteration count")
    theory.add_argument("--csv", help="write per-node rates to this CSV file")
    theory.set_defaults(handler=cmd_theory)

    return parser


def _settings(args: argparse.Namespace) -> Dict[str, Any]:
    cli = {k: v for k, v in vars(args).items() if k not in _CONTROL}
    file_settings = load_config_file(args.config) if args.config else {}
    return merge_settings(file_settings, cli)


def _runtime_config(runtime: Dict[str, Any]) -> Dict[str, Any]:
    return {"configurable": runtime} if runtime else {}


def _fit_summary(trace: Trace, window: float) -> str:
    private = fit_rate(trace, window)
    baseline = fit_rate(trace, window, column="baseline")
    text = f"fitted tail rate {private.rate:.6f} (baseline {baseline.rate:.6f})"
    if private.degenerate:
        text += " [degenerate fit]"
    return text


def cmd_graph_gen(args: argparse.Namespace) -> int:
    settings = _settings(args)
    split_runtime(settings)
    settings.pop("out", None)
    cfg = build_config(settings)
    g, graph_seed = resolve_topology(cfg)
    spectrum = algebraic_connectivity(g)
    if args.out:
        write_edge_list(g, args.out)
        print(f"📝 Wrote edge list to {args.out}")
    else:
        sys.stdout.write(format_edge_list(g))
    alpha = spectrum.algebraic_connectivity
    summary = f"📊 n={g.n} m={g.m} alpha={alpha:.10g} rho={rho(g, alpha):.10g} graph_seed={graph_seed}"
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    settings = _settings(args)
    runtime = split_runtime(settings)
    settings.setdefault("out", "trace.csv")
    cfg = build_config(settings)
    svg = cfg.svg or str(Path(cfg.out).with_suffix(".svg"))

    trace = run_experiment(cfg, _runtime_config(runtime))
    emit_csv(trace, cfg.out)
    emit_svg([trace], svg, title=f"{cfg.graph} n={trace.meta['n']}")

    print(f"✅ {trace.label}: {_fit_summary(trace, cfg.fit_window)}, regime {trace.meta['regime']}")
    print(f"📝 Wrote {cfg.out}")
    print(f"📝 Wrote {svg}")
    return EXIT_OK


def _phi_filename(phi: Any) -> str:
    return f"phi_{phi}.csv".replace(":", "_")


def cmd_sweep(args: argparse.Namespace) -> int:
    settings = _settings(args)
    runtime = split_runtime(settings)
    phis = settings.pop("phi", None)
    if phis is None:
        raise ConfigError("sweep needs --phi with at least one value")
    phis = phis if isinstance(phis, list) else [phis]
    out_dir = Path(settings.pop("out", None) or "sweep")
    cfg, *_ = [build_config({**settings, "phi": phi}) for phi in phis]

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory: {exc.strerror}", str(out_dir)) from exc

    traces = sweep(cfg, phis, _runtime_config(runtime))
    for phi, trace in zip(phis, traces):
        path = out_dir / _phi_filename(phi)
        emit_csv(trace, path)
        print(f"✅ {trace.label}: {_fit_summary(trace, cfg.fit_window)}, regime {trace.meta['regime']}")
        print(f"📝 Wrote {path}")
    svg = out_dir / "sweep.svg"
    emit_svg(traces, svg, title=f"{cfg.graph} n={traces[0].meta['n']}")
    print(f"📝 Wrote {svg}")
    return EXIT_OK


def cmd_theory(args: argparse.Namespace) -> int:
    settings = _settings(args)
    split_runtime(settings)
    cfg = build_config(settings)
    g, graph_seed = resolve_topology(cfg)
    params = cfg.noise_params(g)
    report = rate_report(g, params)
    if args.gamma is not None:
        corollary_schedule(g, args.gamma)

    rows = [
        ("graph", f"{cfg.graph} n={g.n} m={g.m}" + (f" graph_seed={graph_seed}" if cfg.graph == "rgg" else "")),
        ("alpha", f"{report.alpha:.12g}"),
        ("rho", f"{report.rho:.12g}"),
        ("noise_rate", ", ".join(f"{q:.12g}" for q in sorted(set(report.noise_rates)))),
        ("dominant_rate", f"{report.dominant_rate:.12g}"),
        ("dominant_set", ",".join(str(i) for i in report.dominant_set)),
        ("threshold_phi", ", ".join(f"{f:.12g}" for f in sorted(set(report.threshold_phis)))),
        ("regime", report.regime),
    ]
    if args.horizon is not None:
        gap0 = initial_dual_gap(cfg.initial_values(g.n, cfg.base_seed))
        rows.append(("gap0", f"{gap0:.12g}"))
        rows.append((f"theorem_bound@{args.horizon}", f"{theorem_bound(args.horizon, g, params, gap0).values[-1]:.12g}"))
        if args.gamma is not None:
            curve = corollary_bound(args.horizon, g, params, gap0, args.gamma)
            rows.append((f"corollary_bound@{args.horizon}", f"{curve.values[-1]:.12g}"))
    if args.gamma is not None:
        rows.append(("corollary_rate", f"{1 - min(report.alpha / (2 * g.m), args.gamma / g.m):.12g}"))

    width = max(len(key) for key, _ in rows) + 2
    for key, value in rows:
        print(f"{key:<{width}}{value}")

    if args.csv:
        try:
            with open(args.csv, "w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(["node", "degree", "sigma2", "phi", "noise_rate", "threshold_phi"])
                for i in range(g.n):
                    writer.writerow([
                        i, g.degrees[i], format(params.sigma2[i], ".17g"), format(params.phi[i], ".17g"),
                        format(report.noise_rates[i], ".17g"), format(report.threshold_phis[i], ".17g"),
                    ])
        except OSError as exc:
            raise OutputError(f"cannot write CSV: {exc.strerror}", args.csv) from exc
        print(f"📝 Wrote {args.csv}")
    return EXIT_OK


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    configure_logging(-1 if args.quiet else args.verbose)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GossipError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
