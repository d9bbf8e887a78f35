"""Command-line front end: ``pots-sim {run,scenario,theory,compare}``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from .core import ConfigError
from .harness import SimConfig, run_scenario, run_sweep
from .report import (
    ConfigParseError,
    RunManifest,
    compare_to_theory,
    emit_csv,
    emit_json,
    emit_plots,
    format_comparison,
    format_percent,
    load_config,
    new_manifest,
    read_csv,
    summary_row,
)
from .theory import predict

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_STRICT = 3
EXIT_PARSE = 4

log = logging.getLogger("pots_sim")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _config(args) -> SimConfig:
    config = load_config(args.config) if args.config else SimConfig()
    if args.seed is not None:
        config.base_seed = args.seed
    for key in ("rounds", "repetitions"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    config.validate()
    return config


def _report_comparison(summaries, config, strict: bool) -> int:
    report = compare_to_theory(summaries, config.repetitions, config.rounds)
    flagged = [c for c in report if c.flagged]
    print(format_comparison(report))
    print(f"{len(flagged)} of {len(report)} cells flagged (|z| > 4)")
    return EXIT_STRICT if strict and flagged else EXIT_OK


def cmd_run(args) -> int:
    config = _config(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = new_manifest(config, _now())
    t0 = time.perf_counter()
    summaries = run_sweep(config, threads=args.threads)
    log.info("sweep finished in %.1f s", time.perf_counter() - t0)

    csv_path, json_path = out / "results.csv", out / "results.json"
    emit_csv(summaries, csv_path)
    emit_json(summaries, json_path, config)
    manifest.outputs = {"csv": csv_path.name, "json": json_path.name}
    status = EXIT_OK
    if not args.no_plots:
        written, warnings = emit_plots(summaries, out, log_scale=args.log_scale)
        for p in written:
            manifest.outputs[p.stem] = p.name
        if warnings and args.strict:
            status = EXIT_STRICT
    manifest.finished = _now()
    manifest.write(out / "manifest.json")
    status = max(status, _report_comparison(summaries, config, args.strict))
    return status


def cmd_scenario(args) -> int:
    config = _config(args)
    scenario = config.scenario(args.team_size, args.alpha)
    ordinal = config.ordinal_of(args.team_size, args.alpha)
    if ordinal is None:
        ordinal = 0
        log.info("cell not in the configured grid; using scenario ordinal 0")
    s = run_scenario(scenario, config, ordinal, threads=args.threads)
    row = summary_row(s)
    for key, value in row.items():
        if key != "nce":
            print(f"{key:>26}: {value}")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit_csv([s], out / "scenario.csv")
    return EXIT_OK


def cmd_theory(args) -> int:
    config = _config(args)
    print(f"{'N':>4} {'alpha':>5} {'alpha^N %':>12} {'exact %':>12}")
    for n in config.team_sizes:
        for a in config.attacker_ratios:
            t = predict(a, n, config.total_nodes)
            print(
                f"{n:>4} {a:>5.2f} {format_percent(100 * t.p_independent):>12} "
                f"{format_percent(t.expected_win_rate_percent):>12}"
            )
    return EXIT_OK


def cmd_compare(args) -> int:
    csv_path = Path(args.csv)
    rows = read_csv(csv_path)
    manifest_path = csv_path.with_name("manifest.json")
    if args.config is None and manifest_path.exists():
        config = RunManifest.read(manifest_path).sim_config()
    else:
        config = _config(args)
    return _report_comparison(rows, config, args.strict)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config file (see README)")
    common.add_argument("--seed", type=int, help="override base_seed")
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument("--strict", action="store_true", help="nonzero exit on flagged cells or skipped plots")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="pots-sim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="full grid sweep")
    run.add_argument("--out-dir", default="results")
    run.add_argument("--no-plots", action="store_true")
    run.add_argument("--log-scale", action="store_true", help="log y-axis on the win-rate plot")
    run.add_argument("--rounds", type=int)
    run.add_argument("--repetitions", type=int)
    run.set_defaults(func=cmd_run)

    sc = sub.add_parser("scenario", parents=[common], help="single (N, alpha) cell")
    sc.add_argument("--team-size", type=int, required=True)
    sc.add_argument("--alpha", type=float, required=True)
    sc.add_argument("--out-dir")
    sc.add_argument("--rounds", type=int)
    sc.add_argument("--repetitions", type=int)
    sc.set_defaults(func=cmd_scenario)

    th = sub.add_parser("theory", parents=[common], help="print the analytic table")
    th.set_defaults(func=cmd_theory)

    cmp_ = sub.add_parser("compare", parents=[common], help="z-test a results CSV against theory")
    cmp_.add_argument("csv")
    cmp_.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigParseError as exc:
        print(f"config parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
