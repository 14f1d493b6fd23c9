"""Command-line interface.

Subcommands:
    run     one run per (epsilon, nu) pair of a config, records to disk
    sweep   a named sweep (interaction | ball | nu | uniformity) with its fit
    report  aggregate records in a directory into tables, plot data and figures
    verify  execute the acceptance suite, one pass/fail line per criterion

Exit status: 0 success, 1 criterion failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys
from dataclasses import replace

from .errors import BlowUpError, ConfigurationError, DomainError, UsageError

EXIT_OK = 0
EXIT_CRITERION_FAILURE = 1
EXIT_CONFIG_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alfvenlab",
        description="Desk-scale Elsasser-form MHD laboratory: runs, sweeps, "
                    "scaling verification.")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--config", default="default",
                       help="path to a TOML config, or a named config "
                            "(default, interaction, ball, nu, uniformity, large_data)")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the initial-data seed")
        p.add_argument("--threads", type=int, default=None,
                       help="parallel worker count across sweep points")

    p_run = sub.add_parser("run", help="single run from a config file")
    common(p_run)

    p_sweep = sub.add_parser("sweep", help="named sweep")
    p_sweep.add_argument("name", choices=["interaction", "ball", "nu", "uniformity"])
    common(p_sweep)

    p_report = sub.add_parser("report", help="aggregate records into tables and figures")
    p_report.add_argument("--out", default="runs", help="directory holding records")

    p_verify = sub.add_parser("verify", help="run the acceptance suite")
    common(p_verify)
    return parser


def _load_config(args):
    from . import experiments

    if os.path.exists(args.config):
        cfg = experiments.load_config(args.config)
    else:
        cfg = experiments.named_config(args.config)
    overrides = {}
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.seed is not None:
        overrides["init"] = replace(cfg.init, seed=args.seed)
    return replace(cfg, **overrides) if overrides else cfg


def _cmd_run(args) -> int:
    from . import experiments

    cfg = _load_config(args)
    os.makedirs(cfg.out_dir, exist_ok=True)
    for eps in cfg.epsilon_list:
        for nu in cfg.nu_list:
            rec = experiments.run_single(cfg, eps, nu)
            rec.save(cfg.out_dir)
            status = "diverged at t*=%.3g" % rec.blowup_t_star if rec.diverged else "ok"
            print(f"run eps={eps:g} nu={nu:g}: {status}, "
                  f"E0={rec.initial_energy:.6g}, wall {rec.wall_clock_s:.1f}s")
    print(f"records written to {cfg.out_dir}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    from . import experiments

    cfg = _load_config(args)
    os.makedirs(cfg.out_dir, exist_ok=True)
    summary = {"sweep": args.name, "config_hash": cfg.config_hash(),
               "format_version": experiments.FORMAT_VERSION}
    if args.name == "interaction":
        fit, records = experiments.sweep_interaction_vanishing(cfg)
        summary["fit"] = fit.to_json_dict()
    elif args.name == "ball":
        fit, records, floor = experiments.sweep_ball_decay(cfg)
        summary["fit"] = fit.to_json_dict()
        summary["linear_ball_floor"] = floor
    elif args.name == "nu":
        fit, rows, ratios, data_hash = experiments.sweep_nu_limit(cfg)
        summary["fit"] = fit.to_json_dict()
        summary["difference_rows"] = rows
        summary["ratio_series"] = {str(k): v for k, v in ratios.items()}
        summary["data_hash"] = data_hash
        records = []
    else:  # uniformity
        ratios, records = experiments.sweep_uniformity(cfg)
        summary["ratios"] = {str(k): v for k, v in ratios.items()}
        vals = list(ratios.values())
        summary["spread"] = max(vals) / min(vals) if vals else None

    for rec in records:
        rec.save(cfg.out_dir)
    path = os.path.join(cfg.out_dir, f"sweep_{args.name}.json")
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=1)
    if "fit" in summary:
        print(f"{args.name} sweep: exponent {summary['fit']['exponent']:.3f}, "
              f"r^2 {summary['fit']['r_squared']:.4f}")
    if "spread" in summary:
        print(f"uniformity spread: {summary['spread']:.3f}")
    print(f"sweep summary written to {path}")
    return EXIT_OK


def _cmd_report(args) -> int:
    from . import plots
    from .experiments import SweepRecord

    record_files = sorted(glob.glob(os.path.join(args.out, "run_*.json")))
    if not record_files:
        print(f"no records found in {args.out!r}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    records = []
    for path in record_files:
        with open(path) as fh:
            records.append(SweepRecord.from_json_dict(json.load(fh)))
    records.sort(key=lambda r: (r.epsilon, r.nu))

    # aggregate table: one row per record with the derived scalars
    table_path = os.path.join(args.out, "report_summary.csv")
    with open(table_path, "w") as fh:
        fh.write("epsilon,nu,amplitude,E0,max_error_metric,max_energy_ratio,"
                 "ball_sup_final,diverged,config_hash,data_hash\n")
        for rec in records:
            err = max(rec.error_metric_series()) if rec.error_reports else 0.0
            ratio = max(rec.energy_ratio_series()) if rec.reports else 0.0
            ball = rec.reports[-1].ball_sup if rec.reports else 0.0
            fh.write(f"{rec.epsilon:g},{rec.nu:g},{rec.amplitude:g},"
                     f"{rec.initial_energy!r},{err!r},{ratio!r},{ball!r},"
                     f"{int(rec.diverged)},{rec.config_hash},{rec.data_hash}\n")

    # plot-ready per-record series (delimited) plus rendered figures
    series_path = os.path.join(args.out, "report_series.csv")
    with open(series_path, "w") as fh:
        fh.write("epsilon,nu,t_star,E_k,W_k,D_k,decay_sup_plus,decay_sup_minus,"
                 "ball_sup,error_metric\n")
        for rec in records:
            errs = rec.error_metric_series() if rec.error_reports else None
            for i, rep in enumerate(rec.reports):
                e = errs[i] if errs is not None else 0.0
                fh.write(f"{rec.epsilon:g},{rec.nu:g},{rep.t_star!r},"
                         f"{rep.energy!r},{rep.weighted!r},{rep.dissipation!r},"
                         f"{rep.decay_sup_plus!r},{rep.decay_sup_minus!r},"
                         f"{rep.ball_sup!r},{e!r}\n")

    figures = plots.render_record_figures(records, args.out)
    print(f"wrote {table_path}, {series_path} and {len(figures)} figures")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from . import acceptance

    results = acceptance.run_all(printer=print)
    n_fail = sum(1 for r in results if not r.passed)
    print(f"{len(results) - n_fail}/{len(results)} criteria passed")
    return EXIT_OK if n_fail == 0 else EXIT_CRITERION_FAILURE


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return EXIT_CONFIG_ERROR if exc.code not in (0,) else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG_ERROR
    handler = {"run": _cmd_run, "sweep": _cmd_sweep,
               "report": _cmd_report, "verify": _cmd_verify}[args.command]
    try:
        return handler(args)
    except (ConfigurationError, DomainError, UsageError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except BlowUpError as exc:
        print(f"run diverged: {exc}", file=sys.stderr)
        return EXIT_CRITERION_FAILURE


if __name__ == "__main__":
    sys.exit(main())
