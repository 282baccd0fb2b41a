"""Command-line front end.

Subcommands: run (execute the experiment and write report files), stats
(statistical comparisons from a JSON report), boxplot (five-number summaries
and an SVG), extended (larger per-problem sample with t-tests), problems
(catalog), selftest (bundled CDF oracle vectors).

Exit codes: 0 success, 2 configuration error, 3 I/O failure, 4 missing data.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import reporting, stats as stats_mod
from .benchmarks import PenaltyConfig, make_problem, problem_names
from .config import ConfigError, ExperimentConfig, PRESETS, config_to_text, load_config
from .tuning import ProblemSpec, TuningPlan, extended_runs, run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_MISSING = 4

ALL_TESTS = ("t", "f", "friedman", "anova")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fatune",
        description="Firefly-algorithm parameter tuning workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        p.add_argument("--config", metavar="PATH", help="configuration file")
        p.add_argument("--preset", choices=sorted(PRESETS), help="scale preset")
        p.add_argument("--seed", type=int, metavar="U64", help="master seed")
        p.add_argument("--methods", metavar="LIST", help="comma-separated subset of MC,QMC,LHS")
        p.add_argument("--problems", metavar="LIST", help="comma-separated problems, name[:dim]")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--threads", type=int, default=1, metavar="N", help="worker processes")

    run_p = sub.add_parser("run", help="run the tuning experiment and write report files")
    add_config_flags(run_p)

    stats_p = sub.add_parser("stats", help="statistical comparisons from a JSON report")
    stats_p.add_argument("--report", required=True, metavar="PATH", help="report.json from `run`")
    stats_p.add_argument("--tests", metavar="LIST", default=",".join(ALL_TESTS),
                         help=f"comma-separated subset of {','.join(ALL_TESTS)}")
    stats_p.add_argument("--t-kind", choices=("welch", "paired"), default="welch",
                         help="two-sample statistic for the t tables")
    stats_p.add_argument("--out", metavar="DIR", help="output directory (default: report's directory)")

    box_p = sub.add_parser("boxplot", help="boxplot data and SVG from a JSON report")
    box_p.add_argument("--report", required=True, metavar="PATH")
    box_p.add_argument("--out", metavar="DIR", help="output directory (default: report's directory)")

    ext_p = sub.add_parser("extended", help="larger per-problem sample with pairwise t-tests")
    add_config_flags(ext_p)
    ext_p.add_argument("--problem", required=True, metavar="NAME", help="problem name[:dim]")
    ext_p.add_argument("--n", type=int, default=30, metavar="N", help="number of settings per method")

    sub.add_parser("problems", help="list the benchmark catalog")
    sub.add_parser("selftest", help="check the bundled CDF oracle vectors and worked examples")
    return parser


def _overrides_from_args(args) -> dict:
    overrides = {}
    if args.preset:
        overrides[("experiment", "preset")] = args.preset
    if args.seed is not None:
        overrides[("experiment", "master_seed")] = str(args.seed)
    if args.methods:
        overrides[("experiment", "methods")] = args.methods
    if args.problems:
        overrides[("experiment", "problems")] = args.problems
    if args.out:
        overrides[("experiment", "output_dir")] = args.out
    return overrides


def _plan_from_config(cfg: ExperimentConfig) -> TuningPlan:
    return TuningPlan(
        samplers=cfg.methods,
        problems=cfg.problems,
        ranges=cfg.ranges,
        num_settings=cfg.num_settings,
        calls_per_setting=cfg.calls_per_setting,
        population_size=cfg.population,
        max_iterations=cfg.iterations,
        alpha0=cfg.alpha0,
        penalty=PenaltyConfig(cfg.penalty_lambda),
        master_seed=cfg.master_seed,
        redraw_per_problem=cfg.redraw_per_problem,
    )


def cmd_run(args) -> int:
    cfg = load_config(args.config, overrides=_overrides_from_args(args))
    plan = _plan_from_config(cfg)
    report = run_experiment(plan, threads=max(args.threads, 1))
    payload = reporting.report_payload(report, cfg)

    out_dir = cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    reporting.write_report_json(os.path.join(out_dir, "report.json"), payload)
    for method in payload["methods"]:
        reporting.write_text_atomic(
            os.path.join(out_dir, f"objective_{method}.csv"),
            reporting.objective_csv(payload, method),
        )
    for parameter in reporting.PARAMETERS:
        reporting.write_text_atomic(
            os.path.join(out_dir, f"best_{parameter}.csv"),
            reporting.best_param_csv(payload, parameter),
        )
    reporting.write_text_atomic(os.path.join(out_dir, "config_resolved.ini"), config_to_text(cfg))

    print(f"report: {os.path.join(out_dir, 'report.json')}")
    print(f"content hash: {payload['content_hash']}")
    print(f"{'method':8s} {'problem':12s} {'mean':>13s} {'sigma':>13s} {'best':>13s}")
    for method in payload["methods"]:
        for prob in (p["name"] for p in payload["problems"]):
            cell = payload["results"][method][prob]
            sigma = "-" if cell["sigma"] is None else f"{cell['sigma']:.4e}"
            print(
                f"{method:8s} {prob:12s} {cell['mean']:13.4e} {sigma:>13s} {cell['best_value']:13.4e}"
            )
    return EXIT_OK


def _load_report_or_exit(path: str) -> dict:
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    return reporting.load_report(path)


def cmd_stats(args) -> int:
    try:
        payload = _load_report_or_exit(args.report)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read report: {exc}", file=sys.stderr)
        return EXIT_MISSING
    tests = tuple(t.strip() for t in args.tests.split(",") if t.strip())
    unknown = [t for t in tests if t not in ALL_TESTS]
    if unknown:
        print(f"error: unknown tests: {', '.join(unknown)}", file=sys.stderr)
        return EXIT_CONFIG
    if "results" not in payload or not payload.get("methods"):
        print("error: report carries no results", file=sys.stderr)
        return EXIT_MISSING
    if len(payload["methods"]) < 2:
        print("error: statistical comparison needs at least two methods", file=sys.stderr)
        return EXIT_MISSING

    tables = reporting.compute_stats(payload, tests, t_kind=args.t_kind)
    out_dir = args.out or os.path.dirname(os.path.abspath(args.report))
    files = reporting.stats_csvs(tables)
    for name, text in files.items():
        reporting.write_text_atomic(os.path.join(out_dir, name), text)
        print(f"wrote {os.path.join(out_dir, name)}")
    if "t" in tables:
        print("t-test p-values (objectives):")
        for prob in tables["problems"]:
            cells = "  ".join(
                f"{a}-{b}: {tables['t'][prob][(a, b)]:.4f}" for a, b in tables["pairs"]
            )
            print(f"  {reporting.alias(prob):3s} {cells}")
    return EXIT_OK


def cmd_boxplot(args) -> int:
    try:
        payload = _load_report_or_exit(args.report)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read report: {exc}", file=sys.stderr)
        return EXIT_MISSING
    if "results" not in payload:
        print("error: report carries no results", file=sys.stderr)
        return EXIT_MISSING
    boxes = reporting.boxplot_data(payload)
    if not boxes:
        print("error: no boxes could be built from the report", file=sys.stderr)
        return EXIT_MISSING
    out_dir = args.out or os.path.dirname(os.path.abspath(args.report))
    csv_path = os.path.join(out_dir, "boxplot.csv")
    svg_path = os.path.join(out_dir, "boxplot.svg")
    reporting.write_text_atomic(csv_path, reporting.boxplot_csv(boxes))
    reporting.write_text_atomic(svg_path, reporting.boxplot_svg(boxes, payload["methods"]))
    print(f"wrote {csv_path}")
    print(f"wrote {svg_path}")
    return EXIT_OK


def cmd_extended(args) -> int:
    cfg = load_config(args.config, overrides=_overrides_from_args(args))
    if args.n < 2:
        raise ConfigError("--n: extended runs need at least 2 settings")
    name, _, dim_text = args.problem.partition(":")
    name = name.strip().lower()
    if name not in problem_names():
        raise ConfigError(f"--problem: unknown problem {name!r}")
    spec = ProblemSpec(name, int(dim_text) if dim_text else None)
    plan = _plan_from_config(cfg)
    vectors = extended_runs(plan, spec, num_settings=args.n, threads=max(args.threads, 1))

    out_dir = cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"extended_{name}.csv")
    reporting.write_text_atomic(csv_path, reporting.extended_csv(vectors))
    print(f"wrote {csv_path}")
    methods = list(vectors)
    for m1, m2 in reporting.method_pairs(methods):
        res = stats_mod.two_sample_t(vectors[m1], vectors[m2])
        print(f"t-test {m1} vs {m2}: p = {res.p_value:.4f}")
    return EXIT_OK


def cmd_problems(_args) -> int:
    print(f"{'name':12s} {'D':>3s} {'bounds':28s} {'constraints':>11s} {'known best':>12s}")
    for name in problem_names():
        prob = make_problem(name)
        lo, hi = prob.lower_bounds, prob.upper_bounds
        if np.all(lo == lo[0]) and np.all(hi == hi[0]):
            bounds = f"[{lo[0]:g}, {hi[0]:g}]^{prob.dimension}"
        else:
            bounds = " x ".join(f"[{a:g},{b:g}]" for a, b in zip(lo, hi))
        best = "-" if prob.known_best_value is None else f"{prob.known_best_value:g}"
        print(f"{name:12s} {prob.dimension:3d} {bounds:28s} {len(prob.constraints):11d} {best:>12s}")
    return EXIT_OK


def cmd_selftest(_args) -> int:
    failures = 0
    results = stats_mod.verify_oracle_vectors()
    worst = max(err for _, err, _ in results)
    bad = [label for label, _, ok in results if not ok]
    print(f"oracle vectors: {len(results) - len(bad)}/{len(results)} within tolerance "
          f"(worst abs error {worst:.2e})")
    failures += len(bad)
    for label in bad:
        print(f"  FAIL {label}")

    checks = [
        ("two_sample_t worked example", _check_two_sample),
        ("paired_t worked example", _check_paired),
        ("f_test worked example", _check_f_test),
        ("friedman worked example", _check_friedman),
    ]
    for label, check in checks:
        try:
            check()
            print(f"{label}: ok")
        except AssertionError as exc:
            print(f"{label}: FAIL ({exc})")
            failures += 1
    return EXIT_OK if failures == 0 else 1


def _check_two_sample():
    res = stats_mod.two_sample_t([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert abs(res.statistic - (-1.0)) < 1e-12, res.statistic
    assert abs(res.df - 8.0) < 1e-12, res.df
    assert abs(res.p_value - 0.3466) < 1e-3, res.p_value


def _check_paired():
    res = stats_mod.paired_t([1, -1, 2, -2, 0, 3], [0, 0, 0, 0, 0, 0])
    assert abs(res.statistic - 0.6547) < 5e-4, res.statistic
    assert abs(res.p_value - 0.5415) < 1e-3, res.p_value


def _check_f_test():
    x = np.arange(10, dtype=float) * 2.0
    y = np.arange(10, dtype=float)
    res = stats_mod.f_test_variance(x, y)
    assert abs(res.statistic - 4.0) < 1e-12, res.statistic
    assert res.df == (9.0, 9.0), res.df
    assert abs(res.p_value - 0.051) < 2e-3, res.p_value


def _check_friedman():
    data = np.tile([1.0, 2.0, 3.0], (10, 1))
    res = stats_mod.friedman(data)
    assert abs(res.statistic - 20.0) < 1e-12, res.statistic
    assert abs(res.p_value - 4.54e-5) < 1e-6, res.p_value


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": cmd_run,
        "stats": cmd_stats,
        "boxplot": cmd_boxplot,
        "extended": cmd_extended,
        "problems": cmd_problems,
        "selftest": cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def run_main():  # console-script entry point
    raise SystemExit(main())


if __name__ == "__main__":
    run_main()
