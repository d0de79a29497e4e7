"""Command-line front end: solve, bench, trace, and check subcommands.

Exit codes: 0 success, 1 failed derivative check, 2 rejected starting point,
3 solver did not converge, 64 usage error. The ARCOPT_CONFIG environment
variable may point at a JSON file of default flag values; explicit flags
win over it.

Machine output is versioned: JSON artifacts carry a "schema" field and CSV
files start with a "# schema=..." comment line. Identical command lines
produce identical artifacts except for the Seconds fields.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

import numpy as np

from . import kkt
from .arc import RHS_MODES, eval_arc
from .errors import ArcoptError, InitializationError, UnknownProblemError
from .model import check_derivatives
from .problems import available_names, get_problem
from .solver import CONVERGED, SolveReport, SolverConfig, solve

ENV_CONFIG = "ARCOPT_CONFIG"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_START = 2
EXIT_NOT_CONVERGED = 3
EXIT_USAGE = 64

TRACE_SAMPLES = 50

# named benchmark sets; "bench" also accepts comma-separated problem names
BENCH_SETS = {
    "all": lambda: available_names(),
    "hs-subset": lambda: ["HS16", "HS17", "HS19", "HS23", "HS32", "HS64",
                          "HS66", "HS71", "HS80", "HS108"],
    "table": lambda: [n for n in available_names() if n != "HS13" and n != "WB"],
    "special": lambda: ["HS13", "WB"],
}

_CONFIG_KEYS = ("variant", "eps", "max_iter", "sigma_bar", "delta1", "rho",
                "rhs", "jobs")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"{text} is not > 0")
    return v


def _open_unit(text: str) -> float:
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1)")
    return v


def _rho_range(text: str) -> float:
    v = float(text)
    if not 0.0 < v < 0.5:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 0.5)")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} is not >= 1")
    return v


def _add_solver_flags(p: argparse.ArgumentParser):
    # None defaults let per-problem config_overrides slot in underneath;
    # resolution order is explicit flag > ARCOPT_CONFIG > entry > default.
    p.add_argument("--variant", type=int, choices=(1, 2, 3), default=3,
                   help="algorithm variant (default 3)")
    p.add_argument("--eps", type=_positive, default=None,
                   help="convergence tolerance on the merit (default 1e-8)")
    p.add_argument("--max-iter", type=_positive_int, default=None,
                   help="iteration cap (default 500)")
    p.add_argument("--sigma-bar", type=_positive, default=None,
                   help="lower centering threshold (default 1e-3)")
    p.add_argument("--delta1", type=_open_unit, default=None,
                   help="inequality feasibility margin factor (default 0.01)")
    p.add_argument("--rho", type=_rho_range, default=None,
                   help="merit decrease fraction in (0, 0.5) (default 0.25)")
    p.add_argument("--rhs", choices=RHS_MODES, default=None,
                   help="second-order right-hand side mode "
                        "(default: variant's own)")


_FLAG_DEFAULTS = {"epsilon": 1e-8, "max_iter": 500, "sigma_bar": 1e-3,
                  "delta1": 0.01, "rho": 0.25}


def _config_from_args(args, entry=None) -> SolverConfig:
    """Build a SolverConfig from parsed flags plus a problem's overrides."""
    values = dict(_FLAG_DEFAULTS)
    if entry is not None:
        values.update(entry.config_overrides)
        if entry.eps_override is not None:
            values["epsilon"] = entry.eps_override
    for flag, key in (("eps", "epsilon"), ("max_iter", "max_iter"),
                      ("sigma_bar", "sigma_bar"), ("delta1", "delta1"),
                      ("rho", "rho")):
        given = getattr(args, flag)
        if given is not None:
            values[key] = given
    return SolverConfig(variant=args.variant, rhs_mode=args.rhs, **values)


def _summary_line(report: SolveReport) -> str:
    return (f"Prob {report.problem}  Obj {report.objective:.10g}  "
            f"Iter {report.niter}  Seconds {report.seconds:.3f}  "
            f"ConvPhi {report.phi:.5e}  Status {report.status}")


def _artifact(report: SolveReport, cfg: SolverConfig) -> dict:
    return {
        "schema": "arcopt.run/1",
        "problem": report.problem,
        "variant": report.variant,
        "config": {
            "epsilon": cfg.epsilon, "max_iter": cfg.max_iter,
            "delta1": cfg.delta1, "delta2": cfg.delta2, "rho": cfg.rho,
            "sigma_bar": cfg.sigma_bar, "rhs_mode": cfg.effective_rhs_mode,
        },
        "status": report.status,
        "message": report.message,
        "objective": report.objective,
        "conv_phi": report.phi,
        "iterations": report.niter,
        "seconds": report.seconds,
        "x": report.iterate.x.tolist(),
        "counters": asdict(report.counters),
        "trace": [
            {
                "k": r.k, "phi": r.phi, "mu": r.mu, "sigma": r.sigma,
                "alpha": r.alpha_accepted,
                "alpha_tilde": r.step.alpha_tilde,
                "alpha_bar": r.step.alpha_bar,
                "alpha_check": r.step.alpha_check,
                "alpha_hat": r.step.alpha_hat,
                "backtracks": r.step.backtrack_count,
                "reg_lambda": r.reg_lambda,
                "seconds": r.seconds,
                "restart_retries": r.restart_retries,
                "rank_deficient": r.rank_deficient,
                "factorizations": r.factorizations,
                "kkt_solves": r.kkt_solves,
            }
            for r in report.iterations
        ],
    }


def cmd_solve(args) -> int:
    entry = get_problem(args.problem)
    cfg = _config_from_args(args, entry)
    report = solve(entry.problem, entry.initial_iterate(), cfg)
    print(_summary_line(report))
    print("x = [" + ", ".join(f"{v:.10g}" for v in report.iterate.x) + "]")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(_artifact(report, cfg), fh, indent=2)
            fh.write("\n")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def _bench_names(set_name: str) -> list[str]:
    if set_name in BENCH_SETS:
        return BENCH_SETS[set_name]()
    names = [t.strip() for t in set_name.split(",") if t.strip()]
    return [get_problem(n).name for n in names]  # canonicalize, raise early


def _bench_one(name: str, args, variant: int) -> dict:
    entry = get_problem(name)
    row: dict = {"Prob": entry.name, "Variant": variant,
                 "RefObj": entry.ref_objective,
                 "RefIter": entry.ref_iterations,
                 "RefConvPhi": entry.ref_conv_phi,
                 "Obj": None, "Iter": None, "Seconds": None, "ConvPhi": None,
                 "ObjRelDelta": None}
    cfg_args = argparse.Namespace(**vars(args))
    cfg_args.variant = variant
    try:
        cfg = _config_from_args(cfg_args, entry)
        report = solve(entry.problem, entry.initial_iterate(), cfg)
    except ArcoptError as exc:
        row["Status"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(Obj=report.objective, Iter=report.niter,
               Seconds=report.seconds, ConvPhi=report.phi,
               Status=report.status)
    if entry.ref_objective not in (None, 0.0):
        row["ObjRelDelta"] = abs(report.objective - entry.ref_objective) \
            / abs(entry.ref_objective)
    return row


_BENCH_FIELDS = ["Prob", "Obj", "Iter", "Seconds", "ConvPhi", "Status",
                 "RefObj", "RefIter", "RefConvPhi", "ObjRelDelta"]


def _format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.10g}" if abs(v) >= 1e-3 or v == 0.0 else f"{v:.5e}"
    return str(v)


def _write_csv(path: str, schema: str, fields: list[str], rows: list[dict]):
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema={schema}\n")
        writer = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _format_cell(row.get(k)) for k in fields})


def cmd_bench(args) -> int:
    if not args.set.strip():
        raise UnknownProblemError(args.set, sorted(BENCH_SETS))
    names = _bench_names(args.set)
    variants = [1, 2, 3] if args.compare_variants else [args.variant]

    per_variant: dict[int, list[dict]] = {}
    for variant in variants:
        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                rows = list(pool.map(lambda n: _bench_one(n, args, variant), names))
        else:
            rows = [_bench_one(n, args, variant) for n in names]
        per_variant[variant] = rows

    out = args.out
    if args.compare_variants:
        allrows = [r for v in variants for r in per_variant[v]]
        _write_csv(out, "arcopt.bench-compare/1", ["Variant"] + _BENCH_FIELDS,
                   allrows)
    else:
        _write_csv(out, "arcopt.bench/1", _BENCH_FIELDS, per_variant[variants[0]])

    png = os.path.splitext(out)[0] + ".png"
    from . import plotting
    if args.compare_variants:
        plotting.save_compare_figure(per_variant, png)
    else:
        plotting.save_bench_figure(per_variant[variants[0]], png)

    for variant in variants:
        for row in per_variant[variant]:
            status = row.get("Status", "")
            obj = _format_cell(row.get("Obj"))
            phi = _format_cell(row.get("ConvPhi"))
            print(f"v{variant} {row['Prob']:>6}  Obj {obj:>14}  "
                  f"Iter {row.get('Iter')}  ConvPhi {phi:>12}  {status}")
    print(f"wrote {out} and {png}")
    return EXIT_OK


def cmd_trace(args) -> int:
    entry = get_problem(args.problem)
    cfg = _config_from_args(args, entry)
    prob = entry.problem
    grid = np.linspace(0.0, np.pi / 2.0, TRACE_SAMPLES)
    rows: list[dict] = []

    def observer(k, v, arc, v_next, rec):
        for alpha in grid:
            va = eval_arc(v, arc, float(alpha))
            try:
                phi = kkt.residual(prob, va).merit
            except ArcoptError:
                phi = float("nan")
            row = {"iter": k, "alpha": float(alpha), "phi": phi}
            for i, xi in enumerate(va.x, start=1):
                row[f"x{i}"] = float(xi)
            rows.append(row)

    report = solve(prob, entry.initial_iterate(), cfg, observer=observer)
    final = {"iter": report.niter, "alpha": 0.0, "phi": report.phi}
    for i, xi in enumerate(report.iterate.x, start=1):
        final[f"x{i}"] = float(xi)
    rows.append(final)

    fields = ["iter", "alpha"] + [f"x{i}" for i in range(1, prob.n + 1)] + ["phi"]
    out = args.out or f"trace_{entry.name}_v{args.variant}.csv"
    with open(out, "w", newline="") as fh:
        fh.write("# schema=arcopt.trace/1\n")
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(row[k]) for k in fields})

    png = os.path.splitext(out)[0] + ".png"
    from . import plotting
    plotting.save_trace_figure(rows, png, entry.name)
    print(_summary_line(report))
    print(f"wrote {out} and {png}")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_check(args) -> int:
    entry = get_problem(args.problem)
    report = check_derivatives(entry.problem, entry.interior_start)
    print(f"derivative check for {entry.name} at interior start")
    print(report)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def build_parser() -> _Parser:
    parser = _Parser(prog="arcopt",
                     description="Arc-search interior-point solver for "
                                 "constrained nonlinear programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one problem")
    p_solve.add_argument("problem")
    _add_solver_flags(p_solve)
    p_solve.add_argument("--json", metavar="PATH",
                         help="write a machine-readable run artifact")
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="run a problem set and tabulate")
    p_bench.add_argument("set",
                         help="named set (%s) or comma-separated problem names"
                              % ", ".join(sorted(BENCH_SETS)))
    _add_solver_flags(p_bench)
    p_bench.add_argument("--out", default="bench.csv", metavar="PATH")
    p_bench.add_argument("--compare-variants", action="store_true",
                         help="run variants 1, 2 and 3 side by side")
    p_bench.add_argument("--jobs", type=_positive_int, default=1,
                         help="solve problems in parallel")
    p_bench.set_defaults(func=cmd_bench)

    p_trace = sub.add_parser("trace",
                             help="emit sampled search arcs for plotting")
    p_trace.add_argument("problem")
    _add_solver_flags(p_trace)
    p_trace.add_argument("--out", metavar="PATH",
                         help="CSV path (default trace_<prob>_v<variant>.csv)")
    p_trace.set_defaults(func=cmd_trace)

    p_check = sub.add_parser("check", help="finite-difference derivative check")
    p_check.add_argument("problem")
    p_check.set_defaults(func=cmd_check)

    # subparsers re-apply their own defaults over the main namespace, so
    # environment-supplied defaults must be pushed onto each of them
    parser.subcommands = (p_solve, p_bench, p_trace, p_check)
    return parser


def _apply_env_config(parser: _Parser):
    path = os.environ.get(ENV_CONFIG)
    if not path:
        return
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read {ENV_CONFIG} file {path!r}: {exc}")
    if not isinstance(data, dict):
        parser.error(f"{ENV_CONFIG} file must hold a JSON object")
    bad = sorted(set(data) - set(_CONFIG_KEYS))
    if bad:
        parser.error(f"unknown keys in {ENV_CONFIG} file: {', '.join(bad)}; "
                     f"valid: {', '.join(_CONFIG_KEYS)}")
    defaults = dict(data)
    if "max_iter" in defaults:
        defaults["max_iter"] = int(defaults["max_iter"])
    parser.set_defaults(**defaults)
    for sub in parser.subcommands:
        sub.set_defaults(**defaults)


def main(argv=None) -> int:
    parser = build_parser()
    _apply_env_config(parser)
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        return args.func(args)
    except InitializationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_START
    except UnknownProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArcoptError as exc:
        print(f"error after {time.perf_counter() - t0:.3f}s: {exc}",
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
