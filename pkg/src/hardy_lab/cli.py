"""hardy-lab command line: datasets, verification and plots for the n-particle Hardy state.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analytics, circuit, plots, verify
from .output import write_csv, write_json, write_text
from .state import TransformCoefficients

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3
DEFAULT_SHOTS = 20000
DEFAULT_SEED = 42
DEFAULT_STEP = 0.005
FORMATS = ("csv", "json", "svg")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------ argument helpers

def n_values(args) -> list[int]:
    if args.n_range:
        try:
            lo, hi = (int(v) for v in args.n_range.split(".."))
        except ValueError:
            raise UsageError(f"--n-range must look like 2..10, got {args.n_range!r}") from None
        ns = list(range(lo, hi + 1))
    elif args.n is not None:
        ns = [args.n]
    else:
        ns = [args.default_n]
    if not ns or min(ns) < 2:
        raise UsageError("n must be at least 2")
    return ns


def a_grid(step: float) -> list[float]:
    if not 0.0 < step < 1.0:
        raise UsageError("--a-step must lie in (0, 1)")
    count = int(round(1.0 / step))
    if abs(count * step - 1.0) > 1e-9:
        raise UsageError("--a-step must divide 1 evenly")
    return [round(i * step, 12) for i in range(1, count)]


def a_values(args) -> list[float]:
    if args.a is not None:
        if not 0.0 < args.a < 1.0:
            raise UsageError("--a must lie in (0, 1)")
        return [args.a]
    return a_grid(args.a_step)


def formats(args) -> set[str]:
    chosen = {f.strip() for f in args.format.split(",") if f.strip()}
    bad = chosen - set(FORMATS)
    if bad:
        raise UsageError(f"unknown format(s): {', '.join(sorted(bad))}")
    return chosen


def check_shots(shots: int) -> int:
    if shots < 1:
        raise UsageError("--shots must be at least 1")
    return shots


def pool_map(fn, items):
    """Order-preserving map, fanned out up to HARDY_LAB_THREADS workers."""
    items = list(items)
    try:
        workers = int(os.environ.get("HARDY_LAB_THREADS", "1"))
    except ValueError:
        raise UsageError("HARDY_LAB_THREADS must be an integer") from None
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def base_config(args) -> dict:
    skip = {"func", "default_n"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ------------------------------------------------------------ subcommands

def cmd_sweep(args) -> int:
    ns, grid, fmts = n_values(args), a_grid(args.a_step), formats(args)
    sample = not args.no_sample
    if sample:
        check_shots(args.shots)
    points = [(n, a) for n in ns for a in grid]

    def row(item):
        i, (n, a) = item
        p = analytics.p_nonlocal_equal(n, a)
        if not sample:
            return [n, a, p, None, None, None]
        hist = circuit.run_exact(circuit.build_circuit_for_A(n, a, circuit.FULL_CD))
        s = circuit.sample_shots(hist, args.shots, args.seed, execution=i)
        return [n, a, p, s.nonlocal_sum(), args.shots, args.seed]

    rows = pool_map(row, enumerate(points))
    optima = [[n, *analytics.optimize_A(n)] for n in ns]
    out = outdir(args)
    if "csv" in fmts:
        write_csv(out / "sweep.csv", ["n", "A", "p_analytic", "p_sampled", "shots", "seed"], rows)
        write_csv(out / "sweep_optimum.csv", ["n", "A_opt", "p_opt"], optima)
    if "json" in fmts:
        write_json(out / "sweep.json", base_config(args), {
            "rows": [dict(zip(["n", "A", "p_analytic", "p_sampled", "shots", "seed"], r)) for r in rows],
            "optimum": [{"kind": analytics.OPTIMUM, "n": n, "value": p, "secondary_value": a} for n, a, p in optima],
        })
    if "svg" in fmts:
        series = {f"n={n}": ([r[1] for r in rows if r[0] == n], [r[2] for r in rows if r[0] == n]) for n in ns}
        markers = {"optimum": ([o[1] for o in optima], [o[2] for o in optima])}
        if sample:
            markers["sampled n=" + ",".join(map(str, ns))] = ([r[1] for r in rows], [r[3] for r in rows])
        write_text(out / "sweep.svg", plots.line_plot(series, "Nonlocal probability", "A", "P_nonlocal",
                                                      markers=markers))
    return EXIT_OK


def _modes(args, n: int) -> list[str]:
    if args.mode == "all":
        return [circuit.PREPARE, *[f"mixed:{k}" for k in range(1, n + 1)], circuit.FULL_CD]
    try:
        kind, k = circuit.parse_mode(args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return [circuit.mode_name(kind, k)]


def cmd_histogram(args) -> int:
    (n,), fmts = n_values(args), formats(args)
    if args.a is None or not 0.0 < args.a < 1.0:
        raise UsageError("--a in (0, 1) is required")
    check_shots(args.shots)
    out = outdir(args)
    results = []
    for i, mode in enumerate(_modes(args, n)):
        try:
            spec = circuit.build_circuit_for_A(n, args.a, mode)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        exact = circuit.run_exact(spec)
        sampled = circuit.sample_shots(exact, args.shots, args.seed, execution=i)
        outcomes = list(exact.entries())
        rows = [[b, exact.probs[j], sampled.counts[j], sampled.frequencies[j], exact.postselect_success]
                for j, b in enumerate(outcomes)]
        tag = mode.replace(":", "")
        if "csv" in fmts:
            write_csv(out / f"histogram_{tag}.csv",
                      ["outcome", "p_exact", "count", "frequency", "postselect_success"], rows)
        if "svg" in fmts:
            write_text(out / f"histogram_{tag}.svg",
                       plots.bar_chart(outcomes, list(exact.probs), f"n={n}, A={args.a}, {mode}"))
        results.append({"mode": mode, "postselect_success": exact.postselect_success,
                        "raw_ancilla_flagged": exact.raw_ancilla_flagged,
                        "nonlocal_sum_exact": exact.nonlocal_sum(),
                        "nonlocal_sum_sampled": sampled.nonlocal_sum(),
                        "shots": args.shots, "seed": args.seed, "execution": i,
                        "exact": exact.entries(), "counts": sampled.entries()})
    if "json" in fmts:
        write_json(out / "histogram.json", base_config(args), results)
    return EXIT_OK


def _emit(args, name: str, header: list[str], rows: list[list], results, svg: str | None = None) -> None:
    fmts, out = formats(args), outdir(args)
    if "csv" in fmts:
        write_csv(out / f"{name}.csv", header, rows)
    if "json" in fmts:
        write_json(out / f"{name}.json", base_config(args), results)
    if "svg" in fmts and svg is not None:
        write_text(out / f"{name}.svg", svg)


def cmd_optimize(args) -> int:
    ns = n_values(args)
    optima = pool_map(analytics.optimize_A, ns)
    rows = [[n, a, p] for n, (a, p) in zip(ns, optima)]
    results = [analytics.AnalyticsResult(analytics.OPTIMUM, n, p, {"grid_points": 10_000}, a, 1e-9).to_dict()
               for n, a, p in rows]
    svg = plots.line_plot({"P*": (ns, [r[2] for r in rows])}, "Maximal nonlocal probability", "n", "P*") \
        if len(ns) > 1 else None
    _emit(args, "optimize", ["n", "A_opt", "p_opt"], rows, results, svg)
    return EXIT_OK


def cmd_integrate(args) -> int:
    ns = n_values(args)
    if args.abs_tol <= 0:
        raise UsageError("--abs-tol must be positive")
    vals = pool_map(lambda n: analytics.integrate_P(n, args.abs_tol), ns)
    rows = [[n, v] for n, v in zip(ns, vals)]
    results = [analytics.AnalyticsResult(analytics.INTEGRAL, n, v, {"abs_tol": args.abs_tol},
                                         tolerance=args.abs_tol).to_dict() for n, v in rows]
    svg = plots.line_plot({"total nonlocal probability": (ns, vals)}, "Area under P_nonlocal(A)", "n",
                          "integral", logx=True, logy=True) if len(ns) > 1 else None
    _emit(args, "integrate", ["n", "integral"], rows, results, svg)
    return EXIT_OK


def cmd_entropy(args) -> int:
    ns = n_values(args)
    try:
        for n in ns:
            analytics.left_sites(n, args.bipartition)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.at_optimum:
        points = [(n, analytics.optimize_A(n)[0]) for n in ns]
    else:
        points = [(n, a) for n in ns for a in a_values(args)]

    def row(pt):
        n, a = pt
        c = TransformCoefficients.equal(n, a)
        return [n, a, args.bipartition, analytics.entropy(c, args.bipartition),
                analytics.negativity(c, args.bipartition), analytics.p_nonlocal_equal(n, a)]

    rows = pool_map(row, points)
    results = []
    for n, a, bp, s, neg, p in rows:
        inputs = {"A": a, "bipartition": bp}
        results.append(analytics.AnalyticsResult(analytics.ENTROPY, n, s, inputs).to_dict())
        results.append(analytics.AnalyticsResult(analytics.NEGATIVITY, n, neg, inputs).to_dict())
    if args.at_optimum or len({r[1] for r in rows}) == 1:
        series = {"entropy": ([r[0] for r in rows], [r[3] for r in rows]),
                  "P_nonlocal": ([r[0] for r in rows], [r[5] for r in rows])}
        xlabel = "n"
    else:
        series = {f"S n={n}": ([r[1] for r in rows if r[0] == n], [r[3] for r in rows if r[0] == n]) for n in ns}
        xlabel = "A"
    svg = plots.line_plot(series, f"Entanglement entropy ({args.bipartition})", xlabel, "S (bits)")
    _emit(args, "entropy", ["n", "A", "bipartition", "entropy", "negativity", "p_analytic"], rows, results, svg)
    return EXIT_OK


def cmd_asymptote(args) -> int:
    x, p = analytics.asymptote()
    results = [analytics.AnalyticsResult(analytics.ASYMPTOTE, None, p, {"variable": "x = A^(2n)"}, x,
                                         1e-10).to_dict()]
    _emit(args, "asymptote", ["x_opt", "p_limit"], [[x, p]], results)
    return EXIT_OK


def _coeffs(args) -> TransformCoefficients:
    (n,) = n_values(args)
    if args.a_list:
        vals = [float(v) for v in args.a_list.split(",")]
        if len(vals) != n and args.n is not None:
            raise UsageError(f"--a-list has {len(vals)} entries but --n is {n}")
        A = vals
    else:
        if args.a is None:
            raise UsageError("--a or --a-list is required")
        A = [args.a] * n
    if not all(0.0 < v < 1.0 for v in A):
        raise UsageError("every A must lie in (0, 1)")
    return TransformCoefficients.from_A(A)


def cmd_verify(args) -> int:
    coeffs = _coeffs(args)
    report = verify.certify(coeffs, args.tol)
    xval = verify.cross_validate(coeffs, args.circuit_tol)
    ok = report.certified and xval.passed
    rows = [["condition1", "all-u", report.condition1.p_all_u, report.condition1.passed]]
    rows += [["condition2", f"d{c.site}", c.p_all_u_given_d, c.passed] for c in report.condition2]
    rows += [["condition3", r.outcome, r.probability, r.passed] for r in report.condition3.records]
    rows += [["condition3-total", "", report.condition3.total, report.condition3.total_ok]]
    rows += [["lhv-margin", f"d{m.pair[0]}d{m.pair[1]}", m.margin, m.margin > 0] for m in report.lhv_margins]
    rows += [["cross-validation", mode, dev, dev <= xval.tolerance] for mode, dev in xval.deviations.items()]
    _emit(args, "verify", ["check", "item", "value", "passed"], rows,
          {"report": report.to_dict(), "cross_validation": xval.to_dict(), "certified": ok})
    print("paradox certified" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_VERIFY


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hardy-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_n=3, shots=False):
        p.add_argument("--n", type=int, help="number of particles")
        p.add_argument("--n-range", help="inclusive range such as 2..10")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", default="csv,json,svg", help="comma list from csv,json,svg")
        if shots:
            p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.set_defaults(default_n=default_n)
        return p

    p = common(sub.add_parser("sweep", help="P_nonlocal over an (n, A) grid"), shots=True)
    p.add_argument("--a-step", type=float, default=DEFAULT_STEP)
    p.add_argument("--no-sample", action="store_true", help="skip the sampled circuit estimate")
    p.set_defaults(func=cmd_sweep)

    p = common(sub.add_parser("histogram", help="exact and sampled circuit outcome tables"), shots=True)
    p.add_argument("--a", type=float, default=0.9)
    p.add_argument("--mode", default="all", help="prepare | mixed:<k> | full-cd | all")
    p.set_defaults(func=cmd_histogram)

    p = common(sub.add_parser("optimize", help="A maximizing P_nonlocal per n"))
    p.set_defaults(func=cmd_optimize)

    p = common(sub.add_parser("integrate", help="area under P_nonlocal(A)"))
    p.add_argument("--abs-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_integrate)

    p = common(sub.add_parser("entropy", help="entanglement entropy and negativity"))
    p.add_argument("--a", type=float)
    p.add_argument("--a-step", type=float, default=0.05)
    p.add_argument("--at-optimum", action="store_true", help="evaluate at the P_nonlocal-optimal A per n")
    p.add_argument("--bipartition", default="half", help="half | one-vs-rest:<k>")
    p.set_defaults(func=cmd_entropy)

    p = common(sub.add_parser("asymptote", help="large-n limit of the optimal P_nonlocal"))
    p.set_defaults(func=cmd_asymptote)

    p = common(sub.add_parser("verify", help="certify the paradox conditions"))
    p.add_argument("--a", type=float, default=0.9)
    p.add_argument("--a-list", help="comma-separated per-site A values")
    p.add_argument("--tol", type=float, default=verify.ANALYTIC_TOL)
    p.add_argument("--circuit-tol", type=float, default=verify.CIRCUIT_TOL)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hardy-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hardy-lab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
