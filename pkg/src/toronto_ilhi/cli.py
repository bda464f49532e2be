"""Command-line interface: ``eval``, ``sweep`` and ``verify``.

Exit codes: 0 success, 1 numerical failure or failed verification,
2 bad arguments or parameters outside a method's domain.
"""
import argparse
import csv
import io
import math
import os
import sys

from .errors import ConvergenceError, DomainError, ToleranceNotMet
from .evaluate import ILHI_METHODS, TORONTO_METHODS, evaluate_ilhi, evaluate_toronto
from .params import SeriesControl

TOL_ENV = "TORONTO_ILHI_TOL"

SWEEP_VARS = {"toronto": ("m", "n", "r", "B"), "ilhi": ("m", "n", "a", "z")}


def fmt(x):
    return f"{x:.16e}"


class UsageError(Exception):
    pass


def _series_control(args):
    kwargs = {}
    if args.rel_tol is not None:
        kwargs["rel_tol"] = args.rel_tol
    if args.max_terms is not None:
        kwargs["max_terms"] = args.max_terms
    return SeriesControl(**kwargs)


def _require(args, names):
    missing = [f"--{k}" for k in names if getattr(args, k) is None]
    if missing:
        raise UsageError(f"missing required flag(s): {' '.join(missing)}")


def _evaluate(function, params, method, ctl):
    if function == "toronto":
        return evaluate_toronto(params["m"], params["n"], params["r"], params["B"], method, ctl)
    return evaluate_ilhi(params["m"], params["n"], params["a"], params["z"], method)


# -- eval -------------------------------------------------------------------

def cmd_eval(args, out):
    names = SWEEP_VARS[args.function]
    _require(args, names)
    params = {k: getattr(args, k) for k in names}
    res = _evaluate(args.function, params, args.method, _series_control(args))
    line = f"{fmt(res.value)} {res.method}"
    if res.error_estimate is not None:
        line += f" +/- {res.error_estimate:.3e}"
    print(line, file=out)
    if args.method == "auto" and res.method == "oracle":
        print("note: closed form unavailable, served by oracle", file=sys.stderr)
    return 0


# -- sweep ------------------------------------------------------------------

def parse_methods(text, allowed):
    """'closed,oracle@0.4' -> [('closed', None), ('oracle', 0.4)]."""
    methods = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, _, n_text = item.partition("@")
        if name not in allowed:
            raise UsageError(f"unknown method {name!r}; choose from {', '.join(allowed)}")
        try:
            n_override = float(n_text) if n_text else None
        except ValueError:
            raise UsageError(f"bad order override in {item!r}") from None
        methods.append((name, n_override))
    if not methods:
        raise UsageError("no methods given")
    return methods


def sweep_grid(start, stop, step):
    if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)):
        raise UsageError("sweep range must be finite")
    if not start < stop:
        raise UsageError(f"empty sweep range: need start < stop (got {start} .. {stop})")
    if not step > 0:
        raise UsageError(f"sweep step must be positive (got {step})")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def sweep_rows(function, fixed, var, grid, methods, ctl):
    """Evaluate the whole grid first so that nothing is emitted on a domain error."""
    rows = []
    for x in grid:
        for name, n_override in methods:
            params = dict(fixed, **{var: x})
            label = name
            if n_override is not None:
                params["n"] = n_override
                label = f"{name}(n={n_override:g})"
            rows.append((x, label, _evaluate(function, params, name, ctl).value))
    rows.sort(key=lambda row: (row[0], row[1]))
    return rows


def write_csv(rows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["sweep_var", "method", "value"])
    for x, label, value in rows:
        writer.writerow([fmt(x), label, fmt(value)])


def cmd_sweep(args, out):
    names = SWEEP_VARS[args.function]
    if args.var not in names:
        raise UsageError(f"--var must be one of {', '.join(names)} for {args.function}")
    allowed = TORONTO_METHODS if args.function == "toronto" else ILHI_METHODS
    methods = parse_methods(args.method, allowed)
    n_overridden = all(n_override is not None for _, n_override in methods)
    _require(args, [k for k in names if k != args.var and not (k == "n" and n_overridden)])
    _require(args, ["start", "stop", "step"])
    grid = sweep_grid(args.start, args.stop, args.step)
    fixed = {k: getattr(args, k) for k in names if k != args.var}
    rows = sweep_rows(args.function, fixed, args.var, grid, methods, _series_control(args))

    buf = io.StringIO()
    write_csv(rows, buf)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    if args.plot:
        from .plotting import plot_sweep

        title = ", ".join(f"{k}={v:g}" for k, v in fixed.items() if v is not None)
        plot_sweep(rows, args.plot, args.var, ylabel=args.function, title=title)
    return 0


# -- verify -----------------------------------------------------------------

def _verify_tolerance(args):
    if args.rel_tol is not None:
        return args.rel_tol
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"{TOL_ENV} must be a number (got {env!r})") from None
    return None


def cmd_verify(args, out):
    from .verify import run_verification

    tol = _verify_tolerance(args)
    toronto_pts = ilhi_pts = None
    if any(getattr(args, k) is not None for k in ("m", "n", "r", "B", "a", "z")):
        _require(args, ["m", "n"])
        if args.r is not None or args.B is not None:
            _require(args, ["r", "B"])
            toronto_pts = [(args.m, args.n, args.r, args.B)]
        if args.a is not None or args.z is not None:
            _require(args, ["a", "z"])
            ilhi_pts = [(args.m, args.n, args.a, args.z)]
        if toronto_pts is None and ilhi_pts is None:
            raise UsageError("a single-point grid needs --r/--B (toronto) or --a/--z (ilhi)")
    results = run_verification(tol=tol, toronto_points=toronto_pts, ilhi_points=ilhi_pts)
    if not results:
        raise UsageError("nothing to verify at the given point")
    for res in results:
        print(res.line(), file=out)
        for note in res.notes:
            print(f"      note: {note}", file=out)
    failed = [res for res in results if not res.passed]
    if failed:
        worst = failed[0]
        print(f"verification FAILED: {len(failed)} check(s); worst offender {worst.name} "
              f"at {worst.worst_point}", file=out)
    else:
        print("verification passed", file=out)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["check", "passed", "worst", "tol", "points", "worst_point"])
            for res in results:
                writer.writerow([res.name, int(res.passed), fmt(res.worst),
                                 "" if res.tol is None else fmt(res.tol), res.count,
                                 "" if res.worst_point is None else " ".join(map(str, res.worst_point))])
    if args.plot:
        from .plotting import plot_verification

        plot_verification(results, args.plot)
    return 1 if failed else 0


# -- parser -----------------------------------------------------------------

def _add_params(p, series=True):
    for name in ("m", "n", "r", "B", "a", "z"):
        p.add_argument(f"--{name}", type=float)
    if series:
        p.add_argument("--rel-tol", type=float, help="series truncation tolerance")
        p.add_argument("--max-terms", type=int, help="series term cap")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toronto-ilhi",
        description="Incomplete Toronto function and incomplete Lipschitz-Hankel integrals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one point")
    p_eval.add_argument("function", choices=sorted(SWEEP_VARS))
    _add_params(p_eval)
    p_eval.add_argument("--method", default="auto",
                        help=f"toronto: {', '.join(TORONTO_METHODS)}; ilhi: {', '.join(ILHI_METHODS)}")

    p_sweep = sub.add_parser("sweep", help="tabulate methods over a range of one variable (CSV)")
    p_sweep.add_argument("function", choices=sorted(SWEEP_VARS))
    _add_params(p_sweep)
    p_sweep.add_argument("--var", required=True, help="variable to sweep")
    p_sweep.add_argument("--start", type=float)
    p_sweep.add_argument("--stop", type=float)
    p_sweep.add_argument("--step", type=float)
    p_sweep.add_argument("--method", default="auto",
                         help="comma list, each optionally with an order override: closed@0.5,oracle@0.4")
    p_sweep.add_argument("--out", help="write CSV here instead of stdout")
    p_sweep.add_argument("--plot", help="also render the curves to this image file")

    p_verify = sub.add_parser("verify", help="check every representation against the oracle")
    _add_params(p_verify, series=False)
    p_verify.add_argument("--rel-tol", type=float,
                          help=f"replace every verification tolerance (default per check; env {TOL_ENV})")
    p_verify.add_argument("--out", help="write the per-check report as CSV")
    p_verify.add_argument("--plot", help="render a summary figure of the checks")
    return parser


COMMANDS = {"eval": cmd_eval, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, ToleranceNotMet) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
