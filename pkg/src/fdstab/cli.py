"""Command line front end.

Exit codes: 0 stable / success, 1 unstable, 2 indeterminate, 3 input error.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import math
import sys

import numpy as np

from .boundary import bisect, sweep
from .calculus import differentiate, evaluate
from .errors import FdstabError, TooFewSamples
from .expr import bind_and_normalize, format_number, parse
from .laplace_oracle import Decay, InversionOptions, decay_check, impulse_response
from .rouche import IntegrationOptions, count_unstable

EXIT_STABLE, EXIT_UNSTABLE, EXIT_INDETERMINATE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def exit_code_for(verdict) -> int:
    if verdict.is_stable:
        return EXIT_STABLE
    if verdict.is_unstable:
        return EXIT_UNSTABLE
    return EXIT_INDETERMINATE


def _csv_number(x) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    return format_number(x)


def _json_clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _json_clean(obj.item())
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_json_clean(obj), indent=2) + "\n"


def _parse_params(items) -> dict[str, float]:
    params = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name:
            raise InputError(f"--param expects NAME=VALUE, got {item!r}")
        try:
            params[name] = float(value)
        except ValueError:
            raise InputError(f"--param {name}: {value!r} is not a number") from None
    return params


def _integration_options(args) -> IntegrationOptions:
    kw = {}
    for name in ("eps", "omega_max", "abs_tol", "rel_tol", "max_doublings"):
        value = getattr(args, name, None)
        if value is not None:
            kw[name] = value
    try:
        return IntegrationOptions(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _inversion_options(args) -> InversionOptions:
    try:
        return InversionOptions(args.shift, args.series_len, args.euler_depth)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands; each writes its primary output to ``out`` and returns an exit code


def cmd_check(args, out) -> int:
    params = _parse_params(args.param)
    cf = bind_and_normalize(parse(args.expression), params)
    report = count_unstable(cf, _integration_options(args))
    data = {"expression": args.expression, "params": params, **report.to_dict()}
    if args.json:
        out.write(_dump_json(data))
    else:
        out.write(f"verdict: {report.verdict}\n")
        if report.m_raw is not None:
            out.write(
                f"M = {report.m_raw:.6g} (rounded {report.m_rounded}, residual {report.residual:.3g})\n"
            )
            out.write(
                f"alpha_n = {cf.alpha_n:.6g}, integral = {report.integral_value:.10g} "
                f"+/- {report.integral_error_estimate:.2g}, omega = {report.omega_used:g} "
                f"after {report.doublings} doubling(s)\n"
            )
        for w in report.warnings:
            out.write(f"warning: {w}\n")
    return exit_code_for(report.verdict)


def cmd_integrand(args, out) -> int:
    params = _parse_params(args.param)
    cf = bind_and_normalize(parse(args.expression), params)
    lo, hi, n = args.start, args.stop, args.points
    if not lo > 0:
        raise InputError("--from must be positive")
    if n < 1:
        raise InputError("--points must be at least 1")
    if lo > hi or (lo == hi and n > 1):
        raise InputError("--from must be below --to")
    if n == 1:
        omega = np.array([lo])
    else:
        omega = np.linspace(lo, hi, n) if args.linear else np.geomspace(lo, hi, n)
        omega[0], omega[-1] = lo, hi
    dcf = differentiate(cf)
    rows = []
    for w in omega:
        s = 1j * float(w)
        den = evaluate(cf, s)
        value = None
        if abs(den) >= 1e-300:
            v = (evaluate(dcf, s) / den).real
            value = v if math.isfinite(v) else None
        rows.append((float(w), value))
    if args.json:
        out.write(_dump_json({
            "expression": args.expression,
            "params": params,
            "rows": [{"omega": w, "value": v} for w, v in rows],
        }))
    else:
        out.write("omega,value\n")
        for w, v in rows:
            out.write(f"{_csv_number(w)},{_csv_number(v)}\n")
    if args.plot:
        from .plotting import plot_integrand

        vals = [np.nan if v is None else v for _, v in rows]
        plot_integrand(omega, vals, args.plot, title=args.expression, log_x=not args.linear)
    return 0


def cmd_impulse(args, out) -> int:
    params = _parse_params(args.param)
    cf = bind_and_normalize(parse(args.expression), params)
    if not args.t_max > 0:
        raise InputError("--t-max must be positive")
    if args.points < 2:
        raise InputError("--points must be at least 2")
    trace = impulse_response(cf, args.t_max, args.points, _inversion_options(args))
    try:
        decay = decay_check(trace)
    except TooFewSamples as exc:
        print(f"fdstab: {exc}", file=sys.stderr)
        decay = Decay.INCONCLUSIVE
    if args.json:
        out.write(_dump_json({
            "expression": args.expression,
            "params": params,
            "rows": [{"t": float(t), "h": float(h)} for t, h in zip(trace.times, trace.values)],
            "decay": str(decay),
        }))
    else:
        out.write("t,h\n")
        for t, h in zip(trace.times, trace.values):
            out.write(f"{_csv_number(float(t))},{_csv_number(float(h))}\n")
        out.write(f"# decay: {decay}\n")
    if args.plot:
        from .plotting import plot_impulse

        plot_impulse(trace.times, trace.values, args.plot, title=args.expression, decay=decay)
    return 0


def _sweep_values(args):
    if args.values:
        try:
            return [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError:
            raise InputError(f"--values must be comma separated numbers, got {args.values!r}") from None
    if args.lo is None or args.hi is None or args.steps is None:
        raise InputError("sweep needs --values or all of --lo, --hi, --steps")
    if not args.lo < args.hi:
        raise InputError("--lo must be below --hi")
    if args.steps < 2:
        raise InputError("--steps must be at least 2")
    return np.linspace(args.lo, args.hi, args.steps).tolist()


def cmd_sweep(args, out) -> int:
    params = _parse_params(args.param)
    values = _sweep_values(args)
    rows = sweep(parse(args.expression), args.sweep, values, params, _integration_options(args))
    if args.json:
        out.write(_dump_json({
            "expression": args.expression,
            "param": args.sweep,
            "params": params,
            "rows": [
                {"value": r.value, "m_raw": r.report.m_raw, "m_rounded": r.report.m_rounded,
                 "verdict": str(r.report.verdict)}
                for r in rows
            ],
        }))
    else:
        out.write("value,m_raw,m_rounded,verdict\n")
        for r in rows:
            m_rounded = "" if r.report.m_rounded is None else str(r.report.m_rounded)
            out.write(f"{_csv_number(r.value)},{_csv_number(r.report.m_raw)},{m_rounded},{r.report.verdict}\n")
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep([r.value for r in rows], [r.report.m_raw for r in rows], args.plot,
                   param=args.sweep, title=args.expression)
    return 0


def cmd_bisect(args, out) -> int:
    params = _parse_params(args.param)
    if not args.lo < args.hi:
        raise InputError("--lo must be below --hi")
    if not args.tol > 0:
        raise InputError("--tol must be positive")
    result = bisect(parse(args.expression), args.sweep, args.lo, args.hi, args.tol, params,
                    _integration_options(args))
    out.write(_dump_json(result.to_dict()))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _common(p, integration=True):
    p.add_argument("expression", help="characteristic function, e.g. 's + K*(s^0.5+1)*exp(-s^0.5)'")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="bind a parameter (repeatable)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text/CSV")
    p.add_argument("--output", metavar="FILE", help="write output to FILE instead of stdout")
    if integration:
        p.add_argument("--eps", type=float, help="lower integration limit (default 1e-9)")
        p.add_argument("--omega-max", type=float, help="initial upper limit (default 1000)")
        p.add_argument("--abs-tol", type=float, help="absolute quadrature tolerance (default 1e-8)")
        p.add_argument("--rel-tol", type=float, help="relative quadrature tolerance (default 1e-8)")
        p.add_argument("--max-doublings", type=int, help="upper-limit doublings (default 6)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdstab",
        description="Stability of fractional-delay systems by contour-integral root counting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="count unstable roots and print a verdict")
    _common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("integrand", help="dump Re{D'(iw)/D(iw)} samples as CSV")
    _common(p, integration=False)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--linear", action="store_true", help="linear instead of logarithmic spacing")
    p.add_argument("--plot", metavar="FILE", help="also render a figure to FILE")
    p.set_defaults(func=cmd_integrand)

    p = sub.add_parser("impulse", help="impulse response of 1/D(s) by numerical Laplace inversion")
    _common(p, integration=False)
    p.add_argument("--t-max", type=float, default=20.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--shift", type=float, default=6.0)
    p.add_argument("--series-len", type=int, default=20)
    p.add_argument("--euler-depth", type=int, default=19)
    p.add_argument("--plot", metavar="FILE", help="also render a figure to FILE")
    p.set_defaults(func=cmd_impulse)

    p = sub.add_parser("sweep", help="stability count over a grid of parameter values")
    _common(p)
    p.add_argument("--sweep", required=True, metavar="NAME", help="parameter to vary")
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--values", help="explicit comma separated grid (overrides --lo/--hi/--steps)")
    p.add_argument("--plot", metavar="FILE", help="also render a figure to FILE")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bisect", help="locate the parameter value where the verdict changes")
    _common(p)
    p.add_argument("--sweep", required=True, metavar="NAME", help="parameter to vary")
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(func=cmd_bisect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (InputError, FdstabError, ValueError) as exc:
        print(f"fdstab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        with contextlib.suppress(BrokenPipeError):
            sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
