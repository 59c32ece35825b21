"""Parameter sweeps and bisection for stability boundaries."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .errors import IndeterminateAtEnds, NotRepresentable, SameVerdictAtEnds
from .expr import ParsedExpr, bind_and_normalize, parse
from .rouche import IntegrationOptions, StabilityReport, count_unstable

__all__ = ["SweepRow", "BisectResult", "sweep", "bisect"]


@dataclass
class SweepRow:
    value: float
    report: StabilityReport


@dataclass
class BisectResult:
    param: str
    critical: float
    lo: float
    hi: float
    lo_verdict: str
    hi_verdict: str
    iterations: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "param": self.param,
            "critical": self.critical,
            "lo_verdict": self.lo_verdict,
            "hi_verdict": self.hi_verdict,
            "iterations": self.iterations,
        }


def _prepare(expr, param, params):
    if isinstance(expr, str):
        expr = parse(expr)
    if param not in expr.free_params:
        raise NotRepresentable(f"parameter {param!r} does not appear in the expression")
    params = {k: v for k, v in (params or {}).items() if k != param}
    return expr, params


def _report_at(expr: ParsedExpr, param, value, params, opts):
    cf = bind_and_normalize(expr, {**params, param: value})
    return count_unstable(cf, opts)


def sweep(
    expr: ParsedExpr | str,
    param: str,
    values: Sequence[float],
    params: Mapping[str, float] | None = None,
    opts: IntegrationOptions | None = None,
) -> list[SweepRow]:
    """Run the stability count at every value of ``param`` in ``values``, in order."""
    expr, params = _prepare(expr, param, params)
    return [SweepRow(float(v), _report_at(expr, param, float(v), params, opts)) for v in values]


def bisect(
    expr: ParsedExpr | str,
    param: str,
    lo: float,
    hi: float,
    tol: float,
    params: Mapping[str, float] | None = None,
    opts: IntegrationOptions | None = None,
) -> BisectResult:
    """Locate the value of ``param`` where the verdict changes, to within ``tol``.

    An indeterminate midpoint (a root hugging the imaginary axis) is assigned
    to whichever end its raw count is closer to. If no count is available
    the midpoint is taken as the boundary.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if not tol > 0:
        raise ValueError("tol must be positive")
    expr, params = _prepare(expr, param, params)
    r_lo = _report_at(expr, param, lo, params, opts)
    r_hi = _report_at(expr, param, hi, params, opts)
    if r_lo.verdict.is_indeterminate or r_hi.verdict.is_indeterminate:
        raise IndeterminateAtEnds(
            f"verdict at {param}={lo:g} is {r_lo.verdict}, at {param}={hi:g} is {r_hi.verdict}"
        )
    if r_lo.verdict == r_hi.verdict:
        raise SameVerdictAtEnds(f"both ends are {r_lo.verdict}")
    v_lo, v_hi = r_lo.verdict, r_hi.verdict
    n_lo, n_hi = r_lo.m_rounded or 0, r_hi.m_rounded or 0

    log = []
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        r = _report_at(expr, param, mid, params, opts)
        entry = {"value": mid, "verdict": str(r.verdict), "m_raw": r.m_raw}
        if r.verdict == v_lo:
            lo, entry["action"] = mid, "raise lo"
        elif r.verdict.is_indeterminate:
            if r.m_raw is None:
                half = 0.5 * tol
                lo, hi = max(lo, mid - half), min(hi, mid + half)
                entry["action"] = "indeterminate without count, bracket closed on midpoint"
                log.append(entry)
                break
            if abs(r.m_raw - n_lo) <= abs(r.m_raw - n_hi):
                lo, entry["action"] = mid, "indeterminate, nearer lo count: raise lo"
            else:
                hi, entry["action"] = mid, "indeterminate, nearer hi count: lower hi"
        else:
            hi, entry["action"] = mid, "lower hi"
        log.append(entry)
    return BisectResult(param, 0.5 * (lo + hi), lo, hi, str(v_lo), str(v_hi), log)
