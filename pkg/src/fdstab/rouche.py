"""Counting unstable roots of a characteristic function.

The number of roots of Delta(s) in the closed right half-plane of the first
Riemann sheet is

    M = alpha_n / 2 - (1/pi) * integral_0^inf Re{Delta'(iw) / Delta(iw)} dw

The lower limit is replaced by a small ``eps`` (the integrand may blow up
like ``w**(alpha_1 - 1)`` at the origin) and the upper limit by a finite
``omega`` that is doubled until M settles.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .calculus import differentiate, evaluate
from .errors import MaxSubdivisions
from .expr import CharFn
from .quadrature import DEFAULT_MAX_PANELS, integrate_adaptive

__all__ = [
    "IntegrationOptions",
    "Verdict",
    "StabilityReport",
    "integrand",
    "count_unstable",
    "phase_mismatch",
]

_ORIGIN_ANGLES = (0.0, math.pi / 4, -math.pi / 4)


@dataclass(frozen=True)
class IntegrationOptions:
    eps: float = 1e-9
    omega_max: float = 1e3
    abs_tol: float = 1e-8
    rel_tol: float = 1e-8
    max_doublings: int = 6
    residual_warn: float = 0.05
    origin_floor: float = 1e-9
    max_panels: int = DEFAULT_MAX_PANELS
    # |Delta| floor below which a sample counts as a root on the contour
    contour_floor: float = 1e-300
    # sample |Delta| below this fraction of the panel maximum flags proximity
    proximity_ratio: float = 1e-6

    def __post_init__(self):
        if not 0 < self.eps < self.omega_max:
            raise ValueError("need 0 < eps < omega_max")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_doublings < 0:
            raise ValueError("max_doublings must be non-negative")
        if self.residual_warn <= 0:
            raise ValueError("residual_warn must be positive")


@dataclass(frozen=True)
class Verdict:
    """``kind`` is 'Stable', 'Unstable' or 'Indeterminate'."""

    kind: str
    count: int | None = None

    def __str__(self):
        if self.kind == "Unstable" and self.count is not None:
            return f"Unstable({self.count})"
        return self.kind

    @property
    def is_stable(self):
        return self.kind == "Stable"

    @property
    def is_unstable(self):
        return self.kind == "Unstable"

    @property
    def is_indeterminate(self):
        return self.kind == "Indeterminate"


STABLE = Verdict("Stable")
INDETERMINATE = Verdict("Indeterminate")


@dataclass
class StabilityReport:
    m_raw: float | None
    m_rounded: int | None
    residual: float | None
    verdict: Verdict
    integral_value: float | None
    integral_error_estimate: float | None
    omega_used: float | None
    doublings: int
    warnings: list[str] = field(default_factory=list)
    alpha_n: float | None = None
    # (omega, M(omega)) after the first pass and after every doubling
    history: list[tuple[float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = str(self.verdict)
        del d["history"]
        return d


def integrand(cf: CharFn, dcf, omega):
    """Re{Delta'(iw) / Delta(iw)} for scalar or array ``omega > 0``."""
    s = 1j * np.asarray(omega, dtype=float)
    value = (evaluate(dcf, s) / evaluate(cf, s)).real
    return float(value) if np.ndim(omega) == 0 else value


def phase_mismatch(cf: CharFn, lefts, rights, estimates):
    """Disagreement (mod 2 pi) between panel integrals and the phase change of Delta.

    Re{Delta'(iw)/Delta(iw)} is d/dw arg Delta(iw), so a correct panel integral
    must agree with arg(Delta(i b) / Delta(i a)) up to a multiple of 2 pi. A
    narrow spike that the Kronrod nodes step over shows up here as an O(1)
    mismatch.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = evaluate(cf, 1j * np.asarray(rights)) / evaluate(cf, 1j * np.asarray(lefts))
    d = np.asarray(estimates) - np.angle(ratio)
    wrapped = np.abs((d + math.pi) % (2 * math.pi) - math.pi)
    slack = 1e-12 * (1.0 + np.abs(estimates))
    return np.maximum(wrapped - slack, 0.0)


class _Sampler:
    """Integrand on node batches, recording samples that sit on or near a root."""

    def __init__(self, cf, dcf, opts):
        self.cf = cf
        self.dcf = dcf
        self.opts = opts
        self.near = []

    def __call__(self, omega):
        s = 1j * omega
        den = evaluate(self.cf, s)
        num = evaluate(self.dcf, s)
        mag = np.abs(den)
        scale = mag.max(axis=-1, keepdims=True)
        hit = (mag < self.opts.contour_floor) | (mag < self.opts.proximity_ratio * scale)
        if np.any(hit):
            self.near.extend(omega[hit].tolist())
        with np.errstate(divide="ignore", invalid="ignore"):
            val = (num / den).real
        return np.where(mag < self.opts.contour_floor, 0.0, val)


def _origin_singular(cf: CharFn, opts: IntegrationOptions) -> str | None:
    if cf.value_at_origin() == 0:
        return "origin singularity: Delta(0) = 0, system is unstable"
    probes = opts.eps * np.exp(1j * np.array(_ORIGIN_ANGLES))
    if np.any(np.abs(evaluate(cf, probes)) <= opts.origin_floor):
        return f"origin singularity: |Delta(s)| <= {opts.origin_floor:g} near s = 0, system is unstable"
    return None


def count_unstable(cf: CharFn, opts: IntegrationOptions | None = None) -> StabilityReport:
    """Number of roots of ``cf`` in the right half of the first Riemann sheet."""
    opts = opts or IntegrationOptions()
    origin = _origin_singular(cf, opts)
    if origin is not None:
        return StabilityReport(
            m_raw=None, m_rounded=None, residual=None, verdict=Verdict("Unstable"),
            integral_value=None, integral_error_estimate=None, omega_used=None,
            doublings=0, warnings=[origin], alpha_n=cf.alpha_n,
        )

    dcf = differentiate(cf)
    sampler = _Sampler(cf, dcf, opts)

    def check(lefts, rights, est):
        return phase_mismatch(cf, lefts, rights, est)

    def piece(a, b):
        return integrate_adaptive(sampler, a, b, opts, panel_check=check)

    warnings: list[str] = []
    history: list[tuple[float, float]] = []
    omega = opts.omega_max
    doublings = 0
    converged = False
    try:
        total, err = piece(opts.eps, omega)
        m = cf.alpha_n / 2 - total / math.pi
        history.append((omega, m))
        while doublings < opts.max_doublings:
            extra, extra_err = piece(omega, 2 * omega)
            total += extra
            err += extra_err
            omega *= 2
            doublings += 1
            m_next = cf.alpha_n / 2 - total / math.pi
            history.append((omega, m_next))
            settled = abs(m_next - m) < opts.residual_warn / 2
            m = m_next
            if settled:
                converged = True
                break
    except MaxSubdivisions as exc:
        warnings.append(f"quadrature failed, likely a root on or near the imaginary axis: {exc}")
        return StabilityReport(
            m_raw=None, m_rounded=None, residual=None, verdict=INDETERMINATE,
            integral_value=None, integral_error_estimate=None, omega_used=omega,
            doublings=doublings, warnings=warnings, alpha_n=cf.alpha_n, history=history,
        )

    if not converged:
        warnings.append(
            f"tail did not settle after {doublings} doublings (omega = {omega:g}); "
            "result may depend on the upper limit"
        )
    if sampler.near:
        w0 = min(sampler.near, key=lambda w: abs(evaluate(cf, 1j * w)))
        warnings.append(f"contour proximity: Delta(i w) nearly vanishes near w = {w0:.6g}")

    m_rounded = max(0, int(round(m)))
    residual = abs(m - m_rounded)
    if m < -opts.residual_warn:
        warnings.append(f"negative count M = {m:.6g}; preconditions may be violated")
    if residual > opts.residual_warn:
        warnings.append(f"M = {m:.6g} is not close to an integer (residual {residual:.3g})")

    if warnings:
        verdict = INDETERMINATE
    elif m_rounded == 0:
        verdict = STABLE
    else:
        verdict = Verdict("Unstable", m_rounded)
    return StabilityReport(
        m_raw=m, m_rounded=m_rounded, residual=residual, verdict=verdict,
        integral_value=total, integral_error_estimate=err, omega_used=omega,
        doublings=doublings, warnings=warnings, alpha_n=cf.alpha_n, history=history,
    )
