"""Differentiation and principal-branch evaluation of characteristic functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchCutViolation, DomainError, RootOnContour
from .expr import Block, CharFn, DelayFactor, FracPoly

__all__ = ["DerivedFn", "differentiate", "evaluate", "log_derivative", "principal_power"]

# exponents that are small integers are computed by repeated multiplication
_INT_POWER_LIMIT = 8


@dataclass(frozen=True)
class DerivedFn:
    """Derivative of a :class:`CharFn`; term exponents may be negative.

    Block ``k`` carries the same delay factor as block ``k`` of the source.
    """

    blocks: tuple[Block, ...]


def differentiate(cf: CharFn) -> DerivedFn:
    """Exact derivative: d/ds [P exp(-z s^b)] = (P' - z b s^(b-1) P) exp(-z s^b)."""
    out = []
    for block in cf.blocks:
        pairs = [(t.coeff * t.exponent, t.exponent - 1.0) for t in block.poly.terms if t.exponent != 0]
        d = block.delay
        if d is not None:
            k = d.zeta * d.beta
            pairs += [(-k * t.coeff, t.exponent + d.beta - 1.0) for t in block.poly.terms]
        out.append(Block(FracPoly.from_pairs(pairs), d))
    return DerivedFn(tuple(out))


def _is_small_int(x: float) -> bool:
    return x == int(x) and abs(x) <= _INT_POWER_LIMIT


def principal_power(s, alpha: float, *, log_s=None):
    """``s**alpha`` on the principal sheet, arg s in (-pi, pi].

    ``s`` may be a complex scalar or array. ``log_s`` can carry a precomputed
    principal logarithm of ``s``.
    """
    s = np.asarray(s, dtype=complex)
    if alpha == 0:
        return np.ones_like(s)
    if _is_small_int(alpha):
        n = int(abs(alpha))
        out = s.copy()
        for _ in range(n - 1):
            out = out * s
        if alpha < 0:
            if np.any(s == 0):
                raise DomainError("negative power of s evaluated at s = 0")
            out = 1.0 / out
        return out
    if np.any((s.imag == 0) & (s.real < 0)):
        raise BranchCutViolation("non-integer power of s evaluated on the branch cut (negative reals)")
    zero = s == 0
    if np.any(zero):
        if alpha < 0:
            raise DomainError("negative power of s evaluated at s = 0")
        safe = np.where(zero, 1.0, s)
        out = np.exp(alpha * np.log(safe))
        return np.where(zero, 0.0, out)
    if log_s is None:
        log_s = np.log(s)
    return np.exp(alpha * log_s)


def _compensated_sum(values):
    """Neumaier summation; works elementwise on arrays and on complex values."""
    total = None
    comp = 0.0
    for v in values:
        if total is None:
            total = v
            continue
        t = total + v
        comp = comp + _correction(np.real(total), np.real(v), np.real(t)) + 1j * _correction(
            np.imag(total), np.imag(v), np.imag(t)
        )
        total = t
    if total is None:
        return 0.0
    return total + comp


def _correction(a, b, t):
    # real-valued Neumaier step, complex parts are compensated independently
    return np.where(np.abs(a) >= np.abs(b), (a - t) + b, (b - t) + a)


def _eval_poly(terms, s, log_s):
    return _compensated_sum(t.coeff * principal_power(s, t.exponent, log_s=log_s) for t in terms)


def evaluate(f: CharFn | DerivedFn, s):
    """Evaluate ``f`` at complex ``s`` (scalar or array) on the principal sheet."""
    scalar = np.ndim(s) == 0
    s = np.asarray(s, dtype=complex)
    log_s = None
    if not np.any(s == 0) and not np.any((s.imag == 0) & (s.real < 0)):
        log_s = np.log(s)
    parts = []
    for block in f.blocks:
        if not block.poly.terms:
            continue
        v = _eval_poly(block.poly.terms, s, log_s)
        d: DelayFactor | None = block.delay
        if d is not None:
            v = v * np.exp(-d.zeta * principal_power(s, d.beta, log_s=log_s))
        parts.append(v)
    total = _compensated_sum(parts) if parts else np.zeros_like(s)
    total = np.asarray(total, dtype=complex) * np.ones_like(s)
    return complex(total) if scalar else total


def log_derivative(cf: CharFn, dcf: DerivedFn, s, floor: float = 1e-300):
    """Delta'(s) / Delta(s); raises :class:`RootOnContour` when |Delta(s)| < floor."""
    num = evaluate(dcf, s)
    den = evaluate(cf, s)
    if np.any(np.abs(den) < floor):
        raise RootOnContour(f"|Delta(s)| below {floor:g}")
    return num / den
