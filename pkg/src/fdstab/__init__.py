"""Stability testing of fractional-delay systems.

Counts the roots of Delta(s) = P0(s) + sum_i Pi(s) exp(-zeta_i s^beta_i) in
the right half of the first Riemann sheet with a contour integral along the
imaginary axis, and cross-checks the count with numerical Laplace inversion
and, for plain polynomials, with companion-matrix roots.

>>> from fdstab import charfn_from_text, count_unstable
>>> cf = charfn_from_text("s + K*(s^0.5+1)*exp(-s^0.5)", {"K": 22})
>>> str(count_unstable(cf).verdict)
'Unstable(2)'
"""

from .boundary import bisect, sweep
from .calculus import DerivedFn, differentiate, evaluate, log_derivative
from .expr import (
    Block,
    CharFn,
    DelayFactor,
    FracPoly,
    ParsedExpr,
    Term,
    bind_and_normalize,
    charfn_from_text,
    format_charfn,
    parse,
)
from .laplace_oracle import Decay, ImpulseTrace, InversionOptions, decay_check, impulse_response, invert_laplace
from .quadrature import integrate_adaptive
from .rouche import IntegrationOptions, StabilityReport, Verdict, count_unstable, integrand

__version__ = "0.1.0"

__all__ = [
    "Block", "CharFn", "DelayFactor", "FracPoly", "ParsedExpr", "Term",
    "bind_and_normalize", "charfn_from_text", "format_charfn", "parse",
    "DerivedFn", "differentiate", "evaluate", "log_derivative",
    "IntegrationOptions", "StabilityReport", "Verdict", "count_unstable", "integrand",
    "integrate_adaptive",
    "Decay", "ImpulseTrace", "InversionOptions", "decay_check", "impulse_response", "invert_laplace",
    "bisect", "sweep",
]
