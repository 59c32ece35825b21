"""Root counting for delay-free integer-order characteristic polynomials.

Ground truth for the contour-integral count: every root is found from the
companion matrix and those in the open right half-plane are counted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundaryRoot, NonConvergence, NotRational
from .expr import CharFn

__all__ = ["IntPoly", "from_charfn", "roots", "count_rhp", "MAX_DEGREE"]

MAX_DEGREE = 12


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with coefficients in ascending degree order."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        c = self.coefficients
        if len(c) < 2:
            raise ValueError("degree must be at least 1")
        if c[-1] == 0:
            raise ValueError("leading coefficient must be non-zero")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, s):
        return np.polyval(self.coefficients[::-1], s)


def from_charfn(cf: CharFn, tol: float = 1e-12) -> IntPoly:
    if cf.has_delay:
        raise NotRational("characteristic function has delay terms")
    coeffs: dict[int, float] = {}
    for t in cf.p0.terms:
        k = round(t.exponent)
        if abs(t.exponent - k) > tol:
            raise NotRational(f"non-integer exponent {t.exponent!r}")
        coeffs[k] = coeffs.get(k, 0.0) + t.coeff
    dense = [coeffs.get(k, 0.0) for k in range(max(coeffs) + 1)]
    return IntPoly(tuple(dense))


def roots(p: IntPoly) -> np.ndarray:
    """All roots with multiplicity (companion-matrix eigenvalues)."""
    if p.degree > MAX_DEGREE:
        raise ValueError(f"oracle is limited to degree <= {MAX_DEGREE}")
    r = np.roots(p.coefficients[::-1]).astype(complex)
    norm = np.linalg.norm(p.coefficients)
    # |p(r)| is compared against the polynomial's magnitude on |s| = |r|
    scale = np.array([np.sum(np.abs(p.coefficients) * abs(z) ** np.arange(p.degree + 1)) for z in r])
    if r.size != p.degree or np.any(np.abs(p(r)) > 1e-8 * np.maximum(scale, norm)):
        raise NonConvergence("companion eigenvalues are not accurate roots")
    return r


def count_rhp(p: IntPoly, margin: float = 0.0) -> int:
    r = roots(p)
    if np.any(np.abs(r.real) < 1e-9):
        raise BoundaryRoot("root on the imaginary axis")
    return int(np.sum(r.real > margin))
