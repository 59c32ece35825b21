import math

import mpmath as mp
import numpy as np
import pytest

from fdstab.expr import CharFn

EX1 = "s^(5*pi/6) + s^(pi/2) + s^(pi/3) + 1"
EX2 = "s + K*(s^0.5+1)*exp(-s^0.5)"
EX3 = "s^1.5 - 1.5*s + 4*s^0.5 + 8 - 1.5*s*exp(-tau*s)"
EX4 = "s^(5/6) + (s^(1/2) + s^(1/3))*exp(-0.5*s) + exp(-s)"

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_charfn(rng, max_delayed=2, allow_delay=True):
    """A random valid CharFn: fractional P0 plus up to ``max_delayed`` delayed blocks."""
    n0 = rng.integers(1, 4)
    exps = np.sort(rng.uniform(0.1, 3.0, n0))[::-1]
    p0 = [(1.0, float(exps[0]))]
    p0 += [(float(rng.choice([-1, 1]) * rng.uniform(0.2, 3.0)), float(e)) for e in exps[1:]]
    p0.append((float(rng.uniform(0.5, 3.0)), 0.0))
    alpha_n = float(exps[0])
    delayed = []
    if allow_delay:
        for _ in range(rng.integers(0, max_delayed + 1)):
            k = rng.integers(1, 3)
            dexps = rng.uniform(0.0, alpha_n * 0.95, k)
            pairs = [(float(rng.choice([-1, 1]) * rng.uniform(0.1, 2.0)), float(e)) for e in dexps]
            delayed.append((pairs, float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.2, 1.0))))
    return CharFn.build(p0, delayed)


def random_roots(rng, max_degree=6, min_real=0.1, box=3.0):
    """Roots of a random real polynomial: conjugate pairs and real roots in
    [-box, box]^2, none closer than ``min_real`` to the imaginary axis."""
    degree = int(rng.integers(1, max_degree + 1))
    out = []

    def re():
        return float(rng.choice([-1, 1]) * rng.uniform(min_real, box))

    while len(out) < degree:
        if degree - len(out) >= 2 and rng.random() < 0.6:
            x, y = re(), float(rng.uniform(0.1, box))
            out += [complex(x, y), complex(x, -y)]
        else:
            out.append(complex(re(), 0.0))
    return out


def poly_text(roots):
    """Monic polynomial with the given roots, as expression text."""
    c = np.real(np.poly(roots)).tolist()  # descending
    n = len(c) - 1
    parts = []
    for k, a in enumerate(c):
        if a == 0:
            continue
        p = n - k
        mono = "" if p == 0 else ("s" if p == 1 else f"s^{p}")
        parts.append(f"{a!r}*{mono}" if mono else repr(a))
    return " + ".join(parts).replace("+ -", "- ")


def mp_evaluate(cf_or_blocks, s, dps=40):
    """Independent high-precision evaluation on the principal branch (mpmath)."""
    blocks = cf_or_blocks.blocks
    with mp.workdps(dps):
        s = mp.mpc(s)
        total = mp.mpc(0)
        for b in blocks:
            v = mp.fsum(mp.mpf(t.coeff) * (mp.power(s, mp.mpf(t.exponent)) if t.exponent != 0 else 1)
                        for t in b.poly.terms)
            if b.delay is not None:
                v *= mp.exp(-mp.mpf(b.delay.zeta) * mp.power(s, mp.mpf(b.delay.beta)))
            total += v
        return total


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


