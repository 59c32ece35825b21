import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from conftest import EX2, EX3, mp_evaluate, random_charfn
from fdstab.calculus import differentiate, evaluate, log_derivative, principal_power
from fdstab.errors import BranchCutViolation, DomainError, RootOnContour
from fdstab.expr import CharFn, charfn_from_text

STEPS = (1e-3, 1e-4, 1e-5)


def fd_errors(cf, dcf, s):
    """|central difference - Delta'(s)| for each step. Both sides are formed in
    40-digit arithmetic so rounding does not mask the h**2 term."""
    out = []
    with mp.workdps(40):
        exact = mp_evaluate(dcf, s)
        for h in STEPS:
            h = mp.mpf(h)
            fd = (mp_evaluate(cf, mp.mpc(s) + h) - mp_evaluate(cf, mp.mpc(s) - h)) / (2 * h)
            out.append(float(abs(fd - exact)))
    return out


def convergence_order(errors):
    return math.log10(errors[0] / errors[-1]) / math.log10(STEPS[0] / STEPS[-1])


class TestDifferentiate:
    def test_linear(self):
        d = differentiate(charfn_from_text("s + 1"))
        assert [b.poly.pairs() for b in d.blocks] == [[(1.0, 0.0)]]

    def test_sqrt(self):
        d = differentiate(charfn_from_text("s^0.5 + 2*s + 1"))
        assert d.blocks[0].poly.pairs() == [(2.0, 0.0), (0.5, -0.5)]

    def test_delayed_block_product_rule(self):
        # (s^0.5 + 1) exp(-s^0.5): P' = 0.5 s^-0.5, z b s^(b-1) P = 0.5 + 0.5 s^-0.5
        d = differentiate(charfn_from_text("s + (s^0.5 + 1)*exp(-s^0.5)"))
        assert d.blocks[1].poly.pairs() == [(-0.5, 0.0)]
        assert d.blocks[1].delay == charfn_from_text("s + exp(-s^0.5)").delayed[0].delay

    def test_block_structure_preserved(self, rng):
        for _ in range(20):
            cf = random_charfn(rng)
            d = differentiate(cf)
            assert [b.delay for b in d.blocks] == [b.delay for b in cf.blocks]


class TestEvaluate:
    def test_linear_at_i(self):
        assert evaluate(charfn_from_text("s + 1"), 1j) == 1 + 1j

    def test_principal_sqrt(self):
        v = evaluate(charfn_from_text("s^0.5 + 0*s + s - s"), 1j)
        assert v == pytest.approx(cmath.exp(1j * math.pi / 4), abs=1e-15)

    def test_array_matches_scalar(self):
        cf = charfn_from_text(EX3, {"tau": 1.0})
        s = np.array([0.3 + 2j, 1j, 5 - 1j])
        np.testing.assert_array_equal(evaluate(cf, s), [evaluate(cf, z) for z in s])

    def test_example_two_conjugate(self):
        cf = charfn_from_text(EX2, {"K": 21})
        assert evaluate(cf, -1j) == evaluate(cf, 1j).conjugate()

    def test_branch_cut(self):
        with pytest.raises(BranchCutViolation):
            evaluate(charfn_from_text("s^0.5 + 1"), -2.0)
        # integer powers are single valued
        assert evaluate(charfn_from_text("s^2 + 1"), -2.0) == 5.0

    def test_negative_power_at_origin(self):
        d = differentiate(charfn_from_text("s^0.5 + 1"))
        with pytest.raises(DomainError):
            evaluate(d, 0.0)
        assert evaluate(charfn_from_text("s^0.5 + 1"), 0.0) == 1.0

    def test_integer_powers_use_multiplication(self):
        s = 1.1 + 0.7j
        assert principal_power(s, 3) == pytest.approx(s * s * s, rel=4e-16)
        assert principal_power(s, -2) == pytest.approx(1 / (s * s), rel=4e-16)
        # exact on the negative real axis, where exp(3 log s) would leave an imaginary residue
        assert principal_power(-2.0, 3) == -8.0

    def test_against_mpmath(self, rng):
        for _ in range(30):
            cf = random_charfn(rng)
            for s in rng.uniform(0.1, 10, 5) + 1j * rng.uniform(-10, 10, 5):
                ref = complex(mp_evaluate(cf, s))
                assert abs(evaluate(cf, s) - ref) <= 1e-13 * max(1.0, abs(ref)) * 10


class TestLogDerivative:
    def test_stable_first_order(self):
        cf = charfn_from_text("s + 1")
        assert log_derivative(cf, differentiate(cf), 1j) == pytest.approx(0.5 - 0.5j, abs=1e-16)

    def test_unstable_first_order(self):
        cf = charfn_from_text("s - 1")
        assert log_derivative(cf, differentiate(cf), 1j) == pytest.approx(-0.5 - 0.5j, abs=1e-16)

    def test_example_three_conjugate(self):
        cf = charfn_from_text(EX3, {"tau": 1.0})
        d = differentiate(cf)
        assert log_derivative(cf, d, -2j) == log_derivative(cf, d, 2j).conjugate()

    def test_root_on_contour(self):
        cf = charfn_from_text("s^2 + 1")
        with pytest.raises(RootOnContour):
            log_derivative(cf, differentiate(cf), 1j)


class TestInvariants:
    def test_conjugate_symmetry(self, rng):
        for _ in range(50):
            cf = random_charfn(rng)
            d = differentiate(cf)
            s = rng.uniform(0, 10, 20) + 1j * rng.uniform(-10, 10, 20)
            for f in (cf, d):
                v, w = evaluate(f, s), evaluate(f, s.conj())
                assert np.max(np.abs(w - v.conj()) / np.abs(v)) < 1e-13

    def test_finite_difference_second_order(self, rng):
        for _ in range(10):
            cf = random_charfn(rng)
            d = differentiate(cf)
            for s in rng.uniform(0.1, 10, 5) + 1j * rng.uniform(-10, 10, 5):
                errs = fd_errors(cf, d, complex(s))
                assert convergence_order(errs) >= 1.9

    def test_linearity(self, rng):
        for _ in range(30):
            f, g = random_charfn(rng), random_charfn(rng)
            a, b = rng.uniform(0.5, 2.0, 2)
            combo = CharFn.from_blocks(list(f.scaled(a).blocks) + list(g.scaled(b).blocks))
            s = rng.uniform(0.1, 10, 10) + 1j * rng.uniform(-10, 10, 10)
            lhs = evaluate(differentiate(combo), s)
            rhs = a * evaluate(differentiate(f), s) + b * evaluate(differentiate(g), s)
            scale = a * np.abs(evaluate(differentiate(f), s)) + b * np.abs(evaluate(differentiate(g), s))
            assert np.max(np.abs(lhs - rhs) / scale) < 1e-12
