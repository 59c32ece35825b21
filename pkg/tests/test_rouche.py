import math

import numpy as np
import pytest

from conftest import EX1, EX2, EX3, EX4, random_charfn
from fdstab.calculus import differentiate
from fdstab.expr import charfn_from_text
from fdstab.rouche import (
    INDETERMINATE,
    STABLE,
    IntegrationOptions,
    Verdict,
    count_unstable,
    integrand,
    phase_mismatch,
)


def count(text, params=None, **kw):
    return count_unstable(charfn_from_text(text, params), IntegrationOptions(**kw))


class TestIntegrand:
    @pytest.mark.parametrize("text, omega, value", [("s + 1", 1.0, 0.5), ("s + 1", 3.0, 0.1), ("s - 1", 1.0, -0.5)])
    def test_values(self, text, omega, value):
        cf = charfn_from_text(text)
        assert integrand(cf, differentiate(cf), omega) == pytest.approx(value, abs=1e-15)

    def test_second_order_closed_form(self):
        # Re{1/(iw+1)} + Re{1/(iw+2)} at w = 2
        cf = charfn_from_text("s^2 + 3*s + 2")
        assert integrand(cf, differentiate(cf), 2.0) == pytest.approx(1 / 5 + 2 / 8, abs=1e-15)

    def test_array(self):
        cf = charfn_from_text(EX2, {"K": 21})
        w = np.geomspace(1e-3, 1e3, 7)
        np.testing.assert_allclose(integrand(cf, differentiate(cf), w),
                                   [integrand(cf, differentiate(cf), x) for x in w], rtol=1e-13, atol=1e-15)

    def test_phase_mismatch(self):
        # the integrand of s + 1 over [1, 2] is d/dw atan(w)
        cf = charfn_from_text("s + 1")
        exact = math.atan(2.0) - math.atan(1.0)
        lefts, rights = np.array([1.0, 1.0]), np.array([2.0, 2.0])
        mis = phase_mismatch(cf, lefts, rights, np.array([exact, exact + 0.3]))
        assert mis[0] == 0.0
        assert mis[1] == pytest.approx(0.3, abs=5e-12)
        # a full turn is invisible to the check, by design
        assert phase_mismatch(cf, lefts[:1], rights[:1], np.array([exact + 2 * math.pi]))[0] < 1e-11


class TestVerdict:
    def test_strings(self):
        assert str(STABLE) == "Stable"
        assert str(Verdict("Unstable", 2)) == "Unstable(2)"
        assert str(Verdict("Unstable")) == "Unstable"
        assert str(INDETERMINATE) == "Indeterminate"

    def test_options_validated(self):
        with pytest.raises(ValueError):
            IntegrationOptions(eps=0.0)
        with pytest.raises(ValueError):
            IntegrationOptions(eps=10.0, omega_max=1.0)


class TestExamples:
    def test_example_one_stable(self):
        r = count(EX1)
        assert r.verdict == STABLE
        assert abs(r.m_raw) <= 5e-3

    @pytest.mark.parametrize("k, n", [(20, 0), (21, 0), (22, 2), (23, 2)])
    def test_example_two(self, k, n):
        r = count(EX2, {"K": k})
        assert r.m_rounded == n
        assert r.residual < 0.05
        assert not r.verdict.is_indeterminate

    @pytest.mark.parametrize("tau, n", [(0.9, 2), (0.99, 2), (1.0, 0), (1.2, 0), (1.6, 2)])
    def test_example_three(self, tau, n):
        r = count(EX3, {"tau": tau})
        assert r.m_rounded == n
        assert not r.verdict.is_indeterminate

    def test_example_four(self):
        r = count(EX4, omega_max=100.0)
        assert r.verdict == STABLE
        assert abs(r.m_raw) <= 5e-2

    @pytest.mark.parametrize(
        "text, n",
        [("s - 1", 1), ("s^2 - 2*s + 2", 2), ("s + exp(-s)", 0), ("s - 0.5*exp(-s)", 1), ("s + 2*exp(-s)", 2)],
    )
    def test_small_cases(self, text, n):
        r = count(text)
        assert r.m_rounded == n
        assert str(r.verdict) == ("Stable" if n == 0 else f"Unstable({n})")


class TestBehaviour:
    def test_scaling_invariance(self, rng):
        for _ in range(10):
            cf = random_charfn(rng)
            a, b = count_unstable(cf), count_unstable(cf.scaled(float(rng.uniform(0.01, 100))))
            if a.m_raw is None:
                continue
            assert abs(a.m_raw - b.m_raw) < 1e-10

    def test_parity_of_real_roots(self, rng):
        # complex roots come in conjugate pairs, so the count is odd exactly
        # when Delta changes sign on the positive real axis
        seen = 0
        for _ in range(25):
            cf = random_charfn(rng)
            r = count_unstable(cf)
            if r.verdict.is_indeterminate or r.m_rounded is None:
                continue
            seen += 1
            assert r.m_rounded % 2 == (1 if cf.value_at_origin() < 0 else 0)
        assert seen >= 15

    def test_doubling_history(self):
        r = count(EX3, {"tau": 1.0})
        omegas = [w for w, _ in r.history]
        assert omegas == [1000.0 * 2**k for k in range(r.doublings + 1)]
        assert r.omega_used == omegas[-1]
        assert abs(r.history[-1][1] - r.history[-2][1]) < 0.025

    def test_doubling_budget_exhausted(self):
        r = count(EX4, omega_max=2.0, max_doublings=0)
        assert r.verdict.is_indeterminate
        assert any("did not settle" in w for w in r.warnings)

    @pytest.mark.parametrize("text", ["s", "s^0.5 + s", "s^2 + s*exp(-s)", "s^1.5 + s - s"])
    def test_origin_singularity(self, text):
        r = count(text)
        assert str(r.verdict) == "Unstable"
        assert r.m_raw is None
        assert "origin" in r.warnings[0]

    @pytest.mark.parametrize("text", ["s^2 + 1", "s^2 + 1e-9*s + 1", "s^2 - 1e-9*s + 1"])
    def test_root_on_or_near_axis(self, text):
        r = count(text)
        assert r.verdict.is_indeterminate
        assert r.warnings

    def test_report_dict(self):
        d = count(EX2, {"K": 22}).to_dict()
        assert d["verdict"] == "Unstable(2)"
        assert "history" not in d
        assert math.isfinite(d["m_raw"])
