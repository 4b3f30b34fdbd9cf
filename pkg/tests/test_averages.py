"""Geodesic time-averages, the L(t) curve, the cocycle, and the AGCC check."""

import math

import numpy as np
import pytest

from adwave.averages import (L_curve, L_infinity_estimate, L_of_t, agcc_check,
                             g_plus, time_average)
from adwave.geometry import CospherePoint, TorusPoint
from adwave.symbols import build_example


@pytest.fixture(scope="module")
def constant():
    return build_example("constant", c=0.1)


@pytest.fixture(scope="module")
def two_strip():
    return build_example("two_strip")


class TestTimeAverage:
    def test_constant_symbol_averages_to_c(self, constant):
        p = CospherePoint(TorusPoint(0.3, 0.7), 1.2)
        assert time_average(constant, p, 2.5) == pytest.approx(0.1, abs=1e-12)

    def test_rejects_nonpositive_time(self, constant):
        p = CospherePoint(TorusPoint(0, 0), 0.0)
        with pytest.raises(ValueError):
            time_average(constant, p, 0.0)

    def test_matches_direct_quadrature(self, two_strip):
        # compare the table-driven fast path against brute-force sampling
        p = CospherePoint(TorusPoint(0.37, 0.81), 0.9)
        t = 1.3
        s = (np.arange(20000) + 0.5) * (t / 20000)
        c, sn = math.cos(p.theta), math.sin(p.theta)
        brute = np.mean([
            float(two_strip.eval_w(p.base.x1 + c * si, p.base.x2 + sn * si,
                                   p.theta))
            for si in s[::10]
        ])
        assert time_average(two_strip, p, t) == pytest.approx(brute, abs=2e-3)


class TestLCurve:
    def test_constant_level(self, constant):
        assert L_of_t(constant, 2.0) == pytest.approx(0.1, abs=1e-9)
        vals = L_curve(constant, [0.5, 1.0, 4.0], n_x=16, n_theta=16)
        assert np.allclose(vals, 0.1, atol=1e-9)

    def test_two_strip_positive_and_bounded(self, two_strip):
        v = L_of_t(two_strip, 4.0, n_x=32, n_theta=64)
        assert 0.0 < v < two_strip.symbol_bound

    def test_short_average_vanishes_off_support(self, two_strip):
        # an axis-parallel ray launched far from both strips sees no damping
        # for a while, so the sampled infimum at small t is zero
        assert L_of_t(two_strip, 0.05, n_x=32, n_theta=32) == pytest.approx(0.0)

    def test_resolution_validation(self, two_strip):
        with pytest.raises(ValueError):
            L_of_t(two_strip, 1.0, n_x=4)

    def test_estimate_tracks_running_sup(self, two_strip):
        res = L_infinity_estimate(two_strip, 4.0, n_x=24, n_theta=48, n_t=16)
        assert res.L_inf_estimate == pytest.approx(float(res.L_values.max()))
        assert res.L_terminal == pytest.approx(float(res.L_values[-1]))
        assert res.t_samples.size == 16
        d = res.to_dict()
        assert d["sampling"] == {"n_x": 24, "n_theta": 48}

    def test_estimate_requires_long_enough_window(self, two_strip):
        with pytest.raises(ValueError):
            L_infinity_estimate(two_strip, 0.5)


class TestCocycle:
    def test_identity_at_zero(self, two_strip):
        p = CospherePoint(TorusPoint(0.2, 0.2), 0.3)
        assert g_plus(two_strip, p, 0.0) == 1.0

    def test_constant_closed_form(self, constant):
        p = CospherePoint(TorusPoint(0.6, 0.1), 2.2)
        assert g_plus(constant, p, 3.0) == pytest.approx(math.exp(-0.6),
                                                         rel=1e-10)

    def test_monotone_nonincreasing(self, two_strip):
        p = CospherePoint(TorusPoint(0.5, 0.25), 0.4)
        vals = [g_plus(two_strip, p, t) for t in (0.5, 1.0, 2.0, 4.0)]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


class TestAgcc:
    def test_constant_hits_instantly(self, constant):
        verdict = agcc_check(constant, 0.05, 2.0, n_x=16, n_theta=16)
        assert verdict.satisfied
        assert verdict.T0 == pytest.approx(0.0)

    def test_two_strip_satisfied(self, two_strip):
        verdict = agcc_check(two_strip, 0.5, 4.0, n_x=32, n_theta=64)
        assert verdict.satisfied
        assert 0.0 < verdict.T0 < 4.0
        assert verdict.witness is None
        assert verdict.to_dict()["satisfied"] is True

    def test_multiplicative_fails_with_witness(self):
        # rays inside the undamped vertical band travelling vertically never
        # meet the support of the multiplier
        desc = build_example("multiplicative")
        verdict = agcc_check(desc, 0.25, 3.0, n_x=32, n_theta=64)
        assert not verdict.satisfied
        assert verdict.T0 == math.inf
        x1, x2, theta = verdict.witness
        assert float(desc.eval_w(x1, x2, theta)) < 0.25

    def test_floor_validation(self, two_strip):
        with pytest.raises(ValueError):
            agcc_check(two_strip, 0.0, 1.0)
