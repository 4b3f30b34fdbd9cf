"""Eigenvalues of the truncated generator and derived abscissas."""

import math

import numpy as np
import pytest

from adwave.spectrum import assumption2_check, slowest_mode, spectrum
from adwave.symbols import build_example


@pytest.fixture(scope="module")
def two_strip():
    return build_example("two_strip")


def _match_sets(a, b, tol):
    """Greedy multiset comparison robust to ordering of degenerate values."""
    a = np.asarray(a, complex)
    b = list(np.asarray(b, complex))
    assert len(a) == len(b)
    for lam in a:
        dists = [abs(lam - mu) for mu in b]
        j = int(np.argmin(dists))
        assert dists[j] < tol, f"{lam} unmatched (closest {b[j]})"
        b.pop(j)


def _constant_eigenvalues(n_max, c):
    """Closed-form spectrum for W = c*Id: per mode, roots of
    lambda^2 + 2c lambda + 4 pi^2 |n|^2 = 0."""
    out = []
    for i in range(-n_max, n_max + 1):
        for j in range(-n_max, n_max + 1):
            mu = 4 * math.pi**2 * (i * i + j * j)
            disc = c * c - mu
            if disc >= 0:
                out += [-c + math.sqrt(disc), -c - math.sqrt(disc)]
            else:
                r = math.sqrt(-disc)
                out += [complex(-c, r), complex(-c, -r)]
    return np.asarray(out, complex)


class TestConstantClosedForm:
    def test_eigenvalues_match(self):
        desc = build_example("constant", c=0.1)
        res = spectrum(desc, 2)
        _match_sets(_constant_eigenvalues(2, 0.1), res.eigenvalues, 1e-7)

    def test_abscissa_is_minus_c(self):
        desc = build_example("constant", c=0.1)
        res = spectrum(desc, 3)
        assert res.D0 == pytest.approx(-0.1, abs=1e-8)
        assert res.D_inf_estimate == pytest.approx(-0.1, abs=1e-8)

    def test_zero_damping_spectrum_is_imaginary(self):
        desc = build_example("constant", c=0.0)
        res = spectrum(desc, 2)
        assert np.abs(res.eigenvalues.real).max() < 1e-8


class TestTwoStrip:
    def test_stable_half_plane(self, two_strip):
        res = spectrum(two_strip, 6)
        nonzero = res.eigenvalues[np.abs(res.eigenvalues) > res.zero_tol]
        assert nonzero.real.max() < 0

    def test_d_of_r_nonincreasing(self, two_strip):
        res = spectrum(two_strip, 6)
        finite = res.D_of_R[np.isfinite(res.D_of_R)]
        assert np.all(np.diff(finite) <= 1e-12)

    def test_conjugate_symmetry(self, two_strip):
        # real operator: spectrum is symmetric about the real axis
        res = spectrum(two_strip, 5)
        vals = res.eigenvalues
        _match_sets(vals, vals.conj(), 1e-6)

    def test_slowest_mode_consistent(self, two_strip):
        lam, gen, vec = slowest_mode(two_strip, 6)
        assert lam.real == pytest.approx(spectrum(two_strip, 6).D0, abs=1e-9)
        resid = gen.matrix @ vec - lam * vec
        assert np.linalg.norm(resid) < 1e-8 * np.linalg.norm(vec)


class TestAssumption2:
    def test_constant_blocks_equal_c(self):
        desc = build_example("constant", c=0.1)
        res = assumption2_check(desc, 3)
        assert res.satisfied
        for sigma in res.per_eigenspace.values():
            assert sigma == pytest.approx(0.1, abs=1e-10)

    def test_zero_damping_unsatisfied(self):
        desc = build_example("constant", c=0.0)
        res = assumption2_check(desc, 2)
        assert not res.satisfied
        assert res.min_sigma == pytest.approx(0.0, abs=1e-12)

    def test_two_strip_satisfied(self, two_strip):
        res = assumption2_check(two_strip, 4)
        assert res.satisfied
        assert res.min_sigma > 1e-4
        assert set(res.per_eigenspace) == {
            mu for mu in range(1, 17)
            if any(i * i + j * j == mu for i in range(5) for j in range(5))}

    def test_radius_validation(self, two_strip):
        with pytest.raises(ValueError):
            assumption2_check(two_strip, 0)
