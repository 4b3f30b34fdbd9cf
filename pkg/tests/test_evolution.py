"""Strang-splitting evolution: energy oracles, convergence, and fitting."""

import math

import numpy as np
import pytest

from adwave.evolution import (EnergyTrace, EvolutionError, FieldState,
                              dissipation_residual, energy, evolve, fit_decay,
                              random_state, state_from_modes, step)
from adwave.quantization import Grid
from adwave.symbols import build_example


@pytest.fixture(scope="module")
def grid():
    return Grid(32)


@pytest.fixture(scope="module")
def two_strip():
    return build_example("two_strip")


@pytest.fixture(scope="module")
def zero_damping():
    return build_example("constant", c=0.0)


class TestEnergy:
    def test_constant_displacement_has_zero_energy(self, grid):
        state = FieldState(np.ones((grid.n, grid.n)),
                           np.zeros((grid.n, grid.n)), grid)
        assert energy(state) == pytest.approx(0.0, abs=1e-14)

    def test_single_mode_oracle(self, grid):
        # u = e_n with zero velocity: E = (1/2) * 4 pi^2 |n|^2
        state = state_from_modes(grid, [(2, 1)], [1.0], [0.0])
        assert energy(state) == pytest.approx(0.5 * 4 * math.pi**2 * 5,
                                              rel=1e-12)

    def test_velocity_only(self, grid):
        state = FieldState(np.zeros((grid.n, grid.n)),
                           2.0 * np.ones((grid.n, grid.n)), grid)
        assert energy(state) == pytest.approx(2.0)

    def test_shape_validation(self, grid):
        with pytest.raises(EvolutionError):
            FieldState(np.zeros((3, 3)), np.zeros((3, 3)), grid)


class TestFreeEvolution:
    def test_energy_conserved_without_damping(self, grid, zero_damping):
        init = random_state(grid, band=3, seed=1)
        trace = evolve(zero_damping, init, T=10.0, dt=1e-3, record_every=100)
        drift = np.abs(trace.energies - trace.energies[0]).max()
        assert drift / trace.energies[0] < 1e-10

    def test_single_mode_oscillator_closed_form(self, grid, zero_damping):
        # u(t) = cos(omega t) e_n solves the free wave equation exactly
        n = (1, 2)
        omega = 2 * math.pi * math.sqrt(5)
        init = state_from_modes(grid, [n], [1.0], [0.0])
        t = 0.35
        out = init
        for _ in range(35):
            out = step(zero_damping, out, 0.01)
        expect = state_from_modes(grid, [n], [math.cos(omega * t)],
                                  [-omega * math.sin(omega * t)])
        assert np.allclose(out.u, expect.u, atol=1e-10)
        assert np.allclose(out.v, expect.v, atol=1e-8)

    def test_zero_data_stays_zero(self, grid, two_strip):
        z = np.zeros((grid.n, grid.n))
        trace = evolve(two_strip, FieldState(z, z, grid), T=1.0, dt=1e-2)
        assert np.all(trace.energies == 0.0)


class TestDampedEvolution:
    def test_energy_monotone(self, grid, two_strip):
        init = random_state(grid, band=3, seed=4)
        trace = evolve(two_strip, init, T=3.0, dt=1e-3, record_every=50)
        assert np.all(np.diff(trace.energies) <= 1e-10 * trace.energies[0])

    def test_linearity(self, grid, two_strip):
        a = random_state(grid, band=2, seed=5)
        b = random_state(grid, band=2, seed=6)
        combo = FieldState(a.u + 2 * b.u, a.v + 2 * b.v, grid)
        sa = step(two_strip, a, 1e-2)
        sb = step(two_strip, b, 1e-2)
        sc = step(two_strip, combo, 1e-2)
        assert np.allclose(sc.u, sa.u + 2 * sb.u, atol=1e-9)
        assert np.allclose(sc.v, sa.v + 2 * sb.v, atol=1e-9)

    def test_strang_second_order(self, grid, two_strip):
        # Richardson: halving dt should cut the endpoint error ~4x
        init = random_state(grid, band=2, seed=7)
        T = 0.5

        def endpoint(dt):
            out = init
            for _ in range(int(round(T / dt))):
                out = step(two_strip, out, dt)
            return out

        fine = endpoint(1e-3)
        err = [np.abs(endpoint(dt).u - fine.u).max() for dt in (2e-2, 1e-2)]
        ratio = err[0] / err[1]
        assert 3.0 < ratio < 5.0

    def test_dissipation_identity(self, grid, two_strip):
        init = random_state(grid, band=3, seed=8)
        trace = evolve(two_strip, init, T=0.5, dt=1e-3, record_every=1,
                       keep_states=True)
        assert dissipation_residual(two_strip, trace) < 1e-4

    def test_residual_needs_states(self, two_strip, grid):
        init = random_state(grid, band=2, seed=9)
        trace = evolve(two_strip, init, T=0.5, dt=1e-2)
        with pytest.raises(EvolutionError):
            dissipation_residual(two_strip, trace)


class TestFitDecay:
    def test_recovers_synthetic_rate(self):
        t = np.linspace(0, 10, 200)
        trace = EnergyTrace(t, 3.0 * np.exp(-0.7 * t), dt=t[1] - t[0])
        fit = fit_decay(trace, (1.0, 9.0))
        assert fit.rate == pytest.approx(0.7, abs=1e-6)
        assert fit.residual < 1e-10

    def test_zero_damping_rate_is_zero(self, grid, zero_damping):
        init = random_state(grid, band=2, seed=10)
        trace = evolve(zero_damping, init, T=6.0, dt=1e-2, record_every=10)
        fit = fit_decay(trace, (1.0, 6.0))
        assert abs(fit.rate) < 1e-8

    def test_window_too_small(self):
        t = np.linspace(0, 10, 200)
        trace = EnergyTrace(t, np.exp(-t), dt=t[1] - t[0])
        with pytest.raises(EvolutionError):
            fit_decay(trace, (4.0, 4.1))

    def test_nonpositive_energy_rejected(self):
        t = np.linspace(0, 10, 50)
        e = np.exp(-t)
        e[20] = 0.0
        with pytest.raises(EvolutionError):
            fit_decay(EnergyTrace(t, e, dt=t[1] - t[0]), (0.0, 10.0))


class TestInitialData:
    def test_random_state_deterministic(self, grid):
        a = random_state(grid, band=3, seed=11)
        b = random_state(grid, band=3, seed=11)
        assert np.array_equal(a.u, b.u) and np.array_equal(a.v, b.v)

    def test_random_state_zero_mean(self, grid):
        a = random_state(grid, band=3, seed=12)
        assert abs(a.u.mean()) < 1e-12

    def test_band_validation(self, grid):
        with pytest.raises(EvolutionError):
            random_state(grid, band=grid.n)

    def test_evolve_argument_validation(self, grid, two_strip):
        init = random_state(grid, band=2, seed=13)
        with pytest.raises(EvolutionError):
            evolve(two_strip, init, T=-1.0, dt=1e-2)
        with pytest.raises(EvolutionError):
            evolve(two_strip, init, T=1.0, dt=1e-2, record_every=0)
