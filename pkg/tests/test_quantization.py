"""FFT quantization of the damping operator and the truncated generator."""

import math

import numpy as np
import pytest

from adwave.quantization import (Grid, QuantizationError, WOps,
                                 apply_multiplier, apply_W,
                                 assemble_generator, mode_list, w_matrix)
from adwave.symbols import build_example


@pytest.fixture(scope="module")
def grid():
    return Grid(64)


@pytest.fixture(scope="module")
def two_strip():
    return build_example("two_strip")


def _random_field(grid, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((grid.n, grid.n)) \
        + 1j * rng.standard_normal((grid.n, grid.n))


class TestGrid:
    def test_size_validation(self):
        with pytest.raises(QuantizationError):
            Grid(15)
        with pytest.raises(QuantizationError):
            Grid(18 + 1)

    def test_mode_norm_is_one(self, grid):
        assert grid.norm(grid.mode(3, -2)) == pytest.approx(1.0)

    def test_modes_are_orthonormal(self, grid):
        assert grid.inner(grid.mode(1, 2), grid.mode(1, 2)) == pytest.approx(1)
        assert abs(grid.inner(grid.mode(1, 2), grid.mode(2, 1))) < 1e-12

    def test_laplacian_multiplier_on_mode(self, grid):
        u = grid.mode(2, 1)
        lap = apply_multiplier(grid.laplacian_multiplier, u)
        assert np.allclose(lap, -4 * math.pi**2 * 5 * u)


class TestApplyW:
    def test_self_adjoint(self, grid, two_strip):
        u, v = _random_field(grid, 0), _random_field(grid, 1)
        wu, wv = apply_W(two_strip, u, grid), apply_W(two_strip, v, grid)
        assert abs(grid.inner(wu, v) - grid.inner(u, wv)) < 1e-12

    def test_positive_semidefinite(self, grid, two_strip):
        u = _random_field(grid, 2)
        q = grid.inner(apply_W(two_strip, u, grid), u).real
        assert q >= -1e-12

    def test_constant_variant_is_scalar(self, grid):
        desc = build_example("constant", c=0.1)
        u = _random_field(grid, 3)
        assert np.allclose(apply_W(desc, u, grid), 0.1 * u)

    def test_zero_damping_detected(self, grid):
        desc = build_example("constant", c=0.0)
        ops = WOps(desc, grid)
        assert ops.is_zero
        u = _random_field(grid, 4)
        assert np.allclose(ops.apply_exp(u, 0.5), u)

    def test_exp_matches_scalar_exponential(self, grid):
        desc = build_example("constant", c=0.1)
        ops = WOps(desc, grid)
        u = _random_field(grid, 5)
        assert np.allclose(ops.apply_exp(u, 2.0), math.exp(-0.2) * u)

    def test_exp_is_contraction(self, grid, two_strip):
        ops = WOps(two_strip, grid)
        u = _random_field(grid, 6)
        assert grid.norm(ops.apply_exp(u, 1.0)) <= grid.norm(u) * (1 + 1e-12)

    def test_multiplicative_variant_multiplies(self, grid):
        desc = build_example("multiplicative")
        chi = np.asarray(
            desc.factors[0].spatial_inner.eval_spatial(*grid.nodes))
        u = _random_field(grid, 7)
        assert np.allclose(apply_W(desc, u, grid), chi**2 * u, atol=1e-12)


class TestGenerator:
    def test_mode_list_size(self):
        modes = mode_list(3)
        assert len(modes) == 49
        assert modes[0] == (-3, -3) and modes[-1] == (3, 3)

    def test_aliasing_guard(self, two_strip):
        with pytest.raises(QuantizationError):
            w_matrix(two_strip, 8, Grid(16))

    def test_constant_generator_blocks(self):
        # [[0, 1], [-4 pi^2 |n|^2, -2c]] exactly, per mode
        desc = build_example("constant", c=0.1)
        gen = assemble_generator(desc, 2)
        m = len(gen.modes)
        assert np.allclose(gen.matrix[:m, m:], np.eye(m))
        assert np.allclose(gen.w_block, 0.1 * np.eye(m), atol=1e-12)
        lam = gen.laplacian_diagonal
        expect = [-4 * math.pi**2 * (i * i + j * j) for i, j in gen.modes]
        assert np.allclose(lam, expect)

    def test_w_block_hermitian_psd(self, two_strip):
        gen = assemble_generator(two_strip, 4)
        wb = gen.w_block
        assert np.allclose(wb, wb.conj().T, atol=1e-10)
        eigs = np.linalg.eigvalsh(0.5 * (wb + wb.conj().T))
        assert eigs.min() >= -1e-10
