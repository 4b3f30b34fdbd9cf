"""Discrete Kohn-Nirenberg quantization on the torus grid.

Operators act on complex grid functions via FFT: multiply by a cutoff in
space, by a multiplier in frequency, and by the outer cutoff in space.  The
truncated semigroup generator is assembled by applying W to each Fourier mode
and projecting.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .symbols import DampingDescriptor, DampingFactor

__all__ = ["Grid", "WOps", "GeneratorMatrix", "apply_multiplier", "apply_B",
           "apply_W", "assemble_generator", "mode_list"]


class QuantizationError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """Uniform n x n grid on the torus with its FFT frequency lattice."""

    n: int

    def __post_init__(self):
        if self.n < 16 or self.n % 2:
            raise QuantizationError(f"grid size must be even and >= 16, got {self.n}")

    @property
    def nodes(self):
        """Coordinate arrays (x1, x2), each n x n, x[i] = i/n."""
        x = np.arange(self.n) / self.n
        return np.meshgrid(x, x, indexing="ij")

    @property
    def freqs(self):
        """Integer frequency lattice (n1, n2) matching numpy's fft2 layout."""
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        return np.meshgrid(k, k, indexing="ij")

    @property
    def laplacian_multiplier(self):
        n1, n2 = self.freqs
        return -4.0 * np.pi**2 * (n1**2 + n2**2)

    def mode(self, n1: int, n2: int):
        """The Fourier mode exp(2 pi i n.x) sampled on the grid."""
        x1, x2 = self.nodes
        return np.exp(2j * np.pi * (n1 * x1 + n2 * x2))

    def norm(self, u) -> float:
        """L^2(T^2) norm of a grid function (unit-area domain)."""
        return float(np.sqrt(np.mean(np.abs(u) ** 2)))

    def inner(self, u, v) -> complex:
        """L^2 inner product <u, v> = int u * conj(v)."""
        return complex(np.mean(u * np.conj(v)))


def apply_multiplier(m, u):
    """Apply a Fourier multiplier: u_hat(n) -> m(n) u_hat(n).

    ``m`` is an array over the fft frequency lattice of ``u``'s grid.
    """
    return np.fft.ifft2(m * np.fft.fft2(u))


@lru_cache(maxsize=16)
def _factor_arrays(factor: DampingFactor, n: int):
    grid = Grid(n)
    x1, x2 = grid.nodes
    n1, n2 = grid.freqs
    chi = np.asarray(factor.spatial_inner.eval_spatial(x1, x2), dtype=float)
    chi_t = np.asarray(factor.spatial_outer.eval_spatial(x1, x2), dtype=float)
    m = factor.multiplier(n1, n2)
    return chi, chi_t, m


def apply_B(factor: DampingFactor, u, grid: Grid):
    """B u = chi_tilde * IDFT(m * DFT(chi * u))."""
    chi, chi_t, m = _factor_arrays(factor, grid.n)
    return chi_t * apply_multiplier(m, chi * u)


def apply_B_adjoint(factor: DampingFactor, u, grid: Grid):
    """B* u = chi * IDFT(m * DFT(chi_tilde * u)) (m is real)."""
    chi, chi_t, m = _factor_arrays(factor, grid.n)
    return chi * apply_multiplier(m, chi_t * u)


def apply_W(desc: DampingDescriptor, u, grid: Grid):
    """W u = sum_j Bj*(Bj u); self-adjoint and positive semidefinite."""
    out = np.zeros_like(np.asarray(u, dtype=complex))
    for f in desc.factors:
        out += apply_B_adjoint(f, apply_B(f, u, grid), grid)
    return out


class WOps:
    """Cached application of W (and exp(-s W)) on a fixed grid."""

    def __init__(self, desc: DampingDescriptor, grid: Grid):
        self.desc = desc
        self.grid = grid
        self._arrays = [_factor_arrays(f, grid.n) for f in desc.factors]
        self.is_zero = all(
            np.all(chi == 0) or np.all(m == 0) for chi, _, m in self._arrays
        )

    def apply(self, u):
        out = np.zeros_like(np.asarray(u, dtype=complex))
        for chi, chi_t, m in self._arrays:
            v = chi_t * np.fft.ifft2(m * np.fft.fft2(chi * u))
            out += chi * np.fft.ifft2(m * np.fft.fft2(chi_t * v))
        return out

    def apply_exp(self, u, s: float, tol: float = 1e-14):
        """exp(-s W) u by a truncated Taylor series (W is bounded).

        Converges quickly since ||s W|| <= s * (number of factors); an L^2
        contraction for s >= 0 because W is positive semidefinite.
        """
        if self.is_zero:
            return np.array(u, dtype=complex, copy=True)
        out = np.array(u, dtype=complex, copy=True)
        term = out
        norm0 = self.grid.norm(u)
        for j in range(1, 60):
            term = (-s / j) * self.apply(term)
            out = out + term
            if self.grid.norm(term) <= tol * max(norm0, 1e-300):
                break
        return out


def mode_list(n_max: int):
    """Lexicographic list of lattice modes with |n|_inf <= n_max."""
    return [(i, j) for i in range(-n_max, n_max + 1) for j in range(-n_max, n_max + 1)]


@dataclass
class GeneratorMatrix:
    """Dense truncation of the generator [[0, I], [Laplace, -2W]].

    Acts on stacked Fourier coefficients (u_hat, v_hat) over the modes with
    |n|_inf <= n_max.
    """

    matrix: np.ndarray
    modes: list[tuple[int, int]]
    n_max: int
    grid_n: int

    @property
    def w_block(self) -> np.ndarray:
        m = len(self.modes)
        return self.matrix[m:, m:] / -2.0

    @property
    def laplacian_diagonal(self) -> np.ndarray:
        m = len(self.modes)
        return np.diag(self.matrix[m:, :m]).copy()


def w_matrix(desc: DampingDescriptor, n_max: int, grid: Grid) -> np.ndarray:
    """Gram matrix W[m, n] = <W e_n, e_m> over modes |n|_inf <= n_max."""
    if grid.n < 4 * n_max:
        raise QuantizationError(
            f"grid size {grid.n} < 4*n_max = {4 * n_max}: W-block would alias"
        )
    modes = mode_list(n_max)
    ops = WOps(desc, grid)
    cols = np.empty((len(modes), len(modes)), dtype=complex)
    for col, (i, j) in enumerate(modes):
        wu_hat = np.fft.fft2(ops.apply(grid.mode(i, j))) / grid.n**2
        cols[:, col] = [wu_hat[i2 % grid.n, j2 % grid.n] for (i2, j2) in modes]
    return cols


def assemble_generator(desc: DampingDescriptor, n_max: int,
                       grid: Grid | None = None) -> GeneratorMatrix:
    """Assemble the truncated generator as a dense complex matrix."""
    if n_max < 1:
        raise QuantizationError(f"n_max must be >= 1, got {n_max}")
    if grid is None:
        grid = Grid(max(4 * n_max, 16))
    modes = mode_list(n_max)
    m = len(modes)
    wb = w_matrix(desc, n_max, grid)
    lam = np.array([-4.0 * np.pi**2 * (i * i + j * j) for (i, j) in modes])
    a = np.zeros((2 * m, 2 * m), dtype=complex)
    a[:m, m:] = np.eye(m)
    a[m:, :m] = np.diag(lam)
    a[m:, m:] = -2.0 * wb
    return GeneratorMatrix(a, modes, n_max, grid.n)
