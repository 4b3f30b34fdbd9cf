"""Spectral analysis of the truncated damped-wave generator.

Eigenvalues of the dense truncation of [[0, I], [Laplace, -2W]] give the
spectral abscissa D0 (sup Re over nonzero eigenvalues), the curve
D(R) = sup{Re lambda : |lambda| > R}, a high-frequency abscissa estimate,
and a kernel check: the minimum singular value of W restricted to each
Laplacian eigenspace, which certifies that no undamped stationary mode
survives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .quantization import Grid, GeneratorMatrix, assemble_generator, w_matrix
from .symbols import DampingDescriptor

__all__ = ["SpectrumResult", "Assumption2Result", "spectrum",
           "assumption2_check", "slowest_mode"]


class SpectrumError(RuntimeError):
    pass


@dataclass
class SpectrumResult:
    """Eigenvalues of the truncated generator and derived abscissas."""

    eigenvalues: np.ndarray
    n_max: int
    zero_tol: float
    D0: float
    R_samples: np.ndarray
    D_of_R: np.ndarray
    D_inf_estimate: float
    R_large: float
    grid_n: int

    def summary(self) -> dict:
        return {
            "D0": self.D0,
            "D_inf": self.D_inf_estimate,
            "zero_tol": self.zero_tol,
            "n_max": self.n_max,
        }


@dataclass
class Assumption2Result:
    """Minimum singular values of the W-Gram blocks per Laplacian eigenspace."""

    min_sigma: float
    per_eigenspace: dict[int, float]
    radius: int

    @property
    def satisfied(self) -> bool:
        return self.min_sigma > 0.0


def _eigvals(matrix: np.ndarray) -> np.ndarray:
    try:
        vals = scipy.linalg.eigvals(matrix)
    except Exception as exc:  # pragma: no cover - LAPACK failure is exotic
        raise SpectrumError(f"eigensolver failed on {matrix.shape} matrix: {exc}")
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def spectrum(desc: DampingDescriptor, n_max: int, grid: Grid | None = None,
             zero_tol: float | None = None, n_R: int = 40) -> SpectrumResult:
    """Eigenvalues and abscissas of the generator truncated at |n|_inf <= n_max."""
    gen = assemble_generator(desc, n_max, grid)
    vals = _eigvals(gen.matrix)
    if zero_tol is None:
        zero_tol = 1e-6 * float(np.linalg.norm(gen.matrix, ord=np.inf))
    nonzero = vals[np.abs(vals) > zero_tol]
    d0 = float(nonzero.real.max()) if nonzero.size else 0.0
    max_abs = float(np.abs(vals).max())
    r_samples = np.linspace(zero_tol, 0.9 * max_abs, n_R)
    d_of_r = np.array([
        vals.real[np.abs(vals) > r].max() if np.any(np.abs(vals) > r) else -np.inf
        for r in r_samples
    ])
    r_large = 0.5 * float(np.abs(vals.imag).max())
    high = vals[np.abs(vals.imag) >= r_large]
    d_inf = float(high.real.max()) if high.size else d0
    return SpectrumResult(
        eigenvalues=vals,
        n_max=n_max,
        zero_tol=float(zero_tol),
        D0=d0,
        R_samples=r_samples,
        D_of_R=d_of_r,
        D_inf_estimate=d_inf,
        R_large=r_large,
        grid_n=gen.grid_n,
    )


def slowest_mode(desc: DampingDescriptor, n_max: int,
                 grid: Grid | None = None,
                 zero_tol: float | None = None):
    """Eigenpair attaining the spectral abscissa D0.

    Returns (eigenvalue, generator, eigenvector) where the eigenvector is a
    stacked coefficient vector (u_hat then v_hat) over generator.modes.
    """
    gen = assemble_generator(desc, n_max, grid)
    try:
        vals, vecs = scipy.linalg.eig(gen.matrix)
    except Exception as exc:  # pragma: no cover
        raise SpectrumError(f"eigensolver failed: {exc}")
    if zero_tol is None:
        zero_tol = 1e-6 * float(np.linalg.norm(gen.matrix, ord=np.inf))
    mask = np.abs(vals) > zero_tol
    idx = np.flatnonzero(mask)[np.argmax(vals.real[mask])]
    return complex(vals[idx]), gen, vecs[:, idx]


def _eigenspaces(radius: int) -> dict[int, list[tuple[int, int]]]:
    """Lattice points grouped by |n|^2 = mu for 0 < mu <= radius^2."""
    spaces: dict[int, list[tuple[int, int]]] = {}
    for i in range(-radius, radius + 1):
        for j in range(-radius, radius + 1):
            mu = i * i + j * j
            if 0 < mu <= radius * radius:
                spaces.setdefault(mu, []).append((i, j))
    return spaces


def assumption2_check(desc: DampingDescriptor, radius: int,
                      grid: Grid | None = None) -> Assumption2Result:
    """sigma_min of W on each Laplacian eigenspace span{e_n : |n|^2 = mu}.

    A positive overall minimum means W annihilates no eigenfunction of the
    Laplacian up to the given frequency radius; zero flags an undamped mode.
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    if grid is None:
        grid = Grid(max(4 * radius, 16))
    wb = w_matrix(desc, radius, grid)
    modes = [(i, j) for i in range(-radius, radius + 1)
             for j in range(-radius, radius + 1)]
    index = {m: k for k, m in enumerate(modes)}
    per: dict[int, float] = {}
    for mu, pts in sorted(_eigenspaces(radius).items()):
        rows = [index[p] for p in pts]
        block = wb[np.ix_(rows, rows)]
        per[mu] = float(np.linalg.svd(block, compute_uv=False).min())
    return Assumption2Result(min_sigma=min(per.values()), per_eigenspace=per,
                             radius=radius)
