"""Coherent states, Gaussian beams, damped quasimodes, and scaling tests.

Beams ride the geodesic flow at unit speed: the phase is
psi(x, t) = <xi_t, x - x_t> + (1/2) <A(t)(x - x_t), x - x_t> with |xi| = 1/2,
the width matrix obeys the transverse Riccati flow A' = -2 A P_perp A
(P_perp projects off the travel direction; nothing focuses longitudinally on
a flat torus), and the scalar amplitude (1 + 2 t q)^(-1/2) with
q = <A0 e_perp, e_perp> solves the transport equation, which makes the free
wave residual O(k^(-1/2)).  Fields are periodized by summing lattice images,
so they are smooth on the torus even when the beam spreads.

Coherent states follow the |xi0| = 1 normalization instead; the two
conventions never mix inside one computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .averages import time_average
from .geometry import CospherePoint, TorusPoint, geodesic_flow
from .quantization import Grid, WOps, apply_multiplier
from .symbols import BumpProfile, DampingDescriptor, bump_eval

__all__ = ["BeamSpec", "ScalingTestSpec", "BeamError", "coherent_state",
           "riccati", "gaussian_beam", "damped_beam", "beam_residual",
           "damped_beam_residual", "beam_decay_experiment",
           "scaling_experiment", "fit_loglog_slope"]

_IMAGE_RADIUS = 3


class BeamError(ValueError):
    pass


def _check_a0(a0: np.ndarray) -> np.ndarray:
    a0 = np.asarray(a0, dtype=complex)
    if a0.shape != (2, 2):
        raise BeamError(f"A0 must be 2x2, got {a0.shape}")
    if not np.allclose(a0, a0.T, atol=1e-12):
        raise BeamError("A0 must be symmetric")
    if np.linalg.eigvalsh(a0.imag).min() <= 0:
        raise BeamError("Im A0 must be positive definite")
    return a0


@dataclass
class BeamSpec:
    """Initial data of a beam: base point, direction, width matrix, envelope.

    ``bump`` is an optional radial envelope profile; with ``bump=None`` the
    field is a lattice-periodized pure Gaussian (the default for beams, whose
    spreading would otherwise leak past any fixed cutoff).
    """

    x0: TorusPoint
    theta0: float
    k: float
    A0: np.ndarray = field(default_factory=lambda: 1j * np.eye(2))
    bump: BumpProfile | None = None

    def __post_init__(self):
        self.A0 = _check_a0(self.A0)
        if self.k < 1:
            raise BeamError(f"k must be >= 1, got {self.k}")

    @property
    def phase_point(self) -> CospherePoint:
        return CospherePoint(self.x0, self.theta0)


def _grid_check(grid: Grid, k: float, xi_scale: float):
    """Largest significant mode must stay clear of the grid Nyquist rate."""
    top = (k * xi_scale + 6.0 * math.sqrt(k)) / (2.0 * math.pi)
    if top > grid.n / 2:
        raise BeamError(
            f"k = {k} needs modes up to ~{top:.0f}; grid n = {grid.n} "
            f"resolves only {grid.n // 2}"
        )


def riccati(A0: np.ndarray, t: float, direction=None) -> np.ndarray:
    """Width matrix A(t) = A0 (I + 2 t P A0)^(-1) of the beam at time t.

    ``direction`` selects the transverse flow (P projects off the unit travel
    direction); with ``direction=None`` the isotropic law P = I is used.
    Symmetry and positivity of Im A(t) persist for t >= 0.
    """
    a0 = _check_a0(A0)
    if direction is None:
        p = np.eye(2)
    else:
        e = np.asarray(direction, dtype=float)
        e = e / np.linalg.norm(e)
        p = np.eye(2) - np.outer(e, e)
    return a0 @ np.linalg.inv(np.eye(2) + 2.0 * t * (p @ a0))


def _wrap_half(d):
    """Reduce displacements to the nearest image in [-1/2, 1/2)."""
    return (d + 0.5) % 1.0 - 0.5


def coherent_state(grid: Grid, spec: BeamSpec) -> np.ndarray:
    """h_k = k^(1/2) exp(ik<d, xi0>) exp(ik/2 <A0 d, d>) b(|d|), |xi0| = 1."""
    _grid_check(grid, spec.k, 1.0)
    k = spec.k
    xi = np.array([math.cos(spec.theta0), math.sin(spec.theta0)])
    a = spec.A0
    x1, x2 = grid.nodes
    if spec.bump is not None:
        if spec.bump.support[1] - spec.bump.support[0] >= 0.5:
            raise BeamError("bump support diameter must be < 1/2")
        d1 = _wrap_half(x1 - spec.x0.x1)
        d2 = _wrap_half(x2 - spec.x0.x2)
        shifts = [(0.0, 0.0)]
        wrap = True
    else:
        d1 = x1 - spec.x0.x1
        d2 = x2 - spec.x0.x2
        shifts = [(p1, p2) for p1 in range(-2, 3) for p2 in range(-2, 3)]
        wrap = False
    out = np.zeros_like(x1, dtype=complex)
    for p1, p2 in shifts:
        e1, e2 = (d1, d2) if wrap else (d1 + p1, d2 + p2)
        quad = a[0, 0] * e1 * e1 + 2.0 * a[0, 1] * e1 * e2 + a[1, 1] * e2 * e2
        phase = np.exp(1j * k * (xi[0] * e1 + xi[1] * e2) + 0.5j * k * quad)
        if spec.bump is not None:
            phase = phase * bump_eval(spec.bump, np.hypot(e1, e2))
        out += phase
    return math.sqrt(k) * out


def _beam_pieces(spec: BeamSpec, t: float):
    """Center, direction, width matrix, its velocity, and amplitude at time t."""
    e = np.array([math.cos(spec.theta0), math.sin(spec.theta0)])
    eperp = np.array([-e[1], e[0]])
    pt = geodesic_flow(spec.phase_point, t)
    a_t = riccati(spec.A0, t, direction=e)
    pproj = np.outer(eperp, eperp)
    a_dot = -2.0 * a_t @ pproj @ a_t
    q = complex(eperp @ spec.A0 @ eperp)
    det = 1.0 + 2.0 * t * q
    m = det ** -0.5
    m_dot = -q * det ** -1.5
    return pt, e, a_t, a_dot, m, m_dot


def gaussian_beam(grid: Grid, spec: BeamSpec, t: float):
    """Beam field and its exact time derivative, (u_k, d/dt u_k), at time t.

    u_k = k^(-1/2) m(t) exp(ik psi); the time derivative is assembled by the
    chain rule through the moving center, the Riccati flow, and the amplitude.
    """
    if spec.bump is not None:
        raise BeamError("beams are periodized by image sums; set bump=None")
    _grid_check(grid, spec.k, 0.5)
    k = spec.k
    pt, e, a, a_dot, m, m_dot = _beam_pieces(spec, t)
    xi = 0.5 * e
    x1, x2 = grid.nodes
    c1, c2 = pt.base.x1, pt.base.x2
    u = np.zeros_like(x1, dtype=complex)
    du = np.zeros_like(x1, dtype=complex)
    r = _IMAGE_RADIUS
    for p1 in range(-r, r + 1):
        for p2 in range(-r, r + 1):
            d1 = x1 + p1 - c1
            d2 = x2 + p2 - c2
            quad = a[0, 0] * d1 * d1 + 2.0 * a[0, 1] * d1 * d2 + a[1, 1] * d2 * d2
            psi = xi[0] * d1 + xi[1] * d2 + 0.5 * quad
            phase = np.exp(1j * k * psi)
            ad1 = a[0, 0] * d1 + a[0, 1] * d2
            ad2 = a[1, 0] * d1 + a[1, 1] * d2
            dq = a_dot[0, 0] * d1 * d1 + 2.0 * a_dot[0, 1] * d1 * d2 \
                + a_dot[1, 1] * d2 * d2
            dpsi = -0.5 + 0.5 * dq - (ad1 * e[0] + ad2 * e[1])
            u += m * phase
            du += phase * (m_dot + 1j * k * m * dpsi)
    scale = k ** -0.5
    return scale * u, scale * du


def _center_damping(desc: DampingDescriptor, spec: BeamSpec, t: float,
                    h: float = 1e-3):
    """(integral of w along the beam, w at the center, dw/dt at the center)."""
    p = spec.phase_point
    phi = t * time_average(desc, p, t, h) if t > 0 else 0.0
    q = geodesic_flow(p, t)
    w0 = float(desc.eval_w(q.base.x1, q.base.x2, q.theta))
    qm = geodesic_flow(p, t - h) if t >= h else p
    qp = geodesic_flow(p, t + h)
    wm = float(desc.eval_w(qm.base.x1, qm.base.x2, qm.theta))
    wp = float(desc.eval_w(qp.base.x1, qp.base.x2, qp.theta))
    w_dot = (wp - wm) / (2 * h) if t >= h else (wp - w0) / h
    return phi, w0, w_dot


def damped_beam(desc: DampingDescriptor, grid: Grid, spec: BeamSpec, t: float):
    """Damped quasimode v_k = exp(-int_0^t w ds) u_k and its time derivative.

    The field-level factor is the square root of the energy cocycle, so the
    quasimode's energy tracks exp(-2 int w).
    """
    u, du = gaussian_beam(grid, spec, t)
    phi, w0, _ = _center_damping(desc, spec, t)
    g = math.exp(-phi)
    return g * u, g * (du - w0 * u)


def beam_residual(grid: Grid, spec: BeamSpec, t: float,
                  dt_res: float | None = None) -> float:
    """L2 norm of (d_tt - Laplace) u_k at time t; expected O(k^(-1/2)).

    d_tt uses second-order central differences of the analytic field with
    step dt_res (default 1e-4 / k); the Laplacian is spectral.
    """
    if dt_res is None:
        dt_res = 1e-4 / spec.k
    um, _ = gaussian_beam(grid, spec, t - dt_res)
    u0, _ = gaussian_beam(grid, spec, t)
    up, _ = gaussian_beam(grid, spec, t + dt_res)
    utt = (up - 2.0 * u0 + um) / dt_res**2
    lap = apply_multiplier(grid.laplacian_multiplier, u0)
    return grid.norm(utt - lap)


def damped_beam_residual(desc: DampingDescriptor, grid: Grid, spec: BeamSpec,
                         t: float, dt_res: float | None = None,
                         wops: WOps | None = None) -> float:
    """L2 norm of (d_tt - Laplace + 2 W d_t) v_k at time t.

    The damping factor at t +/- dt_res is expanded analytically around t
    (exp(-phi -/+ dt_res w0 ...)), so the tiny differencing step never has to
    be resolved by the trajectory quadrature.
    """
    if dt_res is None:
        dt_res = 1e-4 / spec.k
    if wops is None:
        wops = WOps(desc, grid)
    phi, w0, w_dot = _center_damping(desc, spec, t)
    fields = {}
    for s in (-dt_res, 0.0, dt_res):
        u, du = gaussian_beam(grid, spec, t + s)
        g = math.exp(-(phi + s * w0 + 0.5 * s * s * w_dot))
        ws = w0 + s * w_dot
        fields[s] = (g * u, g * (du - ws * u))
    vm, v0, vp = fields[-dt_res][0], fields[0.0][0], fields[dt_res][0]
    vtt = (vp - 2.0 * v0 + vm) / dt_res**2
    lap = apply_multiplier(grid.laplacian_multiplier, v0)
    return grid.norm(vtt - lap + 2.0 * wops.apply(fields[0.0][1]))


def beam_decay_experiment(desc: DampingDescriptor, grid: Grid, spec: BeamSpec,
                          T: float, dt: float = 1e-3) -> dict:
    """Evolve beam initial data exactly and compare with the cocycle.

    Returns measured E(T)/E(0) of the true flow started from the damped-beam
    data against the predicted energy cocycle exp(-2 int_0^T w ds) along the
    central geodesic.
    """
    from .averages import g_plus
    from .evolution import FieldState, evolve

    v0, dv0 = damped_beam(desc, grid, spec, 0.0)
    trace = evolve(desc, FieldState(v0, dv0, grid), T, dt,
                   record_every=max(1, int(round(T / dt))))
    measured = float(trace.energies[-1] / trace.energies[0])
    predicted = g_plus(desc, spec.phase_point, T)
    return {"k": spec.k, "T": T, "measured": measured, "predicted": predicted,
            "gap": abs(measured - predicted)}


@dataclass
class ScalingTestSpec:
    """A symbol-scaling experiment: ||Op(a) h_k|| across a dyadic k list.

    ``kind`` picks the test symbol: ``identity`` (a = 1), ``angular``
    (a = <xi/|xi| - xi0, xi0_perp>, first-order angular vanishing), or
    ``spatial`` (a = (x - x0)^gamma times a radial cutoff).  ``order`` is the
    symbol order m and ``vanishing`` the total vanishing order l at the
    phase-space point; the expected norm scaling is k^(m - l/2).
    """

    kind: str
    order: int
    vanishing: int
    k_list: tuple
    x0: TorusPoint = field(default_factory=lambda: TorusPoint(0.5, 0.5))
    theta0: float = 0.0
    gamma: tuple[int, int] | None = None
    cutoff: BumpProfile = field(
        default_factory=lambda: BumpProfile((-0.3, 0.3), (-0.15, 0.15)))

    def __post_init__(self):
        if self.kind not in ("identity", "angular", "spatial"):
            raise BeamError(f"unknown symbol kind {self.kind!r}")
        if self.kind == "spatial":
            if self.gamma is None or sum(self.gamma) != self.vanishing:
                raise BeamError(
                    "spatial test needs gamma with |gamma| = vanishing order")
        elif self.kind == "angular" and self.vanishing != 1:
            raise BeamError("angular test vanishes to order 1")
        elif self.kind == "identity" and self.vanishing != 0:
            raise BeamError("identity symbol vanishes to order 0")
        if len(self.k_list) < 2:
            raise BeamError("need at least two k values for a slope")


def _apply_test_symbol(test: ScalingTestSpec, grid: Grid, u: np.ndarray):
    if test.kind == "identity":
        return u
    if test.kind == "angular":
        n1, n2 = grid.freqs
        r = np.hypot(n1, n2)
        safe = np.where(r > 0, r, 1.0)
        xi0 = np.array([math.cos(test.theta0), math.sin(test.theta0)])
        mult = (n1 / safe) * (-xi0[1]) + (n2 / safe) * xi0[0]
        mult = np.where(r > 0, mult, 0.0)
        return apply_multiplier(mult, u)
    x1, x2 = grid.nodes
    d1 = _wrap_half(x1 - test.x0.x1)
    d2 = _wrap_half(x2 - test.x0.x2)
    f = d1 ** test.gamma[0] * d2 ** test.gamma[1]
    return f * bump_eval(test.cutoff, np.hypot(d1, d2)) * u


def fit_loglog_slope(ks, norms) -> float:
    """Least-squares slope of log(norm) against log(k)."""
    slope, _ = np.polyfit(np.log(np.asarray(ks, float)),
                          np.log(np.asarray(norms, float)), 1)
    return float(slope)


def scaling_experiment(test: ScalingTestSpec, grid: Grid,
                       A0: np.ndarray | None = None) -> dict:
    """Measure ||Op(a) h_k|| over the k list and fit the log-log slope.

    The slope should not exceed m - l/2 (plus fit tolerance) when the symbol
    vanishes to order l at the coherent state's phase-space point.  The
    default width matrix 4iI keeps the Gaussian tail inside the spatial
    cutoff's plateau across the dyadic k range.
    """
    a0 = 4j * np.eye(2) if A0 is None else A0
    norms = []
    for k in test.k_list:
        spec = BeamSpec(test.x0, test.theta0, float(k), A0=a0)
        h = coherent_state(grid, spec)
        norms.append(grid.norm(_apply_test_symbol(test, grid, h)))
    slope = fit_loglog_slope(test.k_list, norms)
    return {"k_list": list(test.k_list), "norms": norms, "slope": slope,
            "bound": test.order - test.vanishing / 2}
