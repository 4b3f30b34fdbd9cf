"""End-to-end acceptance suite: one check per headline claim.

Each criterion function returns a CheckResult with a one-line detail string;
run_all executes them in order, sharing the expensive artifacts (spectra,
geodesic averages, evolutions) through a lab cache.  Tolerances are fixed
here and mirrored by tests/test_acceptance.py.
"""

from __future__ import annotations

import json
import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .averages import L_curve, L_infinity_estimate, agcc_check
from .beams import BeamSpec, ScalingTestSpec, beam_decay_experiment, \
    beam_residual, damped_beam_residual, fit_loglog_slope, scaling_experiment
from .evolution import FieldState, dissipation_residual, evolve, fit_decay, \
    random_state, state_from_modes
from .geometry import TorusPoint
from .quantization import Grid, WOps
from .spectrum import assumption2_check, slowest_mode, spectrum
from .symbols import build_example

__all__ = ["CheckResult", "Lab", "run_all", "CRITERIA"]

_K_SWEEP = (32, 64, 128, 256)
_BEAM_TIMES = (0.0, 0.5, 1.0, 1.5, 2.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


class Lab:
    """Lazily computed shared artifacts for the acceptance criteria."""

    def __init__(self):
        self._cache = {}

    def _get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    @property
    def two_strip(self):
        return self._get("two_strip", lambda: build_example("two_strip"))

    @property
    def constant(self):
        return self._get("constant", lambda: build_example("constant"))

    @property
    def zero(self):
        return self._get("zero", lambda: build_example("constant", c=0.0))

    def grid(self, n):
        return self._get(("grid", n), lambda: Grid(n))

    def spectrum_two(self, n_max):
        return self._get(("sp", n_max), lambda: spectrum(self.two_strip, n_max))

    @property
    def averages_two(self):
        return self._get("av", lambda: L_infinity_estimate(
            self.two_strip, 16.0, n_x=64, n_theta=256))

    @property
    def alpha_hat(self):
        return 2.0 * min(-self.spectrum_two(12).D0,
                         self.averages_two.L_inf_estimate)


def criterion_1(lab: Lab) -> CheckResult:
    """Constant-damping oracle: D0, L_inf, alpha, and the fitted decay rate."""
    sp = spectrum(lab.constant, 6)
    d0_ok = abs(sp.D0 + 0.1) <= 1e-6
    av = L_infinity_estimate(lab.constant, 4.0, n_x=16, n_theta=16)
    # symbol of c*Id is c, so both branches sit at 0.1 and alpha at 0.2
    linf_ok = abs(av.L_inf_estimate - 0.1) <= 1e-3
    from .cli import main
    with tempfile.TemporaryDirectory() as tmp:
        code = main(["rate", "--out", tmp,
                     "--set", "damping.variant=constant",
                     "--set", "spectrum.n_max=6",
                     "--set", "averages.t_max=4",
                     "--set", "averages.n_x=16",
                     "--set", "averages.n_theta=16"])
        rate = json.loads((Path(tmp) / "rate.json").read_text())
    alpha_ok = code == 0 and abs(rate["alpha"] - 0.2) <= 1e-2
    trace = evolve(lab.constant, random_state(lab.grid(32), band=4, seed=0),
                   20.0, 1e-3, record_every=20)
    fit = fit_decay(trace, (5.0, 20.0))
    fit_ok = abs(fit.rate - 0.2) <= 0.01
    passed = d0_ok and linf_ok and alpha_ok and fit_ok
    return CheckResult(
        "1 constant-damping oracle", passed,
        f"D0={sp.D0:.8f} L_inf={av.L_inf_estimate:.6f} "
        f"alpha={rate['alpha']:.4f} fitted={fit.rate:.4f}")


def criterion_2(lab: Lab) -> CheckResult:
    """Free-wave conservation over 10^4 steps."""
    trace = evolve(lab.zero, random_state(lab.grid(32), band=4, seed=1),
                   10.0, 1e-3, record_every=1000)
    drift = abs(trace.energies[-1] - trace.energies[0]) / trace.energies[0]
    return CheckResult("2 free-wave conservation", drift <= 1e-8,
                       f"relative drift {drift:.3e} (tol 1e-8)")


def criterion_3(lab: Lab) -> CheckResult:
    """Dissipation identity dE/dt = -2 Re<W u_t, u_t> along the discrete flow."""
    trace = evolve(lab.two_strip, random_state(lab.grid(32), band=4, seed=2),
                   2.0, 1e-3, record_every=1, keep_states=True)
    resid = dissipation_residual(lab.two_strip, trace)
    return CheckResult("3 dissipation identity", resid <= 1e-4,
                       f"max relative residual {resid:.3e} (tol 1e-4)")


def criterion_4(lab: Lab) -> CheckResult:
    """Free Gaussian-beam residual decays like k^(-1/2)."""
    g = lab.grid(128)
    maxr = []
    for k in _K_SWEEP:
        spec = BeamSpec(TorusPoint(0.5, 0.5), 0.0, k)
        maxr.append(max(beam_residual(g, spec, t) for t in _BEAM_TIMES))
    slope = fit_loglog_slope(_K_SWEEP, maxr)
    return CheckResult("4 gaussian-beam residual", slope <= -0.4,
                       f"log-log slope {slope:.3f} (need <= -0.4)")


def criterion_5(lab: Lab) -> CheckResult:
    """Damped quasimode residual decays almost as fast."""
    g = lab.grid(128)
    wops = WOps(lab.two_strip, g)
    maxr = []
    for k in _K_SWEEP:
        spec = BeamSpec(TorusPoint(0.5, 0.5), 0.0, k)
        maxr.append(max(
            damped_beam_residual(lab.two_strip, g, spec, t, wops=wops)
            for t in _BEAM_TIMES))
    slope = fit_loglog_slope(_K_SWEEP, maxr)
    return CheckResult("5 damped quasimode residual", slope <= -0.3,
                       f"log-log slope {slope:.3f} (need <= -0.3)")


def criterion_6(lab: Lab) -> CheckResult:
    """Coherent-state scaling matches k^(m - l/2) within tolerance."""
    g = lab.grid(128)
    slopes = {}
    for kind, ell, gamma in (("identity", 0, None), ("angular", 1, None),
                             ("spatial", 2, (2, 0))):
        test = ScalingTestSpec(kind, 0, ell, _K_SWEEP, gamma=gamma)
        slopes[ell] = scaling_experiment(test, g)["slope"]
    passed = (abs(slopes[0]) <= 0.1 and slopes[1] <= -0.4
              and slopes[2] <= -0.9)
    return CheckResult(
        "6 coherent-state scaling", passed,
        f"slopes l=0:{slopes[0]:+.3f} l=1:{slopes[1]:+.3f} "
        f"l=2:{slopes[2]:+.3f} (bounds +-0.1, -0.4, -0.9)")


def criterion_7(lab: Lab) -> CheckResult:
    """Beam energy after the true evolution tracks the damping cocycle."""
    res = beam_decay_experiment(
        lab.two_strip, lab.grid(128),
        BeamSpec(TorusPoint(0.5, 0.25), 0.0, 256), 2.0, dt=2e-3)
    return CheckResult(
        "7 beam decay vs cocycle", res["gap"] <= 0.1,
        f"measured {res['measured']:.4f} predicted {res['predicted']:.4f} "
        f"gap {res['gap']:.4f} (tol 0.1)")


def criterion_8(lab: Lab) -> CheckResult:
    """Superadditivity of t*L(t) on a 10x10 grid of time pairs."""
    t_base = np.linspace(0.5, 8.0, 10)
    sums = np.unique(np.round(np.add.outer(t_base, t_base), 12).ravel())
    t_all = np.unique(np.concatenate([t_base, sums]))
    values = L_curve(lab.two_strip, t_all, n_x=64, n_theta=256)
    lookup = dict(zip(np.round(t_all, 12), t_all * values))
    worst = -np.inf
    for t in t_base:
        for r in t_base:
            gap = lookup[round(t, 12)] + lookup[round(r, 12)] \
                - lookup[round(t + r, 12)]
            worst = max(worst, gap)
    return CheckResult("8 superadditivity of tL(t)", worst <= 1e-3,
                       f"max violation {worst:.3e} (tol 1e-3)")


def criterion_9(lab: Lab) -> CheckResult:
    """Dissipative spectrum, monotone D(R), high-frequency bound, stability."""
    sps = {n: lab.spectrum_two(n) for n in (8, 12, 16)}
    re_ok = all(s.eigenvalues.real.max() <= 1e-10 for s in sps.values())
    mono_ok = all(np.all(np.diff(s.D_of_R) <= 1e-12) for s in sps.values())
    sp12 = sps[12]
    cut = 2.0 * math.pi * (sp12.n_max / 2)
    high = sp12.eigenvalues[np.abs(sp12.eigenvalues.imag) >= cut]
    linf = lab.averages_two.L_inf_estimate
    high_ok = high.real.max() <= -linf + 0.05
    d0s = [s.D0 for s in sps.values()]
    spread = (max(d0s) - min(d0s)) / abs(sum(d0s) / 3)
    stable_ok = spread <= 0.10
    passed = re_ok and mono_ok and high_ok and stable_ok
    return CheckResult(
        "9 spectral properties", passed,
        f"maxRe<=1e-10:{re_ok} D(R)monotone:{mono_ok} "
        f"highRe {high.real.max():.4f}<={-linf + 0.05:.4f}:{high_ok} "
        f"D0 spread {spread:.1%} (tol 10%)")


def criterion_10(lab: Lab) -> CheckResult:
    """No Laplacian eigenfunction up to |n|^2 = 25 is annihilated by W."""
    a2 = assumption2_check(lab.two_strip, 5)
    z = assumption2_check(lab.zero, 5)
    passed = a2.min_sigma > 1e-4 and z.min_sigma == 0.0
    return CheckResult(
        "10 eigenspace kernel check", passed,
        f"two_strip min sigma {a2.min_sigma:.4e} (> 1e-4), W=0 -> {z.min_sigma}")


def criterion_11(lab: Lab) -> CheckResult:
    """AGCC holds for two_strip with the geometric T0 bound; one strip fails."""
    eps = lab.two_strip.params["epsilon"]
    delta = lab.two_strip.params["delta"]
    bound = max(1.0 / math.cos(math.pi / 4 + eps),
                1.0 / math.sin(math.pi / 4 - eps)) + 4 * delta
    verdict = agcc_check(lab.two_strip, 0.5, 4.0, n_x=48, n_theta=128)
    ok_two = verdict.satisfied and verdict.T0 <= bound
    single = build_example("multiplicative")
    failed = agcc_check(single, 0.25, 4.0, n_x=32, n_theta=64)
    # a vertical trajectory far from the strip never meets the damping
    s = np.linspace(0.0, 4.0, 401)
    w_vert = single.eval_w(0.0, s, math.pi / 2)
    ok_single = (not failed.satisfied) and float(np.max(w_vert)) < 0.25
    return CheckResult(
        "11 anisotropic control condition", ok_two and ok_single,
        f"T0 {verdict.T0:.3f} <= {bound:.3f}; single strip fails with "
        f"theta=pi/2 witness:{ok_single}")


def criterion_12(lab: Lab) -> CheckResult:
    """Theorem consistency: no solution beats alpha; the slow mode attains it."""
    alpha = lab.alpha_hat
    g32 = lab.grid(32)
    rates = []
    for seed in range(20):
        trace = evolve(lab.two_strip, random_state(g32, band=4, seed=seed),
                       15.0, 2e-3, record_every=25)
        rates.append(fit_decay(trace, (5.0, 15.0)).rate)
    a_ok = min(rates) >= alpha - 0.05

    lam, gen, vec = slowest_mode(lab.two_strip, 12)
    m = len(gen.modes)
    st = state_from_modes(lab.grid(64), gen.modes, vec[:m], vec[m:])
    trace = evolve(lab.two_strip, st, 12.0, 1e-3, record_every=10)
    fitted = fit_decay(trace, (1.0, 11.0)).rate
    target = -2.0 * lam.real
    b_ok = abs(fitted - target) <= 0.01 and target >= alpha - 0.05

    # two_strip's minimum sits on the spectral branch, so the L_inf-branch
    # beam check runs on the constant variant where both branches coincide
    res = beam_decay_experiment(
        lab.constant, lab.grid(128),
        BeamSpec(TorusPoint(0.5, 0.5), 0.0, 256), 2.0, dt=2e-3)
    alpha_c = 0.2
    beam_rate = -math.log(res["measured"]) / res["T"]
    c_ok = beam_rate <= alpha_c + 0.1 * alpha_c + 0.05

    passed = a_ok and b_ok and c_ok
    return CheckResult(
        "12 decay-rate theorem consistency", passed,
        f"min random fit {min(rates):.4f}>={alpha - 0.05:.4f}:{a_ok}; "
        f"mode fit {fitted:.4f} vs {target:.4f}:{b_ok}; "
        f"beam rate {beam_rate:.4f}<={alpha_c * 1.1 + 0.05:.4f}:{c_ok}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
            criterion_11, criterion_12]


def run_all(lab: Lab | None = None) -> list[CheckResult]:
    """Run all primary acceptance criteria and return their results."""
    lab = lab or Lab()
    return [fn(lab) for fn in CRITERIA]
