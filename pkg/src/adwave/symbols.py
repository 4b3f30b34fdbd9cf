"""Damping descriptors: cutoff profiles, example families, principal symbol.

A damping operator is W = sum_j Bj* Bj with Bj = chi_tilde_j Op(m_j) chi_j,
where chi_j, chi_tilde_j are smooth spatial cutoffs and m_j(n) =
psi_j(arg n) * beta(|n|) is a Fourier multiplier on the integer lattice.
The principal symbol (high-frequency part, beta == 1) is
w(x, theta) = sum_j chi_j(x)^2 psi_j(theta)^2.

All smooth cutoffs are built from the standard exp(-1/t) mollifier ramp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, TorusPoint

__all__ = [
    "BumpProfile",
    "ConstantCutoff",
    "StripCutoff",
    "ArcWindow",
    "DampingFactor",
    "DampingDescriptor",
    "bump_eval",
    "build_example",
    "eval_w",
    "radial_low_cut",
]


class SymbolError(ValueError):
    """Malformed cutoff or descriptor parameters."""


def _ramp(t):
    """exp(-1/t) mollifier ramp: C-infinity, 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    up = np.zeros_like(t)
    pos = t > 0.0
    lo = pos & (t < 1.0)
    with np.errstate(over="ignore"):
        f = np.exp(-1.0 / np.clip(t[lo], 1e-300, None))
        g = np.exp(-1.0 / np.clip(1.0 - t[lo], 1e-300, None))
    up[lo] = f / (f + g)
    up[t >= 1.0] = 1.0
    return up


@dataclass(frozen=True)
class BumpProfile:
    """Smooth compactly supported cutoff: 0 outside [a, b], 1 on [a2, b2]."""

    support: tuple[float, float]
    plateau: tuple[float, float]

    def __post_init__(self):
        a, b = self.support
        a2, b2 = self.plateau
        if not (a < a2 <= b2 < b):
            raise SymbolError(
                f"plateau {self.plateau} must sit strictly inside support {self.support}"
            )

    def __call__(self, t):
        a, b = self.support
        a2, b2 = self.plateau
        t = np.asarray(t, dtype=float)
        rising = _ramp((t - a) / (a2 - a))
        falling = _ramp((b - t) / (b - b2))
        return np.minimum(rising, falling)

    @property
    def width(self) -> float:
        return self.support[1] - self.support[0]


def bump_eval(profile: BumpProfile, t) -> float:
    """Evaluate a bump profile (0 outside support, 1 on plateau, smooth)."""
    out = profile(t)
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


@dataclass(frozen=True)
class ConstantCutoff:
    """Spatially (or angularly) constant factor."""

    value: float = 1.0

    def eval_spatial(self, x1, x2):
        return np.broadcast_to(np.float64(self.value), np.broadcast(x1, x2).shape)

    def eval_angle(self, theta):
        return np.broadcast_to(np.float64(self.value), np.shape(theta))

    def to_dict(self):
        return {"kind": "constant", "value": self.value}


@dataclass(frozen=True)
class StripCutoff:
    """Cutoff depending on one periodic coordinate through a bump profile.

    ``axis`` 0 means a vertical strip (profile in x1), 1 a horizontal strip.
    The profile's intervals live on the real line; evaluation wraps the
    coordinate into [center - 1/2, center + 1/2), so the support must have
    width < 1.
    """

    axis: int
    profile: BumpProfile

    def __post_init__(self):
        if self.axis not in (0, 1):
            raise SymbolError(f"axis must be 0 or 1, got {self.axis}")
        if self.profile.width >= 1.0:
            raise SymbolError("strip support must have width < 1")

    @property
    def center(self) -> float:
        a, b = self.profile.support
        return 0.5 * (a + b)

    def eval_spatial(self, x1, x2):
        x = np.asarray(x1 if self.axis == 0 else x2, dtype=float)
        wrapped = (x - self.center + 0.5) % 1.0 - 0.5 + self.center
        return self.profile(wrapped)

    def to_dict(self):
        return {
            "kind": "strip",
            "axis": self.axis,
            "support": list(self.profile.support),
            "plateau": list(self.profile.plateau),
        }


@dataclass(frozen=True)
class ArcWindow:
    """Angular cutoff psi(theta): a union of smooth bumps on circle arcs.

    Each arc is a BumpProfile over the angle, evaluated after wrapping
    theta into a period centered on the arc.  Arcs must not overlap, so the
    pointwise sum stays in [0, 1].
    """

    arcs: tuple[BumpProfile, ...]
    scale: float = 1.0

    def __post_init__(self):
        for arc in self.arcs:
            if arc.width >= TWO_PI:
                raise SymbolError("arc support must be shorter than a full turn")

    def eval_angle(self, theta):
        theta = np.asarray(theta, dtype=float)
        total = np.zeros(theta.shape)
        for arc in self.arcs:
            c = 0.5 * (arc.support[0] + arc.support[1])
            wrapped = (theta - c + math.pi) % TWO_PI - math.pi + c
            total += arc(wrapped)
        return self.scale * total

    def to_dict(self):
        return {
            "kind": "arcs",
            "scale": self.scale,
            "arcs": [
                {"support": list(a.support), "plateau": list(a.plateau)}
                for a in self.arcs
            ],
        }


def radial_low_cut(r):
    """Low-mode radial cutoff beta: 0 for r <= 1, 1 for r >= 2, smooth ramp."""
    return _ramp(np.asarray(r, dtype=float) - 1.0)


def _spatial_from_dict(d):
    if d["kind"] == "constant":
        return ConstantCutoff(d.get("value", 1.0))
    return StripCutoff(d["axis"], BumpProfile(tuple(d["support"]), tuple(d["plateau"])))


def _angular_from_dict(d):
    if d["kind"] == "constant":
        return ConstantCutoff(d.get("value", 1.0))
    arcs = tuple(BumpProfile(tuple(a["support"]), tuple(a["plateau"])) for a in d["arcs"])
    return ArcWindow(arcs, d.get("scale", 1.0))


@dataclass(frozen=True)
class DampingFactor:
    """One separable factor B = chi_tilde Op(psi(theta) beta(r)) chi."""

    spatial_inner: ConstantCutoff | StripCutoff
    spatial_outer: ConstantCutoff | StripCutoff
    angular: ConstantCutoff | ArcWindow
    use_radial_cut: bool = True

    def multiplier(self, n1, n2):
        """Fiber multiplier m(n) on integer lattice frequencies."""
        n1 = np.asarray(n1, dtype=float)
        n2 = np.asarray(n2, dtype=float)
        theta = np.arctan2(n2, n1) % TWO_PI
        m = np.asarray(self.angular.eval_angle(theta), dtype=float).copy()
        if self.use_radial_cut:
            m = m * radial_low_cut(np.hypot(n1, n2))
        return m

    def to_dict(self):
        return {
            "spatial_inner": self.spatial_inner.to_dict(),
            "spatial_outer": self.spatial_outer.to_dict(),
            "angular": self.angular.to_dict(),
            "use_radial_cut": self.use_radial_cut,
        }

    @staticmethod
    def from_dict(d) -> "DampingFactor":
        return DampingFactor(
            _spatial_from_dict(d["spatial_inner"]),
            _spatial_from_dict(d["spatial_outer"]),
            _angular_from_dict(d["angular"]),
            d.get("use_radial_cut", True),
        )


@dataclass(frozen=True)
class DampingDescriptor:
    """The operator W = sum_j Bj* Bj as a list of separable factors."""

    factors: tuple[DampingFactor, ...]
    variant: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.factors:
            raise SymbolError("descriptor needs at least one factor")

    def eval_w(self, x1, x2, theta):
        """Principal symbol w(x, theta) = sum_j chi_j(x)^2 psi_j(theta)^2."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        theta = np.asarray(theta, dtype=float)
        total = np.zeros(np.broadcast(x1, x2, theta).shape)
        for f in self.factors:
            chi = np.asarray(f.spatial_inner.eval_spatial(x1, x2), dtype=float)
            psi = np.asarray(f.angular.eval_angle(theta), dtype=float)
            total += chi**2 * psi**2
        return total

    @property
    def symbol_bound(self) -> float:
        """Upper bound on w (and on the operator norm of W)."""
        bound = 0.0
        for f in self.factors:
            peak = f.angular.scale if isinstance(f.angular, ArcWindow) else f.angular.value
            bound += peak**2
        return bound

    def to_dict(self):
        return {
            "variant": self.variant,
            "params": dict(self.params),
            "factors": [f.to_dict() for f in self.factors],
        }

    @staticmethod
    def from_dict(d) -> "DampingDescriptor":
        return DampingDescriptor(
            tuple(DampingFactor.from_dict(f) for f in d["factors"]),
            d.get("variant", "custom"),
            dict(d.get("params", {})),
        )


def eval_w(desc: DampingDescriptor, x: TorusPoint, theta: float) -> float:
    """Principal symbol at a single cosphere point."""
    return float(desc.eval_w(x.x1, x.x2, theta))


def _strip(axis: int, center: float, delta: float) -> StripCutoff:
    # transition width delta/2 on each side of the plateau
    return StripCutoff(
        axis,
        BumpProfile(
            (center - delta, center + delta),
            (center - delta / 2, center + delta / 2),
        ),
    )


def _strip_outer(axis: int, center: float, delta: float) -> StripCutoff:
    # identically 1 on an open neighborhood of the inner strip's support
    return StripCutoff(
        axis,
        BumpProfile(
            (center - 2 * delta, center + 2 * delta),
            (center - 1.5 * delta, center + 1.5 * delta),
        ),
    )


def _arc(center: float, half_plateau: float, eps: float) -> BumpProfile:
    # angular transition width eps between plateau and support
    return BumpProfile(
        (center - half_plateau - eps, center + half_plateau + eps),
        (center - half_plateau, center + half_plateau),
    )


def _cone_pair(center: float, eps: float) -> ArcWindow:
    """Antipodal cone pair: plateau Theta_eps, support Theta_2eps shifted to center."""
    hp = math.pi / 4 + eps
    return ArcWindow((_arc(center, hp, eps), _arc(center + math.pi, hp, eps)))


def build_example(variant: str, delta: float = 0.12, epsilon: float = 0.1,
                  c: float = 0.1) -> DampingDescriptor:
    """Construct one of the standard damping families.

    ``two_strip``: vertical strip x cone pair around theta=0, plus horizontal
    strip x cone pair around theta=pi/2.  ``three_strip``: the vertical-strip
    factor, a horizontal strip with a single upward cone, and a second
    (disjoint) horizontal strip with a single downward cone.  ``constant``:
    W = c*Id exactly (multiplier sqrt(c), no low-frequency cut), so the
    principal symbol is w = c.  ``multiplicative``: a plain
    multiplication operator chi^2 (vertical strip, fiber multiplier 1).
    """
    params = {"delta": delta, "epsilon": epsilon, "c": c}
    if variant in ("two_strip", "three_strip", "multiplicative"):
        if not 0.0 < delta < 0.25:
            raise SymbolError(f"delta must be in (0, 1/4), got {delta}")
    if variant in ("two_strip", "three_strip"):
        if not 0.0 < epsilon < math.pi / 8:
            raise SymbolError(f"epsilon must be in (0, pi/8), got {epsilon}")

    if variant == "two_strip":
        factors = (
            DampingFactor(_strip(0, 0.5, delta), _strip_outer(0, 0.5, delta),
                          _cone_pair(0.0, epsilon)),
            DampingFactor(_strip(1, 0.5, delta), _strip_outer(1, 0.5, delta),
                          _cone_pair(math.pi / 2, epsilon)),
        )
    elif variant == "three_strip":
        up = ArcWindow((_arc(math.pi / 2, math.pi / 4 + epsilon, epsilon),))
        down = ArcWindow((_arc(3 * math.pi / 2, math.pi / 4 + epsilon, epsilon),))
        factors = (
            DampingFactor(_strip(0, 0.5, delta), _strip_outer(0, 0.5, delta),
                          _cone_pair(0.0, epsilon)),
            DampingFactor(_strip(1, 0.5, delta), _strip_outer(1, 0.5, delta), up),
            DampingFactor(_strip(1, 0.0, delta), _strip_outer(1, 0.0, delta), down),
        )
    elif variant == "constant":
        if c < 0:
            raise SymbolError(f"constant level c must be >= 0, got {c}")
        factors = (
            DampingFactor(ConstantCutoff(1.0), ConstantCutoff(1.0),
                          ConstantCutoff(math.sqrt(c)), use_radial_cut=False),
        )
    elif variant == "multiplicative":
        factors = (
            DampingFactor(_strip(0, 0.5, delta), _strip_outer(0, 0.5, delta),
                          ConstantCutoff(1.0), use_radial_cut=False),
        )
    else:
        raise SymbolError(f"unknown variant {variant!r}")
    return DampingDescriptor(factors, variant, params)
