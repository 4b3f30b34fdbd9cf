"""Points on the torus and its cosphere bundle, and the geodesic flow.

The torus is R^2/Z^2 with unit side length.  Directions are stored as angles
theta in [0, 2pi); the associated covector is xi = (cos theta, sin theta)/2,
so the Hamiltonian flow of |xi|^2 (x_dot = 2 xi) moves the base point at unit
speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TorusPoint:
    """A point on R^2/Z^2; coordinates are reduced modulo 1."""

    x1: float
    x2: float

    def __post_init__(self):
        object.__setattr__(self, "x1", self.x1 % 1.0)
        object.__setattr__(self, "x2", self.x2 % 1.0)


@dataclass(frozen=True)
class CospherePoint:
    """A unit covector (|xi| = 1/2 normalization) over a torus point."""

    base: TorusPoint
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", self.theta % TWO_PI)

    @property
    def covector(self) -> tuple[float, float]:
        return (0.5 * math.cos(self.theta), 0.5 * math.sin(self.theta))

    @property
    def direction(self) -> tuple[float, float]:
        """Unit velocity of the geodesic through this point."""
        return (math.cos(self.theta), math.sin(self.theta))


def geodesic_flow(p: CospherePoint, s: float) -> CospherePoint:
    """Flow p for time s: x -> (x + 2 s xi) mod Z^2, theta unchanged.

    With |xi| = 1/2 the base point moves at unit speed, so s is arc length.
    The group law flow(flow(p, s), r) == flow(p, s + r) holds up to rounding.
    """
    c, sn = math.cos(p.theta), math.sin(p.theta)
    return CospherePoint(
        TorusPoint(p.base.x1 + s * c, p.base.x2 + s * sn), p.theta
    )
