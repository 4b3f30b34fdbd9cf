"""Numerical laboratory for anisotropically damped waves on the flat 2-torus.

The package simulates the damped wave equation
``u_tt - Laplace(u) + 2 W u_t = 0`` where the damping ``W = sum_j Bj* Bj`` is
built from order-zero operators ``Bj = chi_tilde * Op(m) * chi`` (spatial
cutoff, Fourier multiplier, spatial cutoff).  It computes, independently, the
two sides of the sharp decay-rate formula ``alpha = 2*min(-D0, L_inf)`` and
cross-checks them against direct time-domain simulation, Gaussian-beam
quasimodes and coherent-state scaling experiments.
"""

__version__ = "0.1.0"
