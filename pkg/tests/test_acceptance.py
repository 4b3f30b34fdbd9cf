"""Acceptance suite: one test per headline criterion, at fixed tolerances.

These are slow end-to-end checks (several minutes total); the shared Lab
cache keeps the expensive artifacts -- spectra, geodesic averages, long
evolutions -- to a single computation each.
"""

import pytest

from adwave import acceptance


@pytest.fixture(scope="module")
def lab():
    return acceptance.Lab()


def _run(criterion, lab):
    result = criterion(lab)
    line = f"{result.name}: {'PASS' if result.passed else 'FAIL'} -- {result.detail}"
    print(line)
    assert result.passed, line


def test_criterion_01_constant_damping_oracle(lab):
    _run(acceptance.criterion_1, lab)


def test_criterion_02_free_wave_conservation(lab):
    _run(acceptance.criterion_2, lab)


def test_criterion_03_dissipation_identity(lab):
    _run(acceptance.criterion_3, lab)


def test_criterion_04_gaussian_beam_residual(lab):
    _run(acceptance.criterion_4, lab)


def test_criterion_05_damped_quasimode_residual(lab):
    _run(acceptance.criterion_5, lab)


def test_criterion_06_coherent_state_scaling(lab):
    _run(acceptance.criterion_6, lab)


def test_criterion_07_beam_decay_vs_cocycle(lab):
    _run(acceptance.criterion_7, lab)


def test_criterion_08_superadditivity(lab):
    _run(acceptance.criterion_8, lab)


def test_criterion_09_spectral_properties(lab):
    _run(acceptance.criterion_9, lab)


def test_criterion_10_eigenspace_kernel_check(lab):
    _run(acceptance.criterion_10, lab)


def test_criterion_11_control_condition(lab):
    _run(acceptance.criterion_11, lab)


def test_criterion_12_decay_rate_consistency(lab):
    _run(acceptance.criterion_12, lab)
