import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catdip.analytic import cat_energy_closed
from catdip.catstate import CatParameters, cat_chi
from catdip.charfunc import CharacteristicFunctional, GaussianTerm, thermal_chi
from catdip.errors import DivergenceError, NormalizationError
from catdip.kernel import (
    DiagonalKernel,
    ModeFunction,
    default_grid,
    energy_kernel,
    flat_kernel,
    gaussian_mode,
    trapezoid_grid,
)
from catdip.observables import (
    KERNEL_APPROX_TOL,
    QuarticKernel,
    cat_energy_numeric,
    energy_moment,
    fiducial_energy,
    intermediate_cat_energy,
    normalized_cat_energy_numeric,
    quartic_moment,
    term_quartic,
    weighted_overlap_ratio,
)
from catdip.oracles import quartic_fd


def test_thermal_energy_is_n_times_e0(theta, grid):
    e = energy_kernel(0.0, grid)
    assert energy_moment(thermal_chi(7.0, theta), e) == pytest.approx(7.0 * fiducial_energy(theta, e), rel=1e-13)
    assert energy_moment(thermal_chi(0.0, theta), e) == 0.0


def test_unnormalized_state_rejected(theta, grid):
    chi = thermal_chi(1.0, theta)
    with pytest.raises(NormalizationError):
        energy_moment(chi + chi, flat_kernel(grid))


def test_zero_point_needs_half_identity():
    g = trapezoid_grid(1.0, 2)
    t = GaussianTerm.isotropic(1.0, g, 0.7)
    with pytest.raises(DivergenceError):
        energy_moment(CharacteristicFunctional((t,)), flat_kernel(g))


@given(st.floats(0.5, 1e4), st.floats(0.0, 1.5))
def test_flat_kernel_energy_is_closed_form(n, z):
    g = default_grid(1.0)
    th = gaussian_mode(1.0, g)
    e = cat_energy_numeric(CatParameters(n, z), th, flat_kernel(g)) / n
    assert e == pytest.approx(float(cat_energy_closed(n, z)), rel=1e-10)


def test_intermediate_form_agrees(theta, grid):
    p = CatParameters(30.0, 0.4)
    k = energy_kernel(0.0, grid)
    assert intermediate_cat_energy(p, theta, k) == pytest.approx(cat_energy_numeric(p, theta, k), rel=1e-12)


def test_physical_dispersion_close_to_flat(theta):
    s = np.linspace(0, 3, 61)
    num = normalized_cat_energy_numeric(100.0, s, theta)
    dev = np.max(np.abs(num - cat_energy_closed(100.0, s / 2)))
    assert 1e-4 < dev < KERNEL_APPROX_TOL


def test_weighted_overlap_ratio(theta, grid):
    assert np.allclose(weighted_overlap_ratio(theta, [0.1, 0.8], flat_kernel(grid)), 1.0)
    r = weighted_overlap_ratio(theta, [0.05, 0.3], energy_kernel(0.0, grid))
    assert r[0] < 1.0 and r[1] < r[0]


def test_quartic_thermal_vacuum_subtracted(grid, theta):
    # single-mode thermal: <n^2> normal ordered = 2 n^2 for a flat kernel
    n = 3.0
    k4 = QuarticKernel(flat_kernel(grid), flat_kernel(grid))
    assert quartic_moment(thermal_chi(n, theta), k4) == pytest.approx(2 * n * n, rel=1e-12)
    assert quartic_moment(thermal_chi(0.0, theta), k4) == 0.0


def test_quartic_orderings_and_validation():
    g = trapezoid_grid(1.0, 2)
    th = ModeFunction.from_values(g, [1.0, 1.0], symmetric=True)
    chi = thermal_chi(1.0, th)
    a = DiagonalKernel(g, [1.0, 2.0])
    b = DiagonalKernel(g, [0.5, 3.0])
    k4 = QuarticKernel(a, b)
    assert quartic_moment(chi, k4, "full") == quartic_moment(chi, k4, "vacuum-subtracted")
    assert quartic_moment(chi, k4, "raw") != quartic_moment(chi, k4)
    sym = term_quartic(chi.terms[0], QuarticKernel(a, b, symmetrize=True))
    assert sym == pytest.approx(0.5 * (term_quartic(chi.terms[0], k4) + term_quartic(chi.terms[0], QuarticKernel(b, a))))
    with pytest.raises(ValueError, match="ordering"):
        quartic_moment(chi, k4, "weyl")


@pytest.mark.parametrize("ordering", ["raw", "vacuum-subtracted"])
def test_quartic_cat_against_finite_differences(ordering):
    g = trapezoid_grid(1.5, 3)
    th = ModeFunction.from_values(g, [0.5, 1.0, 0.5], symmetric=True)
    chi = cat_chi(CatParameters(1.5, 0.4, 1.0), th)
    a = np.array([1.0, 0.2, 1.0])
    b = np.array([0.3, 1.1, 0.3])
    k4 = QuarticKernel(DiagonalKernel(g, a), DiagonalKernel(g, b))
    exact = quartic_moment(chi, k4, ordering)
    assert quartic_fd(chi, a, b, ordering) == pytest.approx(exact, rel=1e-6, abs=1e-6)


def test_fiducial_energy_with_mass_exceeds_mass(theta, grid):
    m = 2.0
    assert fiducial_energy(theta, energy_kernel(m, grid)) > m
    assert fiducial_energy(theta, energy_kernel(0.0, grid)) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-5)
