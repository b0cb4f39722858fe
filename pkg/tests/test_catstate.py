import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catdip.catstate import CatParameters, cat_chi, cat_chi_via_star, functionals_match, lambda_param, overlap_mu
from catdip.errors import DomainError, SymmetryError
from catdip.kernel import ModeFunction, default_grid, gaussian_mode, trapezoid_grid

GRID = default_grid(1.0)
THETA = gaussian_mode(1.0, GRID)


@pytest.mark.parametrize("kw", [dict(n_avg=-1, z=0.1), dict(n_avg=1, z=0.1, w0=0), dict(n_avg=1, z=np.inf), dict(n_avg=1, z=0, m=-1)])
def test_parameters_are_validated(kw):
    with pytest.raises(DomainError):
        CatParameters(**kw)


def test_mu_and_lambda():
    n, z = 50.0, 0.2
    mu = overlap_mu(THETA, z, n)
    assert mu == pytest.approx(n * np.exp(-4 * z * z), rel=1e-12)
    assert lambda_param(n, mu) == pytest.approx(1 / (1 + n - mu))
    assert lambda_param(n, overlap_mu(THETA, 0.0, n)) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        lambda_param(1.0, 3.0)


def test_odd_mode_rejected():
    g = trapezoid_grid(1.0, 4)
    th = ModeFunction.from_values(g, [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(SymmetryError):
        cat_chi(CatParameters(1.0, 0.3), th)


@given(st.floats(0.0, 1e5), st.floats(-3.0, 3.0))
def test_cat_is_normalized(n, z):
    chi = cat_chi(CatParameters(n, z), THETA)
    assert len(chi) == 4
    assert chi.is_normalized(1e-12)


def test_cat_weights_at_zero_separation():
    chi = cat_chi(CatParameters(5.0, 0.0), THETA)
    assert np.allclose([t.weight for t in chi.terms], 0.25)


@pytest.mark.parametrize("n, z", [(0.5, 0.3), (2.0, 0.7), (40.0, 1.2)])
def test_star_assembly_matches_direct(n, z):
    g = trapezoid_grid(1.5, 4)
    th = ModeFunction.from_values(g, np.exp(-g.nodes**2), symmetric=True)
    p = CatParameters(n, z)
    via = cat_chi_via_star(p, th)
    assert via.is_normalized(1e-12)
    assert functionals_match(via, cat_chi(p, th)) < 1e-8


def test_star_assembly_at_zero_is_thermal():
    g = trapezoid_grid(1.5, 4)
    th = ModeFunction.from_values(g, np.ones(4), symmetric=True)
    assert len(cat_chi_via_star(CatParameters(1.0, 0.0), th)) == 1


def test_functionals_match_needs_equal_counts():
    g = trapezoid_grid(1.5, 4)
    th = ModeFunction.from_values(g, np.ones(4), symmetric=True)
    p = CatParameters(1.0, 0.5)
    with pytest.raises(ValueError):
        functionals_match(cat_chi(p, th), cat_chi_via_star(CatParameters(1.0, 0.0), th))
