import numpy as np
import pytest

from catdip.charfunc import (
    CharacteristicFunctional,
    GaussianTerm,
    star,
    star_terms,
    thermal_chi,
    translation_exponent,
    translation_functional,
    translation_log_prefactor,
)
from catdip.errors import DegenerateOperatorError, DivergenceError, DomainError, PoleError
from catdip.kernel import ModeFunction, phase_kernel, trapezoid_grid
from catdip.oracles import star_integral


def small_mode(grid):
    return ModeFunction.from_values(grid, 1.0 / (1.0 + grid.nodes**2), symmetric=True)


def test_thermal_functional_structure():
    g = trapezoid_grid(1.0, 4)
    th = small_mode(g)
    chi = thermal_chi(2.5, th)
    assert chi.trace == 1.0
    t = chi.terms[0]
    assert t.sigma == 0.5
    x = th.values * g.sqrt_measure
    assert np.allclose(t.dense(), 0.5 * np.eye(4) + 2.5 * np.outer(x, x.conj()))
    assert thermal_chi(0.0, th).terms[0].rank == 0
    with pytest.raises(DomainError):
        thermal_chi(-1.0, th)


def test_evaluate_matches_dense_quadratic_form(rng):
    g = trapezoid_grid(1.0, 3)
    chi = thermal_chi(1.3, small_mode(g))
    eta = rng.normal(size=3) + 1j * rng.normal(size=3)
    m = chi.terms[0].dense()
    assert chi.evaluate(eta) == pytest.approx(np.exp(-eta.conj() @ m @ eta))


def test_vacuum_is_star_idempotent():
    g = trapezoid_grid(1.0, 3)
    vac = thermal_chi(0.0, small_mode(g))
    sq = star(vac, vac)
    assert sq.trace == pytest.approx(1.0)
    assert np.allclose(sq.terms[0].dense(), 0.5 * np.eye(3))


def test_translation_moves_thermal_mode():
    g = trapezoid_grid(1.5, 4)
    th = small_mode(g)
    z = 0.9
    u = translation_functional(z, g)
    moved = star(u, star(thermal_chi(2.0, th), u.adjoint())).normalized()
    target = thermal_chi(2.0, ModeFunction(g, th.apply(phase_kernel(z, g)))).terms[0].dense()
    assert np.allclose(moved.terms[0].dense(), target, atol=1e-12)


def test_translation_prefactor_is_real_on_symmetric_grid():
    g = trapezoid_grid(1.5, 4)
    lp = translation_log_prefactor(0.7, g)
    assert abs(lp.imag) < 1e-14


def test_translation_errors():
    g = trapezoid_grid(1.0, 3)  # has a k = 0 node
    with pytest.raises(PoleError, match="node 1"):
        translation_exponent(0.4, g)
    with pytest.raises(DegenerateOperatorError):
        translation_exponent(0.0, trapezoid_grid(1.0, 2))
    g2 = trapezoid_grid(np.pi, 2)
    with pytest.raises(PoleError):
        translation_exponent(2.0, g2)  # z k = 2 pi


def test_star_divergence_is_reported():
    g = trapezoid_grid(1.0, 2)
    bad = GaussianTerm.from_dense(1.0, g, -np.eye(2))
    good = GaussianTerm.from_dense(1.0, g, 0.5 * np.eye(2))
    with pytest.raises(DivergenceError):
        star_terms(bad, good)


def test_star_closed_form_against_integral(rng):
    g = trapezoid_grid(0.8, 2)
    a = thermal_chi(0.7, small_mode(g)).terms[0]
    b = thermal_chi(1.9, ModeFunction.from_values(g, [1.0, -1.0])).terms[0]
    eta = np.array([0.2 + 0.1j, -0.4 + 0.3j])
    closed = star_terms(a, b).evaluate(eta)
    assert star_integral(a, b, eta, points=41) == pytest.approx(closed, rel=1e-8)


def test_functional_algebra():
    g = trapezoid_grid(1.0, 2)
    chi = thermal_chi(1.0, small_mode(g))
    both = chi + chi
    assert len(both) == 2
    assert both.trace == 2.0
    assert both.normalized().is_normalized()
    zero = CharacteristicFunctional((chi.terms[0].scaled(0.0),))
    with pytest.raises(DivergenceError):
        zero.normalized()
    with pytest.raises(ValueError):
        CharacteristicFunctional(())
