import math

import numpy as np
import pytest

from catdip.analytic import coherent_cat_energy
from catdip.charfunc import thermal_chi
from catdip.errors import OracleError
from catdip.kernel import ModeFunction, default_grid, flat_kernel, gaussian_mode, phase_kernel, trapezoid_grid
from catdip.oracles import (
    _coherent_vector,
    dense_scan_min,
    fiducial_energy_quad,
    fock_coherent_cat_energy,
    quartic_fd,
    star_integral,
)

GRID = default_grid(1.0, 513)
THETA = gaussian_mode(1.0, GRID)


def branches(z):
    phi = phase_kernel(z, GRID)
    return ModeFunction(GRID, THETA.apply(phi)), ModeFunction(GRID, THETA.apply(phi.conj()))


@pytest.mark.parametrize("n", [0.5, 4.0, 20.0])
@pytest.mark.parametrize("s", [0.0, 0.1, 0.6, 1.7])
def test_fock_oracle_matches_coherent_closed_form(n, s):
    plus, minus = branches(s / 2)
    got = fock_coherent_cat_energy(n, plus, minus, flat_kernel(GRID))
    assert got == pytest.approx(float(coherent_cat_energy(n, s / 2)), abs=1e-10)


def test_fock_oracle_orthogonal_branches():
    # orthogonal branch modes still share the vacuum: <alpha, 0 | 0, alpha> = exp(-n)
    plus, minus = branches(4.0)
    n = 6.0
    assert fock_coherent_cat_energy(n, plus, minus, flat_kernel(GRID)) == pytest.approx(1 / (1 + math.exp(-n)), abs=1e-12)


def test_fock_cutoff_too_small():
    with pytest.raises(OracleError, match="tail mass"):
        _coherent_vector(3.0, 5, 1e-10)
    plus, minus = branches(0.3)
    with pytest.raises(OracleError):
        fock_coherent_cat_energy(20.0, plus, minus, flat_kernel(GRID), cutoff=10)


def test_star_integral_needs_two_nodes():
    g = trapezoid_grid(1.0, 3)
    t = thermal_chi(1.0, ModeFunction.from_values(g, np.ones(3), symmetric=True)).terms[0]
    with pytest.raises(ValueError):
        star_integral(t, t, np.zeros(3))


def test_quartic_fd_on_vacuum_is_zero():
    g = trapezoid_grid(1.0, 2)
    vac = thermal_chi(0.0, ModeFunction.from_values(g, np.ones(2), symmetric=True))
    assert abs(quartic_fd(vac, np.ones(2), np.ones(2))) < 1e-6
    # raw ordering keeps the zero-point pairing: 2 + 1/2 for two unit modes with M = 1/2
    assert quartic_fd(vac, np.ones(2), np.ones(2), "raw").real == pytest.approx(1.0 + 0.5, rel=1e-6)


@pytest.mark.parametrize("m", [0.0, 0.5, 3.0])
def test_fiducial_quad_limits(m):
    e = fiducial_energy_quad(1.0, m)
    assert e >= max(m, 0.0)
    if m == 0.0:
        assert e == pytest.approx(2 / math.sqrt(math.pi), rel=1e-12)
    if m == 3.0:
        # large mass: omega ~ m + k^2 / 2m with <k^2> = 2 / w0^2
        assert e == pytest.approx(3.0 + 1.0 / 3.0, rel=2e-2)


def test_dense_scan_min():
    x, fx = dense_scan_min(lambda x: (x - 0.3) ** 2, 0.0, 1.0, 0.01)
    assert x == pytest.approx(0.3)
    assert fx == pytest.approx(0.0, abs=1e-20)
