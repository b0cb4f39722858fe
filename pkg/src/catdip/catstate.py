"""Schrodinger cat of two oppositely translated thermal states."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charfunc import (
    CharacteristicFunctional,
    GaussianTerm,
    star,
    thermal_chi,
    translation_functional,
)
from .errors import DomainError, SymmetryError
from .kernel import ModeFunction, diamond, is_even, phase_kernel


@dataclass(frozen=True)
class CatParameters:
    """Mean particle number, translation z (branch separation 2z), width w0, field mass m."""

    n_avg: float
    z: float
    w0: float = 1.0
    m: float = 0.0

    def __post_init__(self):
        if not self.n_avg >= 0:
            raise DomainError(f"n_avg must be nonnegative, got {self.n_avg}")
        if not self.w0 > 0:
            raise DomainError(f"w0 must be positive, got {self.w0}")
        if not self.m >= 0:
            raise DomainError(f"field mass must be nonnegative, got {self.m}")
        if not math.isfinite(self.z):
            raise DomainError("z must be finite")

    @property
    def sep_norm(self) -> float:
        return 2.0 * self.z / self.w0


def _require_even(theta: ModeFunction) -> None:
    if not is_even(theta.values):
        raise SymmetryError("the cat construction needs an even mode, Theta(-k) = Theta(k)")


def overlap_mu(theta: ModeFunction, z: float, n_avg: float) -> float:
    """mu = n <Theta| Phi(z)^2 |Theta>, real for an even mode."""
    _require_even(theta)
    ov = diamond(theta, phase_kernel(2.0 * z, theta.grid), theta)
    if abs(ov.imag) > 1e-10:
        raise SymmetryError(f"phase overlap has imaginary part {ov.imag:.3e}")
    return n_avg * ov.real


def lambda_param(n_avg: float, mu: float) -> float:
    denom = 1.0 + n_avg - mu
    if not denom > 0:
        raise DomainError(f"1 + n - mu = {denom} must be positive")
    return 1.0 / denom


def cat_chi(p: CatParameters, theta: ModeFunction) -> CharacteristicFunctional:
    """Normalized four-term functional of the translated-thermal cat.

    Weights are [1, L, L, 1] / (2 (1 + L)) with L = 1/(1 + n - mu); every
    exponent carries the vacuum part 1/2 plus one rank-one term built from the
    translated modes Phi Theta and Phi* Theta.
    """
    _require_even(theta)
    grid = theta.grid
    phi = phase_kernel(p.z, grid)
    plus = theta.apply(phi)
    minus = theta.apply(phi.conj())
    lam = lambda_param(p.n_avg, overlap_mu(theta, p.z, p.n_avg))
    norm = 1.0 / (2.0 * (1.0 + lam))
    n = p.n_avg
    rows = [
        (norm, n, plus, plus),
        (norm * lam, n * lam, plus, minus),
        (norm * lam, n * lam, minus, plus),
        (norm, n, minus, minus),
    ]
    terms = tuple(
        GaussianTerm.isotropic(w, grid, 0.5, [(c, u, v)] if n > 0 else []) for w, c, u, v in rows
    )
    return CharacteristicFunctional(terms)


def cat_chi_via_star(p: CatParameters, theta: ModeFunction) -> CharacteristicFunctional:
    """Same cat assembled as (U + U^dagger) rho (U + U^dagger) through star products.

    Verification path only: needs a pole-free grid (no k = 0 node) and is
    renormalized to chi[0] = 1 at the end.
    """
    _require_even(theta)
    rho = thermal_chi(p.n_avg, theta)
    if p.z == 0:
        return rho
    u = translation_functional(p.z, theta.grid)
    branch = u + u.adjoint()
    return star(branch, star(rho, branch.adjoint())).normalized()


def functionals_match(a: CharacteristicFunctional, b: CharacteristicFunctional) -> float:
    """Largest mismatch between two term sets, pairing terms by nearest exponent.

    Returns the max over terms of |dC| and max |dM| in orthonormal coordinates;
    raises ValueError when the term counts differ.  Small grids only.
    """
    if len(a) != len(b):
        raise ValueError(f"term counts differ: {len(a)} vs {len(b)}")
    left = [(t.weight, t.dense()) for t in a.terms]
    right = [(t.weight, t.dense()) for t in b.terms]
    worst = 0.0
    for wa, ma in left:
        errs = [max(abs(wa - wb), float(np.max(np.abs(ma - mb)))) for wb, mb in right]
        j = int(np.argmin(errs))
        worst = max(worst, errs[j])
        right.pop(j)
    return worst
