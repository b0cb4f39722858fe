"""Gaussian characteristic functionals and their star product.

A :class:`GaussianTerm` represents ``eta -> C exp(-eta* <> M <> eta)`` with

    M = diag(d) + sum_j c_j u_j v_j^dagger,

the diagonal part being a multiple of the identity kernel for states and the
full translation exponent ``tau`` for the translation operator.  Linear algebra
is done in the grid's orthonormal coordinates ``x_i = sqrt(w_i / 2 pi) f(k_i)``
where the diamond contraction becomes the ordinary inner product; ``evaluate``
takes ``eta`` in these coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOperatorError, DivergenceError, DomainError, GridMismatchError, PoleError
from .kernel import ModeFunction, WaveGrid, _frozen
from .lowrank import DiagLowRank

POLE_GUARD = 1e-9


@dataclass(frozen=True, eq=False)
class GaussianTerm:
    weight: complex
    grid: WaveGrid
    diag: np.ndarray
    coeffs: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        n = self.grid.n_points
        diag = np.asarray(self.diag, dtype=complex)
        if diag.ndim == 0:
            diag = np.full(n, complex(diag))
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        left = np.asarray(self.left, dtype=complex).reshape(n, -1)
        right = np.asarray(self.right, dtype=complex).reshape(n, -1)
        if diag.shape != (n,) or left.shape != right.shape or left.shape[1] != coeffs.size:
            raise ValueError("inconsistent Gaussian term shapes")
        object.__setattr__(self, "weight", complex(self.weight))
        object.__setattr__(self, "diag", _frozen(diag))
        object.__setattr__(self, "coeffs", _frozen(coeffs))
        object.__setattr__(self, "left", _frozen(left))
        object.__setattr__(self, "right", _frozen(right))

    @classmethod
    def isotropic(cls, weight, grid: WaveGrid, sigma: complex, parts=()) -> "GaussianTerm":
        """Term with M = sigma 1 + sum c u v^dagger; ``parts`` holds (c, u, v) triples."""
        n = grid.n_points
        coeffs = [c for c, _, _ in parts]
        left = np.column_stack([_samples(u, grid) for _, u, _ in parts]) if parts else np.zeros((n, 0))
        right = np.column_stack([_samples(v, grid) for _, _, v in parts]) if parts else np.zeros((n, 0))
        return cls(weight, grid, np.full(n, complex(sigma)), np.asarray(coeffs, dtype=complex), left, right)

    @classmethod
    def from_dense(cls, weight, grid: WaveGrid, m) -> "GaussianTerm":
        """Term from an explicit exponent matrix in orthonormal grid coordinates."""
        m = np.asarray(m, dtype=complex)
        n = grid.n_points
        if m.shape != (n, n):
            raise GridMismatchError("exponent matrix does not match the grid")
        d = np.diag(m).copy()
        return cls.from_matrix(weight, grid, DiagLowRank(d, m - np.diag(d), np.eye(n), np.eye(n)))

    @property
    def rank(self) -> int:
        return self.coeffs.size

    @property
    def rank_parts(self) -> list[tuple[complex, np.ndarray, np.ndarray]]:
        return [(complex(c), self.left[:, j], self.right[:, j]) for j, c in enumerate(self.coeffs)]

    @property
    def sigma(self) -> complex:
        """Coefficient of the identity kernel; only defined for isotropic terms."""
        d = self.diag
        if np.max(np.abs(d - d[0])) > 1e-12 * max(1.0, abs(d[0])):
            raise ValueError("diagonal part is not a multiple of the identity")
        return complex(d[0])

    def matrix(self) -> DiagLowRank:
        """M in orthonormal grid coordinates."""
        s = self.grid.sqrt_measure[:, None]
        return DiagLowRank(self.diag, s * self.left, np.diag(self.coeffs), s * self.right)

    @classmethod
    def from_matrix(cls, weight, grid: WaveGrid, m: DiagLowRank) -> "GaussianTerm":
        m = m.compress()
        s = grid.sqrt_measure[:, None]
        return cls(weight, grid, m.diag, np.diag(m.core), m.left / s, m.right / s)

    def dense(self) -> np.ndarray:
        return self.matrix().dense()

    def evaluate(self, eta) -> complex:
        eta = np.asarray(eta, dtype=complex)
        m = self.matrix()
        quad = np.dot(eta.conj(), m.diag * eta)
        if self.rank:
            quad = quad + (eta.conj() @ m.left) @ m.core @ (m.right.conj().T @ eta)
        return complex(self.weight * np.exp(-quad))

    def adjoint(self) -> "GaussianTerm":
        """Functional of the adjoint operator: C -> conj(C), M -> M^dagger."""
        return GaussianTerm(
            np.conj(self.weight), self.grid, self.diag.conj(), self.coeffs.conj(), self.right, self.left
        )

    def scaled(self, factor: complex) -> "GaussianTerm":
        return GaussianTerm(self.weight * factor, self.grid, self.diag, self.coeffs, self.left, self.right)


def _samples(f, grid: WaveGrid) -> np.ndarray:
    if isinstance(f, ModeFunction):
        grid.check_same(f.grid)
        return f.values
    vals = np.asarray(f, dtype=complex)
    if vals.shape != (grid.n_points,):
        raise GridMismatchError("rank-part samples do not match the grid")
    return vals


@dataclass(frozen=True, eq=False)
class CharacteristicFunctional:
    """Weighted sum of Gaussian terms on one grid; chi[0] = sum of weights."""

    terms: tuple[GaussianTerm, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("a characteristic functional needs at least one term")
        for t in terms[1:]:
            terms[0].grid.check_same(t.grid)
        object.__setattr__(self, "terms", terms)

    @property
    def grid(self) -> WaveGrid:
        return self.terms[0].grid

    @property
    def trace(self) -> complex:
        """chi[0]: the trace of the represented operator."""
        return complex(sum(t.weight for t in self.terms))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.trace - 1.0) <= tol

    def normalized(self) -> "CharacteristicFunctional":
        tr = self.trace
        if tr == 0:
            raise DivergenceError("cannot normalize a functional with zero trace")
        return CharacteristicFunctional(tuple(t.scaled(1.0 / tr) for t in self.terms))

    def evaluate(self, eta) -> complex:
        return complex(sum(t.evaluate(eta) for t in self.terms))

    def adjoint(self) -> "CharacteristicFunctional":
        return CharacteristicFunctional(tuple(t.adjoint() for t in self.terms))

    def __add__(self, other: "CharacteristicFunctional") -> "CharacteristicFunctional":
        return CharacteristicFunctional(self.terms + other.terms)

    def __len__(self) -> int:
        return len(self.terms)


def thermal_chi(n_avg: float, theta: ModeFunction) -> CharacteristicFunctional:
    """Single-mode thermal state: M = 1/2 + n Theta Theta^dagger."""
    if n_avg < 0:
        raise DomainError(f"mean particle number must be nonnegative, got {n_avg}")
    parts = [(n_avg, theta, theta)] if n_avg > 0 else []
    return CharacteristicFunctional((GaussianTerm.isotropic(1.0, theta.grid, 0.5, parts),))


def translation_exponent(z: float, grid: WaveGrid) -> np.ndarray:
    """tau = (1 + Phi)(1 - Phi)^-1 / 2 = (i/2) cot(z k / 2), node by node."""
    if z == 0:
        raise DegenerateOperatorError("translation by z = 0 is the identity; its functional is not Gaussian")
    theta = z * grid.nodes
    gap = np.abs(1.0 - np.exp(1j * theta))
    bad = np.flatnonzero(gap < POLE_GUARD)
    if bad.size:
        i = int(bad[0])
        raise PoleError(
            f"node {i} (k = {grid.nodes[i]!r}) has |1 - exp(i z k)| = {gap[i]:.2e} < {POLE_GUARD:g} for z = {z!r}"
        )
    return 0.5j / np.tan(0.5 * theta)


def translation_chi(z: float, grid: WaveGrid) -> GaussianTerm:
    """Translation operator term exp(-eta* <> tau <> eta) with a deferred prefactor.

    The prefactor 1/det(1 - Phi) is left out (weight 1).  On a symmetric grid
    without a k = 0 node the determinant is real and positive, so it is a common
    factor of every term in a product and drops out once chi[0] = 1 is imposed.
    """
    tau = translation_exponent(z, grid)
    n = grid.n_points
    return GaussianTerm(1.0, grid, tau, np.zeros(0), np.zeros((n, 0)), np.zeros((n, 0)))


def translation_log_prefactor(z: float, grid: WaveGrid) -> complex:
    """log of 1/det(1 - Phi) on the grid; finite only on pole-free grids."""
    translation_exponent(z, grid)
    return complex(-np.sum(np.log(1.0 - np.exp(1j * z * grid.nodes))))


def translation_functional(z: float, grid: WaveGrid) -> CharacteristicFunctional:
    return CharacteristicFunctional((translation_chi(z, grid),))


def star_terms(a: GaussianTerm, b: GaussianTerm) -> GaussianTerm:
    """Closed-form star product of two Gaussian terms.

    With S = A + B the beta integral gives

        weight = C_A C_B / det S,
        M      = B - (B + 1/2)(A + B)^-1 (B - 1/2),

    for the measure normalized so that the vacuum is idempotent.
    """
    a.grid.check_same(b.grid)
    ma, mb = a.matrix(), b.matrix()
    s = ma + mb
    if not s.hermitian_part_is_pd():
        raise DivergenceError("star product integral does not converge: Hermitian part of A + B is not positive")
    cross = mb.shift(0.5) @ s.inverse() @ mb.shift(-0.5)
    m = mb - cross
    weight = a.weight * b.weight * np.exp(-s.logdet())
    return GaussianTerm.from_matrix(weight, a.grid, m)


def star(a: CharacteristicFunctional, b: CharacteristicFunctional) -> CharacteristicFunctional:
    """Star product of two functionals, distributed over their terms (a-major order)."""
    a.grid.check_same(b.grid)
    return CharacteristicFunctional(tuple(star_terms(ta, tb) for ta in a.terms for tb in b.terms))
