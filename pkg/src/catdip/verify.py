"""Self-verification suite: every check compares two independent computations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import (
    SQRT2,
    cat_energy_closed,
    coherent_cat_energy,
    energy_of_h,
    find_dip,
    scaling_sweep,
)
from .catstate import CatParameters, cat_chi, cat_chi_via_star, functionals_match
from .charfunc import GaussianTerm, star, star_terms, thermal_chi, translation_functional
from .errors import CatDipError
from .kernel import (
    DEFAULT_K_SPAN,
    DEFAULT_POINTS,
    DiagonalKernel,
    ModeFunction,
    energy_kernel,
    flat_kernel,
    gaussian_mode,
    make_grid,
    phase_kernel,
    phase_overlaps,
    trapezoid_grid,
)
from .observables import (
    KERNEL_APPROX_TOL,
    QuarticKernel,
    fiducial_energy,
    normalized_cat_energy_numeric,
    term_quartic,
)
from .oracles import dense_scan_min, fiducial_energy_quad, fock_coherent_cat_energy, quartic_fd, star_integral

SEED = 20240611
CURVE_N = (1.0, 100.0, 1e4)
LADDER_POINTS = (17, 33, 65)


@dataclass(frozen=True)
class GridSetup:
    w0: float = 1.0
    mass: float = 0.0
    k_max: float | None = None
    points: int = DEFAULT_POINTS
    rule: str = "trapezoid"

    def build(self):
        k_max = self.k_max if self.k_max is not None else DEFAULT_K_SPAN / self.w0
        return make_grid(k_max, self.points, self.rule)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tol: float
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{tag} {self.name}: residual={self.residual:.3e} tol={self.tol:.1e}{extra}"


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self):
        return [r.line() for r in self.results]


def _result(name, residual, tol, detail="") -> CheckResult:
    residual = float(residual)
    return CheckResult(name, bool(residual <= tol), residual, tol, detail)


def _flat_curve_error(theta: ModeFunction, w0: float, sep) -> float:
    kernel = flat_kernel(theta.grid)
    worst = 0.0
    for n in CURVE_N:
        num = normalized_cat_energy_numeric(n, sep, theta, w0, kernel)
        worst = max(worst, float(np.max(np.abs(num / cat_energy_closed(n, 0.5 * w0 * sep, w0) - 1.0))))
    return worst


def _richardson_e0(setup: GridSetup, grid) -> float:
    """E0 on the grid, Richardson-extrapolated from one refinement for the trapezoid rule.

    |k| has a kink at 0, so the trapezoid error is O(dk^2) rather than spectral.
    """
    coarse = fiducial_energy(gaussian_mode(setup.w0, grid), energy_kernel(setup.mass, grid))
    if grid.rule != "trapezoid":
        return coarse
    fine_grid = grid.refined()
    fine = fiducial_energy(gaussian_mode(setup.w0, fine_grid), energy_kernel(setup.mass, fine_grid))
    return (4.0 * fine - coarse) / 3.0


def check_numeric_vs_closed(setup: GridSetup, tol: float = 1e-8) -> CheckResult:
    """Engine energy (flat kernel), branch overlap and E0 against closed forms on the configured grid."""
    name = "numeric-vs-closed-form"
    try:
        grid = setup.build()
        theta = gaussian_mode(setup.w0, grid)
        sep = np.linspace(0.0, 3.0, 61)
        e_err = _flat_curve_error(theta, setup.w0, sep)
        z = np.linspace(0.0, 2.0 * setup.w0, 81)
        g_err = float(np.max(np.abs(phase_overlaps(theta, z).real - np.exp(-((2.0 * z / setup.w0) ** 2)))))
        e0 = _richardson_e0(setup, grid)
        e0_ref = fiducial_energy_quad(setup.w0, setup.mass)
        e0_err = abs(e0 / e0_ref - 1.0)
    except CatDipError as exc:
        return CheckResult(name, False, math.inf, tol, f"{type(exc).__name__}: {exc}")
    residual = max(e_err, g_err, e0_err)
    detail = f"energy={e_err:.2e} overlap={g_err:.2e} E0={e0_err:.2e} ({grid.n_points} pts, {grid.rule})"
    return _result(name, residual, tol, detail)


def check_grid_convergence() -> CheckResult:
    """Flat-kernel energy error must fall strictly over two grid doublings."""
    errs = []
    sep = np.linspace(0.0, 3.0, 61)
    for pts in LADDER_POINTS:
        grid = trapezoid_grid(DEFAULT_K_SPAN, pts)
        theta = ModeFunction.from_values(grid, np.exp(-(grid.nodes**2) / 8.0), symmetric=True)
        errs.append(_flat_curve_error(theta, 1.0, sep))
    ok = all(b < a for a, b in zip(errs, errs[1:]))
    detail = " -> ".join(f"{p}:{e:.2e}" for p, e in zip(LADDER_POINTS, errs))
    return CheckResult("grid-convergence", ok, errs[-1], errs[0], detail)


def _small_mode(grid) -> ModeFunction:
    k = grid.nodes
    return ModeFunction.from_values(grid, 1.0 / (1.0 + k**2), symmetric=True)


def _random_term(rng, grid, herm: float = 0.5) -> GaussianTerm:
    """Gaussian term whose exponent has a positive Hermitian part."""
    n = grid.n_points
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    k = 0.3 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    m = a @ a.conj().T / 4.0 + herm * np.eye(n) + k - k.conj().T
    return GaussianTerm.from_dense(rng.normal() + 0.3j, grid, m)


def check_star_small_grid(tol_translation: float = 1e-10, tol_cat: float = 1e-8, tol_integral: float = 1e-8):
    """Translation of a thermal state, star-assembled cat and the brute-force beta integral."""
    worst_tr = worst_cat = 0.0
    for pts, k_max in ((2, 0.8), (4, 1.5)):
        grid = trapezoid_grid(k_max, pts)
        theta = _small_mode(grid)
        for n, z in ((0.5, 0.7), (3.0, 1.1)):
            u = translation_functional(z, grid)
            moved = star(u, star(thermal_chi(n, theta), u.adjoint())).normalized()
            target = thermal_chi(n, ModeFunction(grid, theta.apply(phase_kernel(z, grid))))
            worst_tr = max(worst_tr, functionals_match(moved, target))
            p = CatParameters(n, z)
            worst_cat = max(worst_cat, functionals_match(cat_chi_via_star(p, theta), cat_chi(p, theta)))

    rng = np.random.default_rng(SEED)
    grid = trapezoid_grid(0.8, 2)
    a, b = _random_term(rng, grid), _random_term(rng, grid)
    closed = star_terms(a, b)
    eta = np.array([0.3 - 0.2j, 0.1 + 0.5j])
    brute = star_integral(a, b, eta)
    int_err = abs(brute - closed.evaluate(eta)) / abs(brute)
    return [
        _result("star-translation", worst_tr, tol_translation),
        _result("star-cat-assembly", worst_cat, tol_cat),
        _result("star-integral", int_err, tol_integral),
    ]


def check_quartic_fd(count: int = 20, tol: float = 1e-6) -> CheckResult:
    """Wick fourth moment against finite differences of chi for random terms on 2-3 node grids."""
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(count):
        pts = int(rng.integers(2, 4))
        grid = trapezoid_grid(1.0, pts)
        term = _random_term(rng, grid, herm=0.2)
        a = rng.uniform(0.1, 2.0, pts)
        b = rng.uniform(0.1, 2.0, pts)
        k4 = QuarticKernel(DiagonalKernel(grid, a), DiagonalKernel(grid, b))
        for ordering in ("raw", "vacuum-subtracted"):
            exact = term_quartic(term, k4, ordering)
            fd = quartic_fd(term, a, b, ordering)
            worst = max(worst, abs(exact - fd) / max(1.0, abs(exact)))
    return _result("quartic-wick-fd", worst, tol, f"{count} terms x 2 orderings")


def check_fock_coherent(setup: GridSetup, tol: float = 1e-6) -> CheckResult:
    """Coherent cat closed form against a truncated two-mode Fock state, n <= 20."""
    grid = make_grid(DEFAULT_K_SPAN / setup.w0, 513)
    theta = gaussian_mode(setup.w0, grid)
    kernel = flat_kernel(grid)
    worst = 0.0
    for n in (1.0, 5.0, 10.0, 20.0):
        for s in (0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 3.0):
            z = 0.5 * s * setup.w0
            phi = phase_kernel(z, grid)
            plus = ModeFunction(grid, theta.apply(phi))
            minus = ModeFunction(grid, theta.apply(phi.conj()))
            oracle = fock_coherent_cat_energy(n, plus, minus, kernel)
            worst = max(worst, abs(oracle - float(coherent_cat_energy(n, z, setup.w0))))
    return _result("fock-coherent", worst, tol)


def check_kernel_approximation(setup: GridSetup) -> CheckResult:
    """Numeric energy with the physical dispersion stays within KERNEL_APPROX_TOL of the flat closed form."""
    try:
        grid = setup.build()
        theta = gaussian_mode(setup.w0, grid)
    except CatDipError as exc:
        return CheckResult("kernel-approximation", False, math.inf, KERNEL_APPROX_TOL, str(exc))
    sep = np.linspace(0.0, 3.0, 61)
    num = normalized_cat_energy_numeric(100.0, sep, theta, setup.w0, m=setup.mass)
    dev = float(np.max(np.abs(num - cat_energy_closed(100.0, 0.5 * setup.w0 * sep, setup.w0))))
    return _result("kernel-approximation", dev, KERNEL_APPROX_TOL, f"mass={setup.mass:g}")


def check_dips(w0: float = 1.0, tol_pos: float = 1e-4, tol_depth: float = 1e-6) -> CheckResult:
    """Analytic dip against a dense-scan minimizer, plus the stationarity condition h* = sqrt(2)/n."""
    worst_pos = worst_depth = 0.0
    for n in (100.0, 1000.0, 1e4):
        d = find_dip(n, w0)
        step = d.sep_norm_star * 1e-5
        s_scan, e_scan = dense_scan_min(
            lambda s: cat_energy_closed(n, 0.5 * s * w0, w0), 0.5 * d.sep_norm_star, 2.0 * d.sep_norm_star, step
        )
        worst_pos = max(worst_pos, abs(s_scan - d.sep_norm_star))
        worst_depth = max(worst_depth, abs(e_scan - d.e_min), abs(d.e_min - energy_of_h(n, SQRT2 / n)))
    residual = max(worst_pos / tol_pos, worst_depth / tol_depth)
    return _result("dip-reference", residual, 1.0, f"position={worst_pos:.2e} depth={worst_depth:.2e}")


def check_scaling(w0: float = 1.0, tol: float = 0.02) -> CheckResult:
    """Dip position ~ n^-1/2 over [1e2, 1e5] and an increasing opposing slope."""
    fit = scaling_sweep(np.logspace(2, 5, 7), w0)
    residual = abs(fit.exponent + 0.5)
    ok = residual <= tol and fit.slope_increasing
    detail = f"exponent={fit.exponent:.5f} slope_increasing={fit.slope_increasing}"
    return CheckResult("scaling-fit", ok, residual, tol, detail)


def run_checks(setup: GridSetup | None = None) -> Report:
    setup = setup or GridSetup()
    report = Report()
    report.results.append(check_numeric_vs_closed(setup))
    report.results.append(check_grid_convergence())
    report.results.append(check_kernel_approximation(setup))
    report.results.extend(check_star_small_grid())
    report.results.append(check_quartic_fd())
    report.results.append(check_fock_coherent(setup))
    report.results.append(check_dips(setup.w0))
    report.results.append(check_scaling(setup.w0))
    return report
