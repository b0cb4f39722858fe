"""Closed-form cat energy curves and dip analysis.

With s = 2z/w0, g = exp(-s^2) and h = 1 - g the normalized energy of the
translated-thermal cat is

    e(s) = 1 - (n + 1) h / (2 + 3 n h + n^2 h^2),

stationary at h* = sqrt(2)/n.  The even superposition of two translated
coherent states with n photons per branch has

    e(s) = (1 + g exp(-n h)) / (1 + exp(-n h)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, OracleError
from .optimize import golden_section, scan_then_golden

SQRT2 = math.sqrt(2.0)
ASYMPTOTIC_DEPTH = 3.0 - 2.0 * SQRT2
DIP_Z_TOL = 1e-9


def g_h(z, w0: float = 1.0):
    """Branch overlap g = exp(-4 z^2 / w0^2) and h = 1 - g."""
    s2 = (2.0 * np.asarray(z, dtype=float) / w0) ** 2
    return np.exp(-s2), -np.expm1(-s2)


def energy_of_h(n_avg, h):
    """e as a rational function of h; integer constants keep Fraction input exact."""
    n = n_avg
    return 1 - (n + 1) * h / (2 + 3 * n * h + n * n * h * h)


def _de_dh(n, h):
    den = 2.0 + 3.0 * n * h + n * n * h * h
    return -(n + 1.0) * (2.0 - n * n * h * h) / den**2


def cat_energy_closed(n_avg, z, w0: float = 1.0):
    """<E>_cat / (n E0) for the Gaussian mode."""
    _, h = g_h(z, w0)
    return energy_of_h(n_avg, h)


def cat_energy_slope(n_avg, z, w0: float = 1.0):
    """d e / d(2z/w0), analytic."""
    s = 2.0 * np.asarray(z, dtype=float) / w0
    g, h = g_h(z, w0)
    return _de_dh(n_avg, h) * 2.0 * s * g


def coherent_cat_energy(n_avg, z, w0: float = 1.0):
    """Normalized energy of the even cat of two translated coherent states."""
    g, h = g_h(z, w0)
    o = np.exp(-n_avg * h)
    return (1.0 + g * o) / (1.0 + o)


def coherent_cat_slope(n_avg, z, w0: float = 1.0):
    s = 2.0 * np.asarray(z, dtype=float) / w0
    g, h = g_h(z, w0)
    o = np.exp(-n_avg * h)
    num, den = 1.0 + g * o, 1.0 + o
    dnum = -o - n_avg * g * o
    dden = -n_avg * o
    return (dnum * den - num * dden) / den**2 * 2.0 * s * g


@dataclass(frozen=True)
class EnergyCurve:
    n_avg: float
    w0: float
    z: np.ndarray
    sep_norm: np.ndarray
    e_norm: np.ndarray
    de_dz: np.ndarray

    def rows(self):
        for i in range(self.z.size):
            yield self.n_avg, self.z[i], self.sep_norm[i], self.e_norm[i], self.de_dz[i]


def sep_grid(n_avg: float, zmax_norm: float = 3.0, steps: int = 601, include_dip: bool = True) -> np.ndarray:
    """Uniform 2z/w0 samples on [0, zmax_norm].

    With ``include_dip`` the interior sample nearest the dip is moved onto the
    exact dip position, so the sampled minimum is the true one and the row
    count stays ``steps``.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not zmax_norm > 0:
        raise ValueError("zmax_norm must be positive")
    s = np.linspace(0.0, zmax_norm, steps)
    if include_dip and n_avg > SQRT2:
        s_star = dip_sep_norm(n_avg)
        if s_star < zmax_norm:
            j = max(1, int(np.argmin(np.abs(s - s_star))))
            if j < steps - 1 or s_star < s[-1]:
                s[j] = s_star
    return s


def energy_curve(
    n_avg: float, w0: float = 1.0, zmax_norm: float = 3.0, steps: int = 601, include_dip: bool = True
) -> EnergyCurve:
    if not n_avg >= 0:
        raise DomainError("n_avg must be nonnegative")
    if not w0 > 0:
        raise DomainError("w0 must be positive")
    s = sep_grid(n_avg, zmax_norm, steps, include_dip)
    z = 0.5 * w0 * s
    e = cat_energy_closed(n_avg, z, w0)
    de_dz = cat_energy_slope(n_avg, z, w0) * 2.0 / w0
    return EnergyCurve(float(n_avg), float(w0), z, s, e, de_dz)


@dataclass(frozen=True)
class DipReport:
    """Location, depth and restoring slope of an energy dip.

    ``max_opposing_slope`` is in units of d e_norm / d(2z/w0).  When there is no
    interior minimum (``boundary_case``) the curve falls monotonically to its
    asymptote, ``z_star`` is infinite and there is no opposing side.
    """

    n_avg: float
    w0: float
    z_star: float
    sep_norm_star: float
    e_min: float
    depth: float
    max_opposing_slope: float
    boundary_case: bool
    z_star_golden: float = math.nan


def dip_sep_norm(n_avg: float) -> float:
    """2z*/w0 = sqrt(-ln(1 - sqrt(2)/n)); only for n > sqrt(2)."""
    return math.sqrt(-math.log1p(-SQRT2 / n_avg))


def _golden_dip_z(n_avg: float, w0: float) -> float:
    """Dip position by golden section on the closed form in 40-digit arithmetic."""
    h_hi = min(1.0, 10.0 * SQRT2 / n_avg)
    s_hi = 6.0 if h_hi >= 1.0 else math.sqrt(-math.log1p(-h_hi))
    with mpmath.workdps(40):
        n = mpmath.mpf(n_avg)
        w = mpmath.mpf(w0)

        def e(z):
            h = -mpmath.expm1(-(2 * z / w) ** 2)
            return 1 - (n + 1) * h / (2 + 3 * n * h + n * n * h * h)

        z, _ = golden_section(e, mpmath.mpf(0), mpmath.mpf(s_hi) * w / 2, tol=mpmath.mpf("1e-15"))
        return float(z)


def _max_slope(slope, s_lo: float, s_hi: float) -> float:
    _, neg = scan_then_golden(lambda s: -float(slope(s)), s_lo, s_hi, samples=4001, tol=1e-12)
    return -neg


def find_dip(n_avg: float, w0: float = 1.0) -> DipReport:
    """Dip of the translated-thermal cat energy.

    The analytic position is cross-checked against a golden-section minimizer;
    disagreement beyond 1e-9 in z raises OracleError.
    """
    if not n_avg > 0:
        raise DomainError(f"n_avg must be positive, got {n_avg}")
    if not w0 > 0:
        raise DomainError("w0 must be positive")
    h_star = SQRT2 / n_avg
    if h_star >= 1.0:
        e_inf = (n_avg + 1.0) / (n_avg + 2.0)
        return DipReport(n_avg, w0, math.inf, math.inf, e_inf, 1.0 - e_inf, 0.0, True)
    s_star = dip_sep_norm(n_avg)
    z_star = 0.5 * w0 * s_star
    z_gold = _golden_dip_z(n_avg, w0)
    if abs(z_gold - z_star) > DIP_Z_TOL:
        raise OracleError(f"dip position mismatch: analytic {z_star!r}, golden section {z_gold!r}")
    e_min = float(energy_of_h(n_avg, h_star))
    slope = _max_slope(lambda s: cat_energy_slope(n_avg, 0.5 * s), s_star, s_star + 6.0)
    return DipReport(n_avg, w0, z_star, s_star, e_min, 1.0 - e_min, slope, False, z_gold)


def coherent_dip(n_avg: float, w0: float = 1.0, s_max: float = 6.0) -> DipReport:
    """Dip of the coherent-state cat, located numerically (no closed-form stationary point)."""
    if not n_avg > 0:
        raise DomainError(f"n_avg must be positive, got {n_avg}")
    s_star, e_min = scan_then_golden(lambda s: float(coherent_cat_energy(n_avg, 0.5 * s)), 0.0, s_max, 6001)
    slope = _max_slope(lambda s: coherent_cat_slope(n_avg, 0.5 * s), s_star, s_star + 6.0)
    return DipReport(n_avg, w0, 0.5 * w0 * s_star, s_star, e_min, 1.0 - e_min, slope, False)


@dataclass(frozen=True)
class ScalingFit:
    n_values: np.ndarray
    dips: tuple[DipReport, ...]
    exponent: float
    intercept: float

    @property
    def sep_norm_star(self) -> np.ndarray:
        return np.array([d.sep_norm_star for d in self.dips])

    @property
    def depth(self) -> np.ndarray:
        return np.array([d.depth for d in self.dips])

    @property
    def max_opposing_slope(self) -> np.ndarray:
        return np.array([d.max_opposing_slope for d in self.dips])

    @property
    def slope_increasing(self) -> bool:
        return bool(np.all(np.diff(self.max_opposing_slope) > 0))

    @property
    def position_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.sep_norm_star) < 0))


def scaling_sweep(n_list, w0: float = 1.0) -> ScalingFit:
    """Log-log fit of dip position against particle number.

    For large n, 2z*/w0 ~ 2^(1/4) n^(-1/2), so the fitted exponent sits near -1/2.
    """
    n_values = np.asarray(sorted(float(n) for n in n_list))
    if n_values.size < 3:
        raise ValueError("a scaling fit needs at least 3 particle numbers")
    if np.any(n_values <= SQRT2):
        raise DomainError("every n must exceed sqrt(2) to have an interior dip")
    dips = tuple(find_dip(n, w0) for n in n_values)
    seps = np.array([d.sep_norm_star for d in dips])
    exponent, intercept = np.polyfit(np.log(n_values), np.log(seps), 1)
    return ScalingFit(n_values, dips, float(exponent), float(intercept))
