"""Brute-force oracles that share no code path with the closed forms they check.

* :func:`star_integral` integrates the star-product functional integral
  numerically on a two-node grid (a 4-real-dimensional integral).
* :func:`quartic_fd` differentiates chi[eta] four times by finite differences.
* :func:`fock_coherent_cat_energy` builds the coherent cat as a state vector
  in a truncated two-mode Fock space.
* :func:`fiducial_energy_quad` integrates Theta* <> omega <> Theta adaptively.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .charfunc import CharacteristicFunctional, GaussianTerm
from .errors import OracleError
from .kernel import DiagonalKernel, ModeFunction, diamond


def star_integral(a: GaussianTerm, b: GaussianTerm, eta, half_width: float = 8.0, points: int = 61) -> complex:
    """Star product (chi_A * chi_B)[eta] by brute-force tensor trapezoid quadrature.

    Integrates chi_A[beta] chi_B[eta - beta] exp((eta* beta - beta* eta)/2)
    over beta in C^2 with measure d^2 beta / pi per mode.  The box
    [-half_width, half_width]^4 must contain the Gaussian mass.
    """
    if a.grid.n_points != 2:
        raise ValueError("star_integral works on two-node grids only")
    eta = np.asarray(eta, dtype=complex)
    ma, mb = a.dense(), b.dense()
    x = np.linspace(-half_width, half_width, points)
    dx = x[1] - x[0]
    w1 = np.full(points, dx)
    w1[0] = w1[-1] = 0.5 * dx
    b1 = x[:, None] + 1j * x[None, :]  # beta_1 on a (re, im) plane
    wt1 = (w1[:, None] * w1[None, :]).ravel()
    b1 = b1.ravel()
    total = 0.0 + 0.0j
    for i, xr in enumerate(x):
        for j, xi in enumerate(x):
            b2 = xr + 1j * xi
            beta = np.stack([b1, np.full_like(b1, b2)])
            d = eta[:, None] - beta
            qa = np.einsum("in,ij,jn->n", beta.conj(), ma, beta)
            qb = np.einsum("in,ij,jn->n", d.conj(), mb, d)
            cross = 0.5 * (eta.conj() @ beta - np.einsum("in,i->n", beta.conj(), eta))
            f = np.exp(-qa - qb + cross)
            total += w1[i] * w1[j] * np.dot(wt1, f)
    return complex(a.weight * b.weight * total / math.pi**2)


# 7-point second-derivative stencil, sixth order accurate
_D2 = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
_OFF = np.arange(-3, 4)


def quartic_fd(
    chi: CharacteristicFunctional | GaussianTerm,
    a,
    b,
    ordering: str = "vacuum-subtracted",
    h: float = 0.02,
) -> complex:
    """(d_eta <> a <> d_eta*)(d_eta <> b <> d_eta*) chi at 0 by finite differences.

    Uses d_eta d_eta* = (d_x^2 + d_y^2)/4 per complex coordinate and applies
    the 7-point stencil along each pair of real directions.  For the
    vacuum-subtracted ordering the differentiated function is
    chi[eta] exp(|eta|^2 / 2).
    """
    terms = chi.terms if isinstance(chi, CharacteristicFunctional) else (chi,)
    n = terms[0].grid.n_points
    mats = [(t.weight, t.dense()) for t in terms]
    subtract = ordering != "raw"
    a = np.asarray(a)
    b = np.asarray(b)

    def f(eta):  # eta: (..., n)
        q0 = np.einsum("...i,...i->...", eta.conj(), eta)
        out = 0.0
        for w, m in mats:
            q = np.einsum("...i,ij,...j->...", eta.conj(), m, eta)
            out = out + w * np.exp(-q)
        if subtract:
            out = out * np.exp(0.5 * q0)
        return out

    # real direction r in [0, 2n): coordinate r // 2, real part if even else imaginary
    def unit(r):
        e = np.zeros(n, dtype=complex)
        e[r // 2] = 1.0 if r % 2 == 0 else 1.0j
        return e

    w2 = np.outer(_D2, _D2).ravel() / h**4
    total = 0.0 + 0.0j
    for i in range(n):
        for j in range(n):
            if a[i] == 0 or b[j] == 0:
                continue
            acc = 0.0 + 0.0j
            for ri in (2 * i, 2 * i + 1):
                for rj in (2 * j, 2 * j + 1):
                    pts = (_OFF[:, None, None] * h * unit(ri) + _OFF[None, :, None] * h * unit(rj)).reshape(-1, n)
                    acc += np.dot(w2, f(pts))
            total += a[i] * b[j] * acc / 16.0
    return complex(total)


def _coherent_vector(beta: complex, cutoff: int, tol: float) -> np.ndarray:
    k = np.arange(cutoff + 1)
    if beta == 0:
        vec = np.zeros(cutoff + 1, dtype=complex)
        vec[0] = 1.0
        return vec
    logmag = -0.5 * abs(beta) ** 2 + k * math.log(abs(beta)) - 0.5 * gammaln(k + 1)
    vec = np.exp(logmag) * np.exp(1j * k * np.angle(beta))
    tail = 1.0 - float(np.sum(np.abs(vec) ** 2))
    if tail > tol:
        raise OracleError(f"Fock cutoff {cutoff} leaves tail mass {tail:.3e} for |beta|^2 = {abs(beta)**2:.3g}")
    return vec


def fock_coherent_cat_energy(
    n_avg: float,
    plus: ModeFunction,
    minus: ModeFunction,
    kernel: DiagonalKernel,
    cutoff: int | None = None,
    tail_tol: float = 1e-10,
) -> float:
    """<H> / (n E0) for |alpha, plus> + |alpha, minus> with |alpha|^2 = n_avg.

    The two branch modes are orthonormalized into e1, e2; each branch is a
    product of single-mode coherent states in e1, e2, and H = sum h_ab a_a^+ a_b
    with h_ab = e_a* <> K <> e_b.  Returns the energy normalized by the branch
    energy n E0 with E0 = plus* <> K <> plus.
    """
    grid = plus.grid
    alpha = math.sqrt(n_avg)
    e1 = plus.values
    ov = diamond(plus, None, minus)
    resid = minus.values - ov * e1
    r = math.sqrt(max(float(np.dot(grid.measure, np.abs(resid) ** 2)), 0.0))
    if cutoff is None:
        cutoff = int(math.ceil(n_avg + 12.0 * math.sqrt(n_avg) + 30))
    if r < 1e-12:
        basis = [e1]
        betas_p = [alpha]
        betas_m = [alpha * ov]
    else:
        e2 = resid / r
        basis = [e1, e2]
        betas_p = [alpha, 0.0]
        betas_m = [alpha * ov, alpha * r]
    dim = len(basis)
    h = np.array(
        [[np.dot(grid.measure, np.conj(basis[i]) * kernel.diag * basis[j]) for j in range(dim)] for i in range(dim)]
    )
    vp = [_coherent_vector(bp, cutoff, tail_tol) for bp in betas_p]
    vm = [_coherent_vector(bm, cutoff, tail_tol) for bm in betas_m]
    if dim == 1:
        psi = vp[0] + vm[0]
    else:
        psi = np.outer(vp[0], vp[1]) + np.outer(vm[0], vm[1])
    ladder = np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1)  # annihilation operator

    def lower(state, mode):
        return np.tensordot(ladder, state, axes=(1, mode)) if dim == 1 else np.moveaxis(
            np.tensordot(ladder, state, axes=(1, mode)), 0, mode
        )

    lowered = [lower(psi, m) for m in range(dim)]
    energy = sum(h[i, j] * np.vdot(lowered[i], lowered[j]) for i in range(dim) for j in range(dim))
    norm = np.vdot(psi, psi).real
    e0 = diamond(plus, kernel, plus).real
    return float((energy / norm).real / (n_avg * e0))


def fiducial_energy_quad(w0: float, m: float = 0.0) -> float:
    """int |Theta(k)|^2 sqrt(k^2 + m^2) dk / 2 pi for the Gaussian mode, adaptive quadrature."""
    pref = w0 * math.sqrt(math.pi) / math.pi  # two half-lines / (2 pi)
    val, _ = integrate.quad(
        lambda k: math.exp(-((k * w0) ** 2) / 4.0) * math.hypot(k, m), 0.0, math.inf, epsabs=0, epsrel=1e-13
    )
    return pref * val


def dense_scan_min(f, lo: float, hi: float, step: float):
    """Grid minimizer of a vectorized ``f`` with spacing ``step``; returns (x, f(x))."""
    xs = np.arange(lo, hi + 0.5 * step, step)
    vals = f(xs)
    i = int(np.argmin(vals))
    return float(xs[i]), float(vals[i])
