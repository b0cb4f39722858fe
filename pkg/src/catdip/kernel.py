"""Wave-vector grids, mode functions, diagonal kernels and the diamond contraction.

All contractions use the one-dimensional measure ``dk / (2 pi)`` so that the
identity kernel ``2 pi delta(k - k')`` acts as the identity.  On a grid with
quadrature weights ``w_i`` this reads

    u* <> K <> v = sum_i w_i conj(u_i) K_i v_i / (2 pi).

Every object here is immutable after construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError, SymmetryError, TruncationError

TWO_PI = 2.0 * math.pi

QUADRATURE_RULES = ("trapezoid", "gauss-legendre")
DEFAULT_K_SPAN = 24.0  # in units of 1/w0
DEFAULT_POINTS = 4097
GL_ORDER = 16


def _frozen(a, dtype=None) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class WaveGrid:
    """Symmetric one-dimensional wave-number grid with positive quadrature weights."""

    nodes: np.ndarray
    weights: np.ndarray
    rule: str = "trapezoid"
    half_width: float | None = None  # integration domain is [-half_width, half_width]; defaults to the outer nodes
    measure: np.ndarray = field(init=False, repr=False)
    sqrt_measure: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        nodes = _frozen(self.nodes, float)
        weights = _frozen(self.weights, float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("a wave grid needs at least two nodes")
        if weights.shape != nodes.shape:
            raise ValueError("one quadrature weight per node is required")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")
        scale = max(abs(nodes[0]), abs(nodes[-1]))
        if np.max(np.abs(nodes + nodes[::-1])) > 1e-12 * scale:
            raise ValueError("grid must be symmetric about k = 0")
        if self.half_width is None:
            object.__setattr__(self, "half_width", float(nodes[-1]))
        if self.half_width < nodes[-1]:
            raise ValueError("nodes lie outside the integration domain")
        span = 2.0 * self.half_width
        if abs(weights.sum() - span) > 1e-12 * span:
            raise ValueError("weights do not integrate 1 to the width of the domain")
        object.__setattr__(self, "measure", _frozen(weights / TWO_PI))
        object.__setattr__(self, "sqrt_measure", _frozen(np.sqrt(weights / TWO_PI)))

    @property
    def k_min(self) -> float:
        return float(self.nodes[0])

    @property
    def k_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def n_points(self) -> int:
        return int(self.nodes.size)

    def __len__(self) -> int:
        return self.n_points

    def integrate(self, values) -> complex:
        """Plain quadrature ``sum_i w_i f_i`` (no 2 pi)."""
        return np.dot(self.weights, values)

    def refined(self) -> "WaveGrid":
        """Grid over the same range with the node spacing halved."""
        if self.rule == "trapezoid":
            return make_grid(self.half_width, 2 * self.n_points - 1, self.rule)
        return make_grid(self.half_width, 2 * self.n_points, self.rule)

    def check_same(self, other: "WaveGrid") -> None:
        if other is self:
            return
        if (
            other.n_points != self.n_points
            or other.rule != self.rule
            or other.half_width != self.half_width
            or not np.array_equal(other.nodes, self.nodes)
            or not np.array_equal(other.weights, self.weights)
        ):
            raise GridMismatchError(
                f"grid mismatch: {self.n_points} nodes on [{self.k_min}, {self.k_max}] "
                f"vs {other.n_points} nodes on [{other.k_min}, {other.k_max}]"
            )


def trapezoid_grid(k_max: float, n_points: int) -> WaveGrid:
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    if not k_max > 0:
        raise ValueError("k_max must be positive")
    nodes = np.linspace(-k_max, k_max, n_points)
    # exact mirror so that symmetric modes are representable bit for bit
    nodes = 0.5 * (nodes - nodes[::-1])
    dk = 2.0 * k_max / (n_points - 1)
    weights = np.full(n_points, dk)
    weights[0] = weights[-1] = 0.5 * dk
    return WaveGrid(nodes, weights, "trapezoid")


def gauss_legendre_grid(k_max: float, n_points: int, order: int = GL_ORDER) -> WaveGrid:
    """Composite Gauss-Legendre rule with a panel boundary at k = 0.

    ``n_points`` is rounded to the nearest multiple of ``2 * order``.  Keeping
    k = 0 on a panel edge makes kernels with a kink there (``|k|``) converge
    at the full order of the rule.
    """
    if not k_max > 0:
        raise ValueError("k_max must be positive")
    panels = max(1, int(round(n_points / (2 * order))))
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, k_max, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    pos = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wpos = (half[:, None] * w[None, :]).ravel()
    order_idx = np.argsort(pos)
    pos, wpos = pos[order_idx], wpos[order_idx]
    nodes = np.concatenate([-pos[::-1], pos])
    weights = np.concatenate([wpos[::-1], wpos])
    # the rule is exact for constants up to roundoff; pin the sum to the domain width
    weights *= 2.0 * k_max / weights.sum()
    return WaveGrid(nodes, weights, "gauss-legendre", half_width=k_max)


def make_grid(k_max: float, n_points: int, rule: str = "trapezoid") -> WaveGrid:
    if rule == "trapezoid":
        return trapezoid_grid(k_max, n_points)
    if rule == "gauss-legendre":
        return gauss_legendre_grid(k_max, n_points)
    raise ValueError(f"unknown quadrature rule {rule!r}; expected one of {QUADRATURE_RULES}")


def default_grid(w0: float = 1.0, n_points: int = DEFAULT_POINTS, rule: str = "trapezoid") -> WaveGrid:
    """Grid on [-24/w0, 24/w0]; the Gaussian mode is below 1e-30 of its peak at the edges."""
    if not w0 > 0:
        raise ValueError("w0 must be positive")
    return make_grid(DEFAULT_K_SPAN / w0, n_points, rule)


@dataclass(frozen=True, eq=False)
class ModeFunction:
    """Normalized complex mode samples on a grid (Theta*<>Theta = 1)."""

    grid: WaveGrid
    values: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        vals = _frozen(self.values, complex)
        object.__setattr__(self, "values", vals)
        if vals.shape != self.grid.nodes.shape:
            raise ValueError("mode values must match the grid")
        norm = float(np.dot(self.grid.measure, np.abs(vals) ** 2))
        if abs(norm - 1.0) > 1e-10:
            raise TruncationError(f"mode is not normalized on this grid: Theta*<>Theta = {norm!r}")
        if self.symmetric and not is_even(vals):
            raise SymmetryError("mode flagged symmetric but values(-k) != values(k)")

    @classmethod
    def from_values(cls, grid: WaveGrid, values, symmetric: bool = False) -> "ModeFunction":
        """Normalize arbitrary samples on ``grid``."""
        vals = np.asarray(values, dtype=complex)
        norm = math.sqrt(float(np.dot(grid.measure, np.abs(vals) ** 2)))
        if norm == 0.0:
            raise ValueError("cannot normalize a zero mode")
        return cls(grid, vals / norm, symmetric)

    def conj(self) -> "ModeFunction":
        return ModeFunction(self.grid, np.conj(self.values), self.symmetric)

    def apply(self, kernel: "DiagonalKernel") -> np.ndarray:
        """Samples of ``K <> Theta``; a diagonal kernel acts pointwise."""
        self.grid.check_same(kernel.grid)
        return kernel.diag * self.values


def is_even(values, tol: float = 1e-12) -> bool:
    values = np.asarray(values)
    scale = max(float(np.max(np.abs(values))), 1.0)
    return bool(np.max(np.abs(values - values[::-1])) <= tol * scale)


@dataclass(frozen=True, eq=False)
class DiagonalKernel:
    """Kernel K(k, k') = diag(k) 2 pi delta(k - k').

    ``kind`` is one of ``"identity"``, ``"phase"``, ``"energy"`` or ``"generic"``;
    phase kernels are checked to be unimodular and energy kernels to be real and
    nonnegative.
    """

    grid: WaveGrid
    diag: np.ndarray
    kind: str = "generic"

    def __post_init__(self):
        d = _frozen(self.diag, complex)
        object.__setattr__(self, "diag", d)
        if d.shape != self.grid.nodes.shape:
            raise ValueError("kernel diagonal must match the grid")
        if self.kind == "phase" and np.max(np.abs(np.abs(d) - 1.0)) > 1e-12:
            raise ValueError("phase kernel must be unimodular")
        if self.kind == "energy" and (np.any(d.real < 0) or np.any(d.imag != 0)):
            raise ValueError("energy kernel must be real and nonnegative")

    def __mul__(self, other: "DiagonalKernel") -> "DiagonalKernel":
        self.grid.check_same(other.grid)
        kind = self.kind if self.kind == other.kind and self.kind in ("phase", "identity") else "generic"
        return DiagonalKernel(self.grid, self.diag * other.diag, kind)

    def __pow__(self, p: int) -> "DiagonalKernel":
        return DiagonalKernel(self.grid, self.diag ** p, self.kind if self.kind != "energy" else "generic")

    def conj(self) -> "DiagonalKernel":
        return DiagonalKernel(self.grid, np.conj(self.diag), self.kind)

    # diagonal kernels: the adjoint is the pointwise conjugate
    adjoint = conj


def diamond(u: ModeFunction, kernel: DiagonalKernel | None, v: ModeFunction) -> complex:
    """Contraction ``u* <> K <> v``; ``kernel=None`` means the identity."""
    u.grid.check_same(v.grid)
    vals = v.values
    if kernel is not None:
        u.grid.check_same(kernel.grid)
        vals = kernel.diag * vals
    return complex(np.dot(u.grid.measure, np.conj(u.values) * vals))


def identity_kernel(grid: WaveGrid) -> DiagonalKernel:
    return DiagonalKernel(grid, np.ones(grid.n_points), "identity")


def phase_kernel(z: float, grid: WaveGrid) -> DiagonalKernel:
    """Translation phase exp(i z k)."""
    return DiagonalKernel(grid, np.exp(1j * z * grid.nodes), "phase")


def energy_kernel(m: float, grid: WaveGrid) -> DiagonalKernel:
    """Free dispersion omega(k) = sqrt(k^2 + m^2) with hbar = c = 1."""
    if m < 0:
        raise ValueError("field mass must be nonnegative")
    return DiagonalKernel(grid, np.hypot(grid.nodes, m), "energy")


def flat_kernel(grid: WaveGrid, value: float = 1.0) -> DiagonalKernel:
    """Constant positive kernel; the limit in which the closed-form curve is exact."""
    if not value > 0:
        raise ValueError("flat kernel value must be positive")
    return DiagonalKernel(grid, np.full(grid.n_points, float(value)), "energy")


def gaussian_mode(w0: float, grid: WaveGrid) -> ModeFunction:
    """Real even Gaussian spectrum with Theta*<>Phi(z)^2<>Theta = exp(-4 z^2 / w0^2).

    |Theta|^2 = w0 sqrt(pi) exp(-k^2 w0^2 / 4), i.e. Theta is proportional to
    exp(-k^2 w0^2 / 8).  Raises TruncationError when the grid clips the mode or
    fails to normalize it to 1e-10.
    """
    if not w0 > 0:
        raise ValueError("w0 must be positive")
    k = grid.nodes
    amp = math.sqrt(w0 * math.sqrt(math.pi))
    vals = amp * np.exp(-(k * w0) ** 2 / 8.0)
    edge = max(vals[0], vals[-1]) / amp
    if edge >= 1e-8:
        raise TruncationError(
            f"grid [{grid.k_min}, {grid.k_max}] clips the w0={w0} mode: edge/peak = {edge:.3e}"
        )
    norm = float(np.dot(grid.measure, vals**2))
    if abs(norm - 1.0) > 1e-10:
        raise TruncationError(f"grid too coarse for w0={w0}: Theta*<>Theta = {norm!r}")
    return ModeFunction(grid, vals, symmetric=True)


def phase_overlaps(theta: ModeFunction, zs, kernel: DiagonalKernel | None = None) -> np.ndarray:
    """Theta* <> Phi(z)^2 <> K <> Theta for every z in ``zs``."""
    grid = theta.grid
    dens = grid.measure * np.abs(theta.values) ** 2
    if kernel is not None:
        grid.check_same(kernel.grid)
        dens = dens * kernel.diag
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    out = np.empty(zs.shape, dtype=complex)
    # chunk to bound the size of the phase matrix
    step = max(1, 2_000_000 // grid.n_points)
    for i in range(0, zs.size, step):
        out[i : i + step] = np.exp(2j * np.outer(zs[i : i + step], grid.nodes)) @ dens
    return out
