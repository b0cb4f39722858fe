"""Diagonal-plus-low-rank matrices ``diag(d) + L K R^H``.

Products, inverses (Woodbury) and log-determinants (matrix determinant lemma)
cost O(n r^2 + r^3), so Gaussian functionals on fine grids never form an
n-by-n matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError


@dataclass(frozen=True, eq=False)
class DiagLowRank:
    diag: np.ndarray
    left: np.ndarray
    core: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=complex)
        n = d.shape[0]
        left = np.asarray(self.left, dtype=complex).reshape(n, -1)
        right = np.asarray(self.right, dtype=complex).reshape(n, -1)
        r = left.shape[1]
        core = np.asarray(self.core, dtype=complex).reshape(r, r)
        if right.shape[1] != r:
            raise ValueError("left and right factors need the same rank")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "core", core)

    @classmethod
    def diagonal(cls, d) -> "DiagLowRank":
        d = np.asarray(d, dtype=complex)
        n = d.shape[0]
        return cls(d, np.zeros((n, 0)), np.zeros((0, 0)), np.zeros((n, 0)))

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    @property
    def rank(self) -> int:
        return self.left.shape[1]

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + self.left @ self.core @ self.right.conj().T

    def shift(self, s: complex) -> "DiagLowRank":
        return DiagLowRank(self.diag + s, self.left, self.core, self.right)

    def scale(self, s: complex) -> "DiagLowRank":
        return DiagLowRank(s * self.diag, self.left, s * self.core, self.right)

    def adjoint(self) -> "DiagLowRank":
        return DiagLowRank(self.diag.conj(), self.right, self.core.conj().T, self.left)

    def __add__(self, other: "DiagLowRank") -> "DiagLowRank":
        r1, r2 = self.rank, other.rank
        core = np.zeros((r1 + r2, r1 + r2), dtype=complex)
        core[:r1, :r1] = self.core
        core[r1:, r1:] = other.core
        return DiagLowRank(
            self.diag + other.diag,
            np.hstack([self.left, other.left]),
            core,
            np.hstack([self.right, other.right]),
        )

    def __sub__(self, other: "DiagLowRank") -> "DiagLowRank":
        return self + other.scale(-1.0)

    def __matmul__(self, other: "DiagLowRank") -> "DiagLowRank":
        # (D1 + L1 K1 R1^H)(D2 + L2 K2 R2^H)
        #   = D1 D2 + [D1 L2 | L1] [[K2, 0], [K1 R1^H L2 K2, K1]] [R2 | D2^H R1]^H
        d1, d2 = self.diag, other.diag
        r1, r2 = self.rank, other.rank
        core = np.zeros((r1 + r2, r1 + r2), dtype=complex)
        core[:r2, :r2] = other.core
        core[r2:, :r2] = self.core @ (self.right.conj().T @ other.left) @ other.core
        core[r2:, r2:] = self.core
        left = np.hstack([d1[:, None] * other.left, self.left])
        right = np.hstack([other.right, d2.conj()[:, None] * self.right])
        return DiagLowRank(d1 * d2, left, core, right)

    def _check_diag(self):
        if np.any(self.diag == 0):
            raise DivergenceError("diagonal part is singular")

    def inverse(self) -> "DiagLowRank":
        """Woodbury: (D + L K R^H)^-1 = D^-1 - D^-1 L K (I + R^H D^-1 L K)^-1 R^H D^-1."""
        self._check_diag()
        dinv = 1.0 / self.diag
        if self.rank == 0:
            return DiagLowRank.diagonal(dinv)
        dl = dinv[:, None] * self.left
        small = np.eye(self.rank) + self.right.conj().T @ dl @ self.core
        core = -self.core @ np.linalg.solve(small, np.eye(self.rank))
        return DiagLowRank(dinv, dl, core, dinv.conj()[:, None] * self.right)

    def logdet(self) -> complex:
        """log det via the determinant lemma; the imaginary part is a phase."""
        self._check_diag()
        out = np.sum(np.log(self.diag))
        if self.rank:
            small = np.eye(self.rank) + self.core @ self.right.conj().T @ (self.left / self.diag[:, None])
            sign, logabs = np.linalg.slogdet(small)
            out = out + logabs + np.log(sign)
        return complex(out)

    def hermitian_part_is_pd(self) -> bool:
        """True when (X + X^H)/2 is positive definite."""
        dr = self.diag.real
        if np.any(dr <= 0):
            if self.n > 256:
                return False
            x = self.dense()
            return bool(np.all(np.linalg.eigvalsh(0.5 * (x + x.conj().T)) > 0))
        if self.rank == 0:
            return True
        r = self.rank
        left = np.hstack([self.left, self.right])
        right = np.hstack([self.right, self.left])
        core = np.zeros((2 * r, 2 * r), dtype=complex)
        core[:r, :r] = 0.5 * self.core
        core[r:, r:] = 0.5 * self.core.conj().T
        # nonzero spectrum of D^-1/2 W J W'^H D^-1/2 equals that of J W'^H D^-1 W
        small = core @ right.conj().T @ (left / dr[:, None])
        lam = np.linalg.eigvals(small)
        return bool(np.all(1.0 + lam.real > 0))

    def compress(self, rtol: float = 1e-12) -> "DiagLowRank":
        """Re-factor the low-rank part as L diag(s) R^H with orthonormal L, R.

        Singular values below ``rtol`` times the larger of the leading singular
        value and the diagonal scale are dropped.
        """
        if self.rank == 0:
            return self
        ql, rl = np.linalg.qr(self.left)
        qr_, rr = np.linalg.qr(self.right)
        u, s, vh = np.linalg.svd(rl @ self.core @ rr.conj().T)
        scale = max(s[0] if s.size else 0.0, float(np.max(np.abs(self.diag))), np.finfo(float).tiny)
        keep = s > rtol * scale
        return DiagLowRank(
            self.diag,
            ql @ u[:, keep],
            np.diag(s[keep]),
            qr_ @ vh.conj().T[:, keep],
        )

    def trace_weighted(self, a) -> complex:
        """Tr[diag(a) X]."""
        a = np.asarray(a)
        out = np.dot(a, self.diag)
        if self.rank:
            out = out + np.trace(self.core @ (self.right.conj().T @ (a[:, None] * self.left)))
        return complex(out)
