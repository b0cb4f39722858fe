import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catdip.errors import DivergenceError
from catdip.lowrank import DiagLowRank


def random_dlr(rng, n, r, shift=2.0):
    d = shift + rng.uniform(0, 1, n) + 1j * rng.normal(size=n)
    left = rng.normal(size=(n, r)) + 1j * rng.normal(size=(n, r))
    right = rng.normal(size=(n, r)) + 1j * rng.normal(size=(n, r))
    core = 0.1 * (rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r)))
    return DiagLowRank(d, left, core, right)


@given(st.integers(0, 2**31 - 1), st.integers(1, 12), st.integers(0, 3))
def test_algebra_matches_dense(seed, n, r):
    rng = np.random.default_rng(seed)
    a, b = random_dlr(rng, n, r), random_dlr(rng, n, r)
    assert np.allclose((a + b).dense(), a.dense() + b.dense())
    assert np.allclose((a - b).dense(), a.dense() - b.dense())
    assert np.allclose((a @ b).dense(), a.dense() @ b.dense())
    assert np.allclose(a.adjoint().dense(), a.dense().conj().T)
    assert np.allclose(a.inverse().dense(), np.linalg.inv(a.dense()))
    assert np.exp(a.logdet()) == pytest.approx(np.linalg.det(a.dense()), rel=1e-8)
    w = rng.normal(size=n)
    assert a.trace_weighted(w) == pytest.approx(np.trace(np.diag(w) @ a.dense()))


def test_compress_drops_null_directions(rng):
    n = 8
    u = rng.normal(size=(n, 1))
    m = DiagLowRank(np.ones(n), np.hstack([u, 2 * u]), np.eye(2), np.hstack([u, u]))
    c = m.compress()
    assert c.rank == 1
    assert np.allclose(c.dense(), m.dense())


@pytest.mark.parametrize(
    "diag, sign, expect",
    [(1.0, 1.0, True), (1.0, -0.5, True), (1.0, -2.0, False), (-0.1, 1.0, False), (0.0, 5.0, False)],
)
def test_hermitian_part_positivity(diag, sign, expect):
    n = 5
    v = np.ones((n, 1)) / np.sqrt(n)
    m = DiagLowRank(np.full(n, diag), v, [[sign]], v)
    assert m.hermitian_part_is_pd() is expect
    eig = np.linalg.eigvalsh(0.5 * (m.dense() + m.dense().conj().T))
    assert bool(np.all(eig > 0)) is expect


def test_singular_diagonal_raises():
    m = DiagLowRank.diagonal(np.array([1.0, 0.0]))
    with pytest.raises(DivergenceError):
        m.inverse()
    with pytest.raises(DivergenceError):
        m.logdet()
