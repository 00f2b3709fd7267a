import numpy as np
import pytest

from harmhull import lie
from harmhull.core import ConsistencyError, HarmHullError


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_identity_residual(m):
    n = 2 * m + 2
    assert lie.orthogonality_residual(np.eye(n)) == 0
    assert all(v == 0 for v in lie.block_residuals(np.eye(n)).values())
    g = np.eye(n)
    g[0, 1] += 1e-3
    assert lie.orthogonality_residual(g) >= 1e-3


def test_size_errors():
    with pytest.raises(ValueError):
        lie.orthogonality_residual(np.eye(4))
    with pytest.raises(ValueError):
        lie.orthogonality_residual(np.eye(7))
    with pytest.raises(ValueError):
        lie.orthogonality_residual(np.ones((6, 8)))


@pytest.mark.parametrize("m", [2, 3])
def test_algebra_dimensions(m):
    assert len(lie.algebra_basis(m)) == (m + 1) * (2 * m + 1)
    assert len(lie.p_algebra_basis(m)) == 2 * m * m + m + 1
    assert len(lie.q_algebra_basis(m)) == (3 * m + 2) * (m + 1) // 2
    Jm = lie.J(m)
    for X in lie.algebra_basis(m):
        assert np.array_equal(X.T @ Jm + Jm @ X, np.zeros_like(X))


def test_p_element_trivial():
    assert np.allclose(lie.p_element(1.0, np.zeros(2), np.zeros(2), np.eye(4)), np.eye(6))
    with pytest.raises(ValueError):
        lie.p_element(0.0, np.zeros(2), np.zeros(2), np.eye(4))


@pytest.mark.parametrize("m", [2, 3])
def test_sample_P(m, rng):
    for _ in range(100):
        g = lie.sample_P(m, rng)
        assert lie.orthogonality_residual(g) <= 1e-10
        assert np.all(g[1:, 0] == 0) and g[0, 0] != 0
        assert lie.pqp_member(g).member


@pytest.mark.parametrize("m", [2, 3])
def test_sample_Q(m, rng):
    k = m + 1
    for _ in range(100):
        g = lie.sample_Q(m, rng)
        assert np.all(g[k:, :k] == 0)
        assert lie.orthogonality_residual(g) <= 1e-10
    assert np.allclose(lie.q_element(np.eye(3), np.zeros((3, 3))), np.eye(6))
    with pytest.raises(ValueError):
        lie.q_element(np.eye(3), np.ones((3, 3)))


def test_group_inverse(rng):
    for m in (2, 3):
        for g in (lie.sample_P(m, rng), lie.sample_Q(m, rng), lie.random_group_element(m, rng)):
            assert np.max(np.abs(lie.inverse(g) @ g - np.eye(2 * m + 2))) <= 1e-10


def test_pqp_member_examples():
    assert lie.pqp_member(np.eye(6)).member
    assert lie.pqp_member(lie.affine_chart([1, 0], [0, 1])).member
    assert not lie.pqp_member(lie.affine_chart([1, 0], [1, 0])).member
    bad = np.eye(6)
    bad[0, 0] = 2
    with pytest.raises(HarmHullError):
        lie.pqp_member(bad)


def test_affine_chart(rng):
    assert np.array_equal(lie.affine_chart(np.zeros(2), np.zeros(2)), np.eye(6))
    for m in (2, 3):
        for _ in range(100):
            x, y, xp, yp = (crandn(rng, m) for _ in range(4))
            prod = lie.affine_chart(x, y) @ lie.affine_chart(xp, yp)
            assert np.max(np.abs(prod - lie.affine_chart(x + xp, y + yp))) <= 1e-12
            assert lie.orthogonality_residual(lie.affine_chart(x, y)) <= 1e-12
            assert lie.pqp_member(lie.affine_chart(x, y)).c11 == -(x @ y)


def test_null_related_examples():
    z = np.zeros(2)
    assert lie.null_related([1, 0], [0, 1], [1, 0], [0, 1])
    assert lie.null_related([1, 0], [0, 1], z, z)
    assert not lie.null_related([1, 0], [1, 0], z, z)


def test_null_related_symmetric(rng):
    for _ in range(100):
        x, y, xp, yp = (crandn(rng, 3) for _ in range(4))
        assert lie.null_related(x, y, xp, yp) == lie.null_related(xp, yp, x, y)


def test_null_related_consistency_guard(monkeypatch):
    monkeypatch.setattr(lie, "affine_chart", lambda x, y, m=None: np.eye(6))
    with pytest.raises(ConsistencyError):
        lie.null_related([1, 0], [1, 0], [0, 0], [0, 0])


def test_generic_elements_avoid_pqp(rng):
    hits = sum(abs(lie.random_group_element(2, rng)[3, 0]) > 1e-6 for _ in range(500))
    assert hits >= 495


@pytest.mark.parametrize("m,expected", [(2, 14), (3, 27), (4, 44)])
def test_rank(m, expected, rng):
    r = lie.pqp_rank_estimate(m, 5, rng)
    assert r.rank == expected == r.expected
    assert r.observed == (expected,)


def test_rank_sanity_p_only(rng):
    assert lie.p_differential_rank(lie.sample_P(2, rng)) == 11


def test_rank_argument_checks():
    with pytest.raises(ValueError):
        lie.pqp_rank_estimate(5, 10)
    with pytest.raises(ValueError):
        lie.pqp_rank_estimate(2, 3)
    with pytest.raises(ValueError):
        lie.sample_P(1, np.random.default_rng())
