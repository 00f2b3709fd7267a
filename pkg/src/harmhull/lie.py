"""SO(2m+2, C), its parabolic subgroups P and Q, and the PQP membership test.

The group preserves the symmetric form ``J = [[0, I], [I, 0]]`` in
``(m+1)``-blocks, so ``g^t J g = J`` and ``g^{-1} = J g^t J``.  ``P`` fixes
the null line of the first basis vector and ``Q`` is block upper
triangular.  A group element lies in ``PQP`` exactly when its ``C`` block
(lower left) has vanishing top-left entry, which is at global position
``(m + 1, 0)``.

Inside P the coordinates are grouped in blocks of sizes ``(1, m, 1, m)``.
"""
from __future__ import annotations

from collections import Counter
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .core import DEFAULT_TOL, ConsistencyError, HarmHullError, Tolerances, cvec

RANK_THRESHOLD = 1e-8
MAX_Q_CONDITION = 1e6


def J(m: int) -> np.ndarray:
    k = m + 1
    out = np.zeros((2 * k, 2 * k))
    out[:k, k:] = np.eye(k)
    out[k:, :k] = np.eye(k)
    return out


def _check_size(g) -> int:
    g = np.asarray(g)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2 or g.shape[0] < 6:
        raise ValueError(f"expected a square matrix of even size >= 6, got shape {g.shape}")
    return g.shape[0] // 2 - 1


def orthogonality_residual(g) -> float:
    """Max-norm of ``g^t J g - J``."""
    m = _check_size(g)
    g = np.asarray(g, dtype=complex)
    return float(np.max(np.abs(g.T @ J(m) @ g - J(m))))


def block_residuals(g) -> dict:
    """Residuals of ``A^tC + C^tA = 0``, ``A^tD + C^tB = I`` and ``B^tD + D^tB = 0``."""
    m = _check_size(g)
    k = m + 1
    g = np.asarray(g, dtype=complex)
    A, B, C, D = g[:k, :k], g[:k, k:], g[k:, :k], g[k:, k:]
    mx = lambda M: float(np.max(np.abs(M)))  # noqa: E731
    return {
        "AtC+CtA": mx(A.T @ C + C.T @ A),
        "AtD+CtB-I": mx(A.T @ D + C.T @ B - np.eye(k)),
        "BtD+DtB": mx(B.T @ D + D.T @ B),
    }


def inverse(g) -> np.ndarray:
    """``J g^t J``, the inverse of a group element."""
    m = _check_size(g)
    return J(m) @ np.asarray(g).T @ J(m)


# -- Lie algebras --------------------------------------------------------------

def _rand_c(rng, shape) -> np.ndarray:
    return rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape)


def _skew(rng, k) -> np.ndarray:
    S = _rand_c(rng, (k, k))
    return np.triu(S, 1) - np.triu(S, 1).T


def lie_algebra_element(k: int, rng) -> np.ndarray:
    """Random ``X`` with ``X^t J + J X = 0`` for the form in ``k``-blocks: ``[[a, b], [c, -a^t]]``."""
    a = _rand_c(rng, (k, k))
    return np.block([[a, _skew(rng, k)], [_skew(rng, k), -a.T]])


def _exp_unit(X) -> np.ndarray:
    # keep ||X|| ~ 1 so the exponential stays well conditioned
    return expm(X / max(np.linalg.norm(X, 2), 1e-300))


def random_group_element(m: int, rng) -> np.ndarray:
    """Exponential of a random Lie algebra element of norm 1."""
    return _exp_unit(lie_algebra_element(m + 1, rng))


def so_element(m: int, rng) -> np.ndarray:
    """A random element of SO(2m, C) for the form ``[[0, I_m], [I_m, 0]]``."""
    return _exp_unit(lie_algebra_element(m, rng))


def algebra_basis(m: int) -> list[np.ndarray]:
    """Basis of the Lie algebra of SO(2m+2, C) in the ``J`` convention."""
    k = m + 1
    n = 2 * k
    basis = []
    for i in range(k):
        for j in range(k):
            X = np.zeros((n, n))
            X[i, j] = 1.0
            X[k + j, k + i] = -1.0
            basis.append(X)
    for off_r, off_c in ((0, k), (k, 0)):
        for i in range(k):
            for j in range(i + 1, k):
                X = np.zeros((n, n))
                X[off_r + i, off_c + j] = 1.0
                X[off_r + j, off_c + i] = -1.0
                basis.append(X)
    return basis


def p_algebra_basis(m: int) -> list[np.ndarray]:
    """Basis elements whose first column is a multiple of the first basis vector."""
    return [X for X in algebra_basis(m) if not np.any(X[1:, 0])]


def q_algebra_basis(m: int) -> list[np.ndarray]:
    """Basis elements that are block upper triangular."""
    k = m + 1
    return [X for X in algebra_basis(m) if not np.any(X[k:, :k])]


# -- parabolic subgroups ---------------------------------------------------------

def p_element(lam: complex, p, q, so_block) -> np.ndarray:
    """Element of P from its Levi part ``(lam, so_block)`` and unipotent part ``(p, q)``.

    Blocks of sizes ``(1, m, 1, m)``; ``so_block`` is a ``2m x 2m`` element of
    SO(2m, C) split into ``[[A, B], [C, D]]``.
    """
    p = cvec(p)
    q = cvec(q, p.size)
    m = p.size
    S = np.asarray(so_block, dtype=complex)
    if S.shape != (2 * m, 2 * m):
        raise ValueError("so_block must be 2m x 2m")
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    n = 2 * m + 2
    i0, i1, i2, i3 = 0, slice(1, m + 1), m + 1, slice(m + 2, n)
    levi = np.zeros((n, n), dtype=complex)
    levi[i0, i0] = lam
    levi[i2, i2] = 1.0 / lam
    levi[i1, i1] = S[:m, :m]
    levi[i1, i3] = S[:m, m:]
    levi[i3, i1] = S[m:, :m]
    levi[i3, i3] = S[m:, m:]
    uni = np.eye(n, dtype=complex)
    uni[i0, i1] = -q
    uni[i0, i2] = -(p @ q)
    uni[i0, i3] = -p
    uni[i1, i2] = p
    uni[i3, i2] = q
    return levi @ uni


def sample_P(m: int, rng) -> np.ndarray:
    """Random element of P; ``|lambda|`` is drawn from [1/2, 2]."""
    if m < 2:
        raise ValueError("m must be at least 2")
    lam = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
    return p_element(lam, _rand_c(rng, m), _rand_c(rng, m), so_element(m, rng))


def q_element(A, E) -> np.ndarray:
    """``[[A, A E], [0, A^{-t}]]`` with ``E`` skew."""
    A = np.asarray(A, dtype=complex)
    E = np.asarray(E, dtype=complex)
    if np.max(np.abs(E + E.T), initial=0.0) > 0:
        raise ValueError("E must be skew")
    k = A.shape[0]
    return np.block([[A, A @ E], [np.zeros((k, k)), np.linalg.inv(A).T]])


def sample_Q(m: int, rng) -> np.ndarray:
    """Random element of Q; ``A`` is redrawn while its condition number exceeds 1e6."""
    if m < 2:
        raise ValueError("m must be at least 2")
    k = m + 1
    while True:
        A = _rand_c(rng, (k, k))
        if np.linalg.cond(A) <= MAX_Q_CONDITION:
            break
    return q_element(A, _skew(rng, k))


# -- PQP ---------------------------------------------------------------------------

class PQPVerdict(NamedTuple):
    c11: complex
    member: bool


def pqp_member(g, tol: Tolerances = DEFAULT_TOL) -> PQPVerdict:
    """Read ``C_11`` (global entry ``(m + 1, 0)``) and compare with ``eq_tol * max|g|``."""
    m = _check_size(g)
    g = np.asarray(g, dtype=complex)
    res = orthogonality_residual(g)
    if res > 1e-8:
        raise HarmHullError(f"not in SO(2m+2, C): orthogonality residual {res:.3g}")
    c11 = complex(g[m + 1, 0])
    return PQPVerdict(c11, bool(abs(c11) <= tol.eq_tol * np.max(np.abs(g))))


def affine_chart(x, y, m: int | None = None) -> np.ndarray:
    """The chart matrix ``[[1,0,0,0],[x,I,0,0],[-x^t y,-y^t,1,-x^t],[y,0,0,I]]``.

    Multiplication of chart matrices adds coordinates.
    """
    x = cvec(x, m)
    y = cvec(y, x.size)
    m = x.size
    if m < 2:
        raise ValueError("m must be at least 2")
    n = 2 * m + 2
    g = np.eye(n, dtype=complex)
    i0, i1, i2, i3 = 0, slice(1, m + 1), m + 1, slice(m + 2, n)
    g[i1, i0] = x
    g[i2, i0] = -(x @ y)
    g[i2, i1] = -y
    g[i2, i3] = -x
    g[i3, i0] = y
    return g


def null_related(x, y, xp, yp, m: int | None = None, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Null separation of chart points, by dot product and by the PQP test.

    Returns ``|(x - x')^t (y - y')| <= eq_tol``.  The group-side value
    ``C_11`` of ``chart(x', y')^{-1} chart(x, y)`` must equal minus that dot
    product; a mismatch beyond ``eq_tol * max|g|`` raises
    :class:`ConsistencyError`.
    """
    x, y, xp, yp = (cvec(v, m) for v in (x, y, xp, yp))
    dot = complex((x - xp) @ (y - yp))
    g = inverse(affine_chart(xp, yp)) @ affine_chart(x, y)
    verdict = pqp_member(g, tol)
    scale = float(np.max(np.abs(g)))
    if abs(verdict.c11 + dot) > tol.eq_tol * scale:
        raise ConsistencyError(f"C11 = {verdict.c11} but -(x-x')^t(y-y') = {-dot}")
    direct = abs(dot) <= tol.eq_tol
    if direct != verdict.member and not (tol.eq_tol < abs(dot) <= tol.eq_tol * scale):
        raise ConsistencyError("dot-product and PQP tests disagree")
    return direct


class RankReport(NamedTuple):
    rank: int
    observed: tuple
    expected: int


def expected_pqp_dimension(m: int) -> int:
    return m * (2 * m + 3)


def _numerical_rank(columns: list[np.ndarray]) -> int:
    M = np.column_stack([c.ravel() for c in columns])
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > RANK_THRESHOLD * s[0]))


def pqp_differential_rank(p, q, pp) -> int:
    """Rank of the differential of ``(p, q, p') -> p q p'`` at the given point."""
    m = _check_size(p)
    qpp = q @ pp
    pq = p @ q
    cols = [p @ X @ qpp for X in p_algebra_basis(m)]
    cols += [pq @ Y @ pp for Y in q_algebra_basis(m)]
    cols += [pq @ pp @ X for X in p_algebra_basis(m)]
    return _numerical_rank(cols)


def p_differential_rank(p) -> int:
    """Rank of the differential of ``P -> G`` at ``p``; equals dim P."""
    m = _check_size(p)
    return _numerical_rank([p @ X for X in p_algebra_basis(m)])


def pqp_rank_estimate(m: int, trials: int = 10, rng=None) -> RankReport:
    """Modal numerical rank of the PQP multiplication map over random points."""
    if m not in (2, 3, 4):
        raise ValueError("m must be 2, 3 or 4")
    if trials < 5:
        raise ValueError("need at least 5 trials")
    rng = rng if rng is not None else np.random.default_rng(0)
    ranks = [pqp_differential_rank(sample_P(m, rng), sample_Q(m, rng), sample_P(m, rng))
             for _ in range(trials)]
    counts = Counter(ranks)
    modal = max(counts, key=lambda r: (counts[r], r))
    return RankReport(modal, tuple(sorted(counts)), expected_pqp_dimension(m))
