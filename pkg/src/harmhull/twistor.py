"""Lines in CP^3 attached to points of C^4, Pluecker coordinates and the fibration over S^4.

A point ``z`` of C^4 determines the projective line ``L_z`` swept out by
:func:`embed_line`.  Two lines meet exactly when the base points are
null separated, ``<z - z', z - z'> = 0``.  Real points give the lines of a
fibration ``tau: CP^3 -> S^4``, which agrees with inverse stereographic
projection on the real chart.

Pluecker coordinates of a 2-plane are ordered ``(p12, p13, p14, p23, p24, p34)``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import DEFAULT_TOL, ProjectivePoint, Tolerances, bilinear, cvec, rvec

PLUECKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def line_matrix(z) -> np.ndarray:
    """The 2x2 matrix ``M_z`` with ``[Z1, Z2] = M_z [zeta1, zeta2]`` on ``L_z``."""
    z1, z2, z3, z4 = cvec(z, 4)
    return np.array(
        [[z1 + 1j * z2, 1j * z3 + z4],
         [1j * z3 - z4, z1 - 1j * z2]]
    )


def embed_line(z, zeta) -> ProjectivePoint:
    """The point of ``L_z`` with homogeneous line parameter ``[zeta1, zeta2]``."""
    zeta = cvec(zeta, 2)
    if not np.any(zeta != 0):
        raise ValueError("line parameter [zeta1, zeta2] must be nonzero")
    top = line_matrix(z) @ zeta
    return ProjectivePoint(np.concatenate([top, zeta]))


def line_basis(z) -> np.ndarray:
    """2x4 matrix whose rows span the 2-plane of ``L_z`` (points at [1,0] and [0,1])."""
    M = line_matrix(z)
    return np.hstack([M.T, np.eye(2)])


class Incidence(NamedTuple):
    intersect: bool
    point: ProjectivePoint | None
    zeta: np.ndarray | None
    determinant: complex


def lines_intersect(z, zp, tol: Tolerances = DEFAULT_TOL) -> Incidence:
    """Decide whether ``L_z`` and ``L_z'`` meet, returning a common point if so.

    The determinant of the difference matrix ``M_z - M_z'`` equals
    ``<z - z', z - z'>``.  When it vanishes, the common parameter is a null
    vector of that matrix; if the matrix itself vanishes (``z == z'``) the
    lines coincide and the point at ``[1, 0]`` is returned.
    """
    z = cvec(z, 4)
    zp = cvec(zp, 4)
    d = z - zp
    det = bilinear(d, d)
    if abs(det) > tol.eq_tol:
        return Incidence(False, None, None, det)
    Md = line_matrix(d)
    _, sv, vh = np.linalg.svd(Md)
    if sv[0] <= tol.eq_tol:
        zeta = np.array([1.0, 0.0], dtype=complex)
    else:
        zeta = vh[-1].conj()
    return Incidence(True, embed_line(z, zeta), zeta, det)


def theta(Z) -> ProjectivePoint:
    """Antiholomorphic involution ``[Z1,Z2,Z3,Z4] -> [-conj Z2, conj Z1, -conj Z4, conj Z3]``."""
    Z = Z.coords if isinstance(Z, ProjectivePoint) else cvec(Z, 4)
    c = np.conj(Z)
    return ProjectivePoint(np.array([-c[1], c[0], -c[3], c[2]]))


def _minors(Z, W) -> np.ndarray:
    return np.array([Z[i] * W[j] - Z[j] * W[i] for i, j in PLUECKER_PAIRS])


def pluecker_of_plane(Z, W, tol: Tolerances = DEFAULT_TOL) -> ProjectivePoint:
    """Pluecker coordinates of the plane spanned by two points of CP^3."""
    Z = Z.coords if isinstance(Z, ProjectivePoint) else cvec(Z, 4)
    W = W.coords if isinstance(W, ProjectivePoint) else cvec(W, 4)
    phi = _minors(Z, W)
    scale = np.linalg.norm(Z) * np.linalg.norm(W)
    if scale == 0 or np.max(np.abs(phi)) / scale < tol.proj_tol:
        raise ValueError("points are linearly dependent; they do not span a plane")
    return ProjectivePoint(phi)


def pluecker_of_real(x) -> ProjectivePoint:
    """Pluecker coordinates of ``L_x`` for a real point ``x`` of R^4."""
    x1, x2, x3, x4 = rvec(x, 4)
    return ProjectivePoint(np.array([
        x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4,
        -1j * x3 - x4,
        x1 + 1j * x2,
        -x1 + 1j * x2,
        1j * x3 - x4,
        1.0,
    ]))


def quadric_form(phi) -> complex:
    """``p12 p34 - p13 p24 + p14 p23`` on the given representative (unnormalised)."""
    p = phi.coords if isinstance(phi, ProjectivePoint) else cvec(phi, 6)
    return complex(p[0] * p[5] - p[1] * p[4] + p[2] * p[3])


def quadric_residual(phi) -> complex:
    """Quadric form divided by the squared Hermitian norm; scale invariant in modulus."""
    p = phi.coords if isinstance(phi, ProjectivePoint) else cvec(phi, 6)
    return quadric_form(p) / float(np.vdot(p, p).real)


def rp5_embed(xi) -> ProjectivePoint:
    """Real form RP^5 -> CP^5 on which the quadric restricts to the Lorentz form."""
    x0, x1, x2, x3, x4, x5 = rvec(xi, 6)
    if not np.any(rvec(xi) != 0):
        raise ValueError("xi must be nonzero")
    return ProjectivePoint(np.array([
        x0 - x5,
        -1j * x3 - x4,
        x1 + 1j * x2,
        -x1 + 1j * x2,
        1j * x3 - x4,
        x0 + x5,
    ]))


def lorentz_form(xi) -> float:
    xi = rvec(xi, 6)
    return float(xi[0] ** 2 - np.sum(xi[1:] ** 2))


def real_plane_residual(phi) -> float:
    """Largest violation of the four reality conditions cutting out RP^5.

    Returns the residual rather than a boolean so callers can pick a bound.
    """
    p = phi.coords if isinstance(phi, ProjectivePoint) else cvec(phi, 6)
    p = p / np.linalg.norm(p)
    res = (
        abs(np.conj(p[0]) - p[0]),
        abs(np.conj(p[1]) - p[4]),
        abs(np.conj(p[2]) + p[3]),
        abs(np.conj(p[5]) - p[5]),
    )
    return float(max(res))


def tau(Z) -> np.ndarray:
    """The point of S^4 in R^5 whose real line passes through ``Z``."""
    Z = Z.coords if isinstance(Z, ProjectivePoint) else cvec(Z, 4)
    Z1, Z2, Z3, Z4 = Z
    c1, c2, c3, c4 = np.conj(Z)
    v = np.array([
        Z1 * c3 + Z2 * c4 + Z3 * c1 + Z4 * c2,
        1j * (-Z1 * c3 + Z2 * c4 + Z3 * c1 - Z4 * c2),
        1j * (-Z1 * c4 - Z2 * c3 + Z3 * c2 + Z4 * c1),
        Z1 * c4 - Z2 * c3 - Z3 * c2 + Z4 * c1,
        -Z1 * c1 - Z2 * c2 + Z3 * c3 + Z4 * c4,
    ])
    return v.real / float(np.vdot(Z, Z).real)


def inverse_stereographic(x) -> np.ndarray:
    x = rvec(x, 4)
    r2 = float(x @ x)
    return np.concatenate([2.0 * x, [1.0 - r2]]) / (1.0 + r2)
