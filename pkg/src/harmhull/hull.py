"""Pointwise membership in the harmonic hull of a domain of R^n.

For ``z = x + iy`` in C^n the real points of the isotropic cone through
``z`` form an (n-2)-sphere: centre ``x``, radius ``|y|``, lying in the
hyperplane through ``x`` orthogonal to ``y``.  A point ``z`` is admissible
when that sphere stays inside ``U``; the hull is the connected component of
admissible points containing ``U``.  Admissibility is decided exactly against
closed obstacles (points, balls, half-spaces, ball exteriors).  Connectivity
is only probed along a straight segment from a real basepoint, which is why
:class:`HullVerdict` is three valued.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import DEFAULT_TOL, HarmHullError, SingularError, Tolerances, bilinear, cvec, rvec
from .regions import (
    BallExterior,
    ClosedBall,
    ClosedHalfSpace,
    Region,
    UnsupportedRegion,
)


@dataclass(frozen=True)
class ConeSliceSphere:
    """``{w : |w - center| = radius, <w - center, axis> = 0}``; a point when radius is 0."""

    center: np.ndarray
    radius: float
    axis: np.ndarray | None

    @property
    def is_point(self) -> bool:
        return self.radius == 0.0

    def sample(self, count: int, rng) -> np.ndarray:
        """``count`` random points of the sphere (all equal to the centre if it is a point)."""
        n = self.center.size
        if self.is_point:
            return np.tile(self.center, (count, 1))
        g = rng.standard_normal((count, n))
        g -= np.outer(g @ self.axis, self.axis)
        g /= np.linalg.norm(g, axis=1)[:, None]
        return self.center + self.radius * g


class HullStatus(enum.Enum):
    MEMBER_CERTIFIED = "MemberCertified"
    CONE_FAILS_OBSTACLE = "ConeFailsObstacle"
    CONE_OK_CONNECTIVITY_UNVERIFIED = "ConeOkConnectivityUnverified"

    @property
    def code(self) -> int:
        """Raster code: 0 certified, 1 cone fails, 2 connectivity unverified."""
        return _STATUS_CODES[self]


_STATUS_CODES = {
    HullStatus.MEMBER_CERTIFIED: 0,
    HullStatus.CONE_FAILS_OBSTACLE: 1,
    HullStatus.CONE_OK_CONNECTIVITY_UNVERIFIED: 2,
}


@dataclass(frozen=True)
class HullVerdict:
    status: HullStatus
    details: str
    witness: object = None

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "code": self.status.code,
            "details": self.details,
            "witness": obstacle_to_json(self.witness) if self.witness is not None else None,
        }


def obstacle_to_json(ob) -> dict:
    if isinstance(ob, ClosedBall):
        if ob.radius == 0:
            return {"point": np.asarray(ob.center).tolist()}
        return {"closed_ball": {"center": np.asarray(ob.center).tolist(), "radius": ob.radius}}
    if isinstance(ob, ClosedHalfSpace):
        return {"closed_halfspace": {"normal": np.asarray(ob.normal).tolist(), "offset": ob.offset}}
    if isinstance(ob, BallExterior):
        return {"ball_exterior": {"center": np.asarray(ob.center).tolist(), "radius": ob.radius}}
    raise TypeError(f"not an obstacle: {ob!r}")


def real_cone_slice(z) -> ConeSliceSphere:
    """The real points of the isotropic cone through ``z``."""
    z = cvec(z)
    if z.size < 2:
        raise ValueError("need n >= 2")
    x = z.real.copy()
    y = z.imag.copy()
    r = float(np.linalg.norm(y))
    if r == 0.0:
        return ConeSliceSphere(x, 0.0, None)
    return ConeSliceSphere(x, r, y / r)


def _point_sphere_distance(S: ConeSliceSphere, p: np.ndarray) -> tuple[float, float]:
    """Nearest and farthest distance from ``p`` to ``S``."""
    d = p - S.center
    if S.is_point:
        dist = float(np.linalg.norm(d))
        return dist, dist
    a = float(d @ S.axis)
    q = d - a * S.axis
    n = S.center.size
    if n == 2:
        # a 0-sphere: the two points center +- r v with v the fixed unit normal to the axis
        v = np.array([-S.axis[1], S.axis[0]])
        c = float(q @ v)
        near = np.hypot(a, abs(c) - S.radius)
        far = np.hypot(a, abs(c) + S.radius)
        return float(near), float(far)
    qn = float(np.linalg.norm(q))
    return float(np.hypot(a, qn - S.radius)), float(np.hypot(a, qn + S.radius))


def sphere_avoids(S: ConeSliceSphere, obstacle) -> bool:
    """Exact test that the cone-slice sphere misses a closed obstacle."""
    if isinstance(obstacle, ClosedBall):
        near, _ = _point_sphere_distance(S, np.asarray(obstacle.center, dtype=float))
        return near > obstacle.radius
    if isinstance(obstacle, ClosedHalfSpace):
        a = np.asarray(obstacle.normal, dtype=float)
        if S.is_point:
            return float(a @ S.center) > obstacle.offset
        perp = float(np.linalg.norm(a - (a @ S.axis) * S.axis))
        return float(a @ S.center) - S.radius * perp > obstacle.offset
    if isinstance(obstacle, BallExterior):
        _, far = _point_sphere_distance(S, np.asarray(obstacle.center, dtype=float))
        return far < obstacle.radius
    raise TypeError(f"unsupported obstacle {obstacle!r}")


def first_blocking_obstacle(z, obstacles):
    """The first obstacle met by the real cone slice of ``z``, or None."""
    S = real_cone_slice(z)
    for ob in obstacles:
        if not sphere_avoids(S, ob):
            return ob
    return None


def _obstacle_arrays(obstacles, n):
    P = len(obstacles)
    kinds = np.empty(P, dtype=np.int64)
    centers = np.zeros((P, n))
    normals = np.zeros((P, n))
    radii = np.zeros(P)
    for k, ob in enumerate(obstacles):
        if isinstance(ob, ClosedBall):
            kinds[k] = _kernels.KIND_BALL
            centers[k] = ob.center
            radii[k] = ob.radius
        elif isinstance(ob, ClosedHalfSpace):
            kinds[k] = _kernels.KIND_HALFSPACE
            normals[k] = ob.normal
            radii[k] = ob.offset
        elif isinstance(ob, BallExterior):
            kinds[k] = _kernels.KIND_EXTERIOR
            centers[k] = ob.center
            radii[k] = ob.radius
        else:
            raise TypeError(f"unsupported obstacle {ob!r}")
    return kinds, centers, radii, normals


def blocking_indices(Z: np.ndarray, obstacles, kernels=None) -> np.ndarray:
    """Vectorised :func:`first_blocking_obstacle` over the rows of ``Z`` (index or -1).

    Only valid for n >= 3, where the slice is a genuine sphere.
    """
    kernels = kernels or _kernels
    Z = np.asarray(Z, dtype=complex)
    N, n = Z.shape
    if n < 3:
        raise ValueError("vectorised slice test needs n >= 3")
    if not obstacles:
        return np.full(N, -1, dtype=np.int64)
    X = np.ascontiguousarray(Z.real)
    Y = Z.imag
    R = np.linalg.norm(Y, axis=1)
    safe = np.where(R > 0, R, 1.0)
    A = np.ascontiguousarray(Y / safe[:, None])
    kinds, centers, radii, normals = _obstacle_arrays(obstacles, n)
    return kernels.first_blocking(X, R, A, kinds, centers, radii, normals)


def _check_even_dimension(n: int):
    if n % 2 == 1:
        raise HarmHullError(
            f"n = {n} is odd: the naive harmonic hull does not exist; "
            "use the reduced-hull predicates in harmhull.odd_dim"
        )
    if n == 2:
        raise HarmHullError("n = 2: use hull_membership_2d (U must be simply connected)")


def hull_membership(z, U: Region, basepoint, samples: int = 64,
                    fallback_samples: int | None = None, rng=None) -> HullVerdict:
    """Classify ``z`` against the harmonic hull of ``U`` (n even, n >= 4).

    The cone condition at ``z`` is decided exactly.  If it holds, the
    segment ``x0 + t (z - x0)`` is probed at ``t = 1/K, ..., 1``.

    Regions outside the exact class raise :class:`UnsupportedRegion` unless
    ``fallback_samples`` is given, in which case the cone condition at ``z``
    is sampled and a passing test is reported as unverified, never certified.
    """
    z = cvec(z, U.dimension)
    n = U.dimension
    _check_even_dimension(n)
    x0 = rvec(basepoint, n)
    if samples < 1:
        raise ValueError("samples must be positive")
    if not U.contains(x0):
        raise ValueError("basepoint must lie in U")
    try:
        obstacles = U.obstacles()
    except UnsupportedRegion:
        if fallback_samples is None:
            raise
        return _sampled_verdict(z, U, fallback_samples, rng)
    ob = first_blocking_obstacle(z, obstacles)
    if ob is not None:
        return HullVerdict(
            HullStatus.CONE_FAILS_OBSTACLE,
            "real cone slice meets an obstacle of R^n \\ U",
            ob,
        )
    t = np.arange(1, samples + 1) / samples
    path = x0[None, :] + t[:, None] * (z - x0)[None, :]
    idx = blocking_indices(path, obstacles)
    bad = np.nonzero(idx >= 0)[0]
    if bad.size:
        k = int(bad[0])
        return HullVerdict(
            HullStatus.CONE_OK_CONNECTIVITY_UNVERIFIED,
            f"cone condition holds at z but fails on the segment at t = {t[k]:.6g}",
            obstacles[int(idx[k])],
        )
    return HullVerdict(
        HullStatus.MEMBER_CERTIFIED,
        f"cone condition verified at z and at {samples} segment samples",
    )


def _sampled_verdict(z, U: Region, count: int, rng) -> HullVerdict:
    rng = rng if rng is not None else np.random.default_rng(0)
    W = real_cone_slice(z).sample(count, rng)
    inside = U.contains_many(W)
    if not np.all(inside):
        w = W[int(np.argmin(inside))]
        return HullVerdict(
            HullStatus.CONE_FAILS_OBSTACLE,
            "sampled, not certified: a point of the real cone slice lies outside U",
            ClosedBall(w, 0.0),
        )
    return HullVerdict(
        HullStatus.CONE_OK_CONNECTIVITY_UNVERIFIED,
        f"sampled, not certified: {count} cone-slice samples lie in U",
    )


def hull_codes(Z, U: Region, basepoint, samples: int = 16, kernels=None) -> np.ndarray:
    """Batch :func:`hull_membership`, returning the raster codes 0/1/2 per row of ``Z``."""
    Z = np.asarray(Z, dtype=complex)
    N, n = Z.shape
    if n != U.dimension:
        raise ValueError("dimension mismatch")
    _check_even_dimension(n)
    x0 = rvec(basepoint, n)
    if not U.contains(x0):
        raise ValueError("basepoint must lie in U")
    obstacles = U.obstacles()
    codes = np.zeros(N, dtype=np.int64)
    at_z = blocking_indices(Z, obstacles, kernels)
    codes[at_z >= 0] = 1
    ok = np.nonzero(at_z < 0)[0]
    if ok.size and samples > 0:
        t = np.arange(1, samples + 1) / samples
        D = Z[ok] - x0
        path = x0[None, None, :] + t[None, :, None] * D[:, None, :]
        idx = blocking_indices(path.reshape(-1, n), obstacles, kernels).reshape(ok.size, samples)
        codes[ok[np.any(idx >= 0, axis=1)]] = 2
    return codes


def sampled_cone_condition(z, U: Region, count: int, rng) -> bool:
    """Sampling oracle: do ``count`` random points of the real cone slice all lie in ``U``?"""
    S = real_cone_slice(cvec(z, U.dimension))
    return bool(np.all(U.contains_many(S.sample(count, rng))))


def hull_membership_2d(z, U: Region) -> bool:
    """Membership in the hull of a simply connected planar ``U`` (asserted, not checked).

    True iff ``z1 + i z2`` lies in ``U`` and ``z1 - i z2`` lies in the
    complex conjugate of ``U``, identifying R^2 with C.
    """
    if U.dimension != 2:
        raise ValueError("hull_membership_2d needs a planar region")
    z1, z2 = cvec(z, 2)
    a = z1 + 1j * z2
    b = np.conj(z1 - 1j * z2)
    return U.contains([a.real, a.imag]) and U.contains([b.real, b.imag])


def extend_2d(f, g, z, U: Region | None = None) -> complex:
    """``f(z1 + i z2) + g(z1 - i z2)``; with ``U`` given, ``z`` must lie in its hull."""
    z1, z2 = cvec(z, 2)
    if U is not None and not hull_membership_2d([z1, z2], U):
        raise HarmHullError("point lies outside the domain of the extension")
    return complex(f(z1 + 1j * z2) + g(z1 - 1j * z2))


def newtonian_potential(x, z, tol: Tolerances = DEFAULT_TOL) -> complex:
    """``1 / <z - x, z - x>^(m - 1)`` in dimension 2m >= 4."""
    z = cvec(z)
    n = z.size
    if n % 2 or n < 4:
        raise ValueError("the Newtonian potential here is defined for even n >= 4")
    x = rvec(x, n)
    q = bilinear(z - x, z - x)
    if abs(q) <= tol.eq_tol:
        raise SingularError("z lies on the isotropic cone through x")
    return 1.0 / q ** (n // 2 - 1)


def supports_exact(U: Region) -> bool:
    try:
        U.obstacles()
    except UnsupportedRegion:
        return False
    return True
