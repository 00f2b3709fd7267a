"""Complex vectors, the symmetric bilinear form, projective points and tolerances.

Complex vectors are plain 1-d ``numpy`` arrays of dtype ``complex128``; the
helpers here only validate and convert.  The bilinear form is the complex
*bilinear* extension of the Euclidean inner product, so there is never any
conjugation: ``bilinear((1, 1j), (1, 1j)) == 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class HarmHullError(ValueError):
    """Base class for domain errors raised by the toolkit."""


class SingularError(HarmHullError):
    """Evaluation at a singular point (e.g. on an isotropic cone)."""


class ConsistencyError(HarmHullError):
    """Two independent computations that must agree did not."""


@dataclass(frozen=True)
class Tolerances:
    """Global tolerance policy.

    eq_tol
        Absolute tolerance for residuals of equations.
    proj_tol
        Bound on normalised 2x2 minors for projective equality.
    fd_step
        Default finite-difference step.
    """

    eq_tol: float = 1e-10
    proj_tol: float = 1e-9
    fd_step: float = 1e-4

    def __post_init__(self):
        for name in ("eq_tol", "proj_tol", "fd_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = Tolerances()


def cvec(z, dim: int | None = None) -> np.ndarray:
    """Convert ``z`` to a 1-d complex array, optionally checking its length."""
    arr = np.asarray(z, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a non-empty 1-d vector, got shape {arr.shape}")
    if dim is not None and arr.size != dim:
        raise ValueError(f"expected a vector of dimension {dim}, got {arr.size}")
    return arr


def rvec(x, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a non-empty 1-d real vector, got shape {arr.shape}")
    if dim is not None and arr.size != dim:
        raise ValueError(f"expected a vector of dimension {dim}, got {arr.size}")
    return arr


def bilinear(z, w) -> complex:
    """Return ``sum(z_i * w_i)`` (no conjugation)."""
    z = cvec(z)
    w = cvec(w)
    if z.shape != w.shape:
        raise ValueError(f"dimension mismatch: {z.size} vs {w.size}")
    return complex(np.sum(z * w))


def null_quadric(z) -> complex:
    """``<z, z>``; zero exactly on the isotropic cone through the origin."""
    return bilinear(z, z)


class ProjectivePoint:
    """A point of CP^{k-1} given by homogeneous coordinates.

    Equality is scale invariant and tolerance based (see :func:`proj_equal`),
    hence instances are unhashable.
    """

    __slots__ = ("coords",)
    __hash__ = None

    def __init__(self, coords):
        arr = cvec(coords)
        if arr.size < 2:
            raise ValueError("projective points need at least 2 homogeneous coordinates")
        if not np.any(arr != 0):
            raise ValueError("the zero vector is not a projective point")
        arr.setflags(write=False)
        self.coords = arr

    @property
    def dim(self) -> int:
        return self.coords.size

    def normalized(self) -> np.ndarray:
        """Unit Hermitian-norm representative."""
        return self.coords / np.linalg.norm(self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return proj_equal(self, other)

    def __repr__(self):
        return f"ProjectivePoint({np.array2string(self.coords, precision=6)})"


def _as_proj(P) -> ProjectivePoint:
    return P if isinstance(P, ProjectivePoint) else ProjectivePoint(P)


def proj_equal(P, Q, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff all 2x2 minors of the normalised pair ``[P; Q]`` are below ``proj_tol``."""
    P = _as_proj(P)
    Q = _as_proj(Q)
    if P.dim != Q.dim:
        raise ValueError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    p = P.normalized()
    q = Q.normalized()
    minors = np.outer(p, q) - np.outer(q, p)
    return bool(np.max(np.abs(minors)) < tol.proj_tol)


# JSON helpers: complex scalars travel as [re, im].

def complex_to_json(c) -> list[float]:
    c = complex(c)
    return [c.real, c.imag]


def complex_from_json(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise ValueError(f"complex scalars are encoded as [re, im], got {obj!r}")


def cvec_to_json(z) -> list[list[float]]:
    return [complex_to_json(c) for c in np.asarray(z, dtype=complex).ravel()]


def cvec_from_json(obj) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or not obj:
        raise ValueError("complex vectors are encoded as a non-empty array of [re, im] pairs")
    return np.array([complex_from_json(c) for c in obj], dtype=complex)


def cmat_to_json(M) -> list:
    return [cvec_to_json(row) for row in np.asarray(M, dtype=complex)]
