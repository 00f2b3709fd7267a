"""Odd dimension (n = 3): branch tracking, reduced hulls and conformal changes.

In R^3 the Newtonian potential ``1/|x|`` complexifies to ``1/sqrt(z.z)``,
and the square root has monodromy around the cone ``z.z = 0``.  This module
continues square roots (and logarithms, for the planar case) along sampled
paths, tests membership in the reduced hull
``{z : (z - x).(z - x) not in (-inf, 0]}``, and builds the rotated Kelvin and
Moebius charts whose union covers the points left out of that set.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .core import DEFAULT_TOL, ConsistencyError, HarmHullError, SingularError, Tolerances, cvec, rvec

MIN_STEPS = 100
MAX_STEP = 0.1
RADICAND_FLOOR = 1e-8


class BranchPointError(SingularError):
    """The tracked radicand came too close to zero."""


class StepTooLargeError(HarmHullError):
    """Consecutive samples are too far apart to follow a branch reliably."""


@dataclass(frozen=True)
class PathSpec:
    """A sampled path in C (shape ``(M,)``) or in C^k (shape ``(M, k)``).

    Consecutive samples must be closer than ``0.1`` and there must be at
    least 100 steps, so nearest-root continuation can follow a branch.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        if pts.ndim not in (1, 2):
            raise ValueError("path samples must form an (M,) or (M, k) array")
        if pts.shape[0] < MIN_STEPS + 1:
            raise ValueError(f"a path needs at least {MIN_STEPS} steps")
        steps = np.abs(np.diff(pts, axis=0))
        if pts.ndim == 2:
            steps = np.linalg.norm(steps, axis=1)
        if np.max(steps, initial=0.0) >= MAX_STEP:
            raise StepTooLargeError(
                f"largest step {np.max(steps):.3g} is not below {MAX_STEP}; use more samples"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def steps(self) -> int:
        return self.points.shape[0] - 1

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    def is_closed(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.points[-1] - self.points[0]) <= tol))

    @classmethod
    def circle(cls, center: complex, radius: float, steps: int = 200) -> "PathSpec":
        """``center + radius * exp(i theta)``, theta from 0 to 2 pi, endpoints identical."""
        theta = 2.0 * np.pi * np.arange(steps + 1) / steps
        pts = center + radius * np.exp(1j * theta)
        pts[-1] = pts[0]
        return cls(pts)

    @classmethod
    def segment(cls, a, b, steps: int = 100) -> "PathSpec":
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        t = np.linspace(0.0, 1.0, steps + 1)
        if a.ndim == 0:
            return cls(a + t * (b - a))
        return cls(a[None, :] + t[:, None] * (b - a)[None, :])

    @classmethod
    def constant(cls, point, steps: int = MIN_STEPS) -> "PathSpec":
        p = np.asarray(point, dtype=complex)
        return cls(np.repeat(p[None, ...], steps + 1, axis=0))

    def mapped(self, F) -> "PathSpec":
        """Image of a planar path under ``F: C -> C^k`` (applied samplewise)."""
        return PathSpec(np.array([np.asarray(F(w), dtype=complex) for w in self.points]))


class BranchValue(NamedTuple):
    """A value of a multivalued function at ``position`` after ``history`` tracked steps."""

    value: complex
    position: object
    history: int = 0


def _radicands(g, path: PathSpec) -> np.ndarray:
    vals = np.array([complex(g(w)) for w in path.points], dtype=complex)
    small = np.nonzero(np.abs(vals) <= RADICAND_FLOOR)[0]
    if small.size:
        k = int(small[0])
        raise BranchPointError(f"radicand vanishes (|g| <= {RADICAND_FLOOR}) at path sample {k}")
    return vals


def continue_sqrt(g, path: PathSpec, initial: BranchValue | complex | None = None,
                  tol: Tolerances = DEFAULT_TOL, kernels=None) -> BranchValue:
    """Analytic continuation of ``sqrt(g)`` along ``path`` by nearest-root stepping.

    ``initial`` defaults to the principal root at the start of the path.
    Raises :class:`BranchPointError` if ``|g|`` drops to 1e-8 on the path and
    :class:`StepTooLargeError` if the two candidate roots are nearly
    equidistant from the previous value at some step.
    """
    kernels = kernels or _kernels
    rad = _radicands(g, path)
    if initial is None:
        w0 = complex(np.sqrt(rad[0]))
    else:
        w0 = complex(initial.value if isinstance(initial, BranchValue) else initial)
        if abs(w0 * w0 - rad[0]) > tol.eq_tol * (1.0 + abs(rad[0])):
            raise ValueError("initial value is not a square root of g at the start of the path")
    values, status, k = kernels.track_sqrt(rad, w0)
    if status != _kernels.TRACK_OK:
        raise StepTooLargeError(f"root choice ambiguous at sample {k}; use more steps")
    base = initial.history if isinstance(initial, BranchValue) else 0
    return BranchValue(complex(values[-1]), path.end, base + path.steps)


def continue_log(g, path: PathSpec, initial: BranchValue | complex | None = None,
                 tol: Tolerances = DEFAULT_TOL, kernels=None) -> BranchValue:
    """Analytic continuation of ``log(g)`` along ``path`` (phase unwrapping)."""
    kernels = kernels or _kernels
    rad = _radicands(g, path)
    phase = kernels.track_log(np.ascontiguousarray(rad))
    if np.max(np.abs(np.diff(phase)), initial=0.0) > np.pi / 2:
        raise StepTooLargeError("phase jumps by more than pi/2 between samples; use more steps")
    start = complex(np.log(rad[0]))
    if initial is not None:
        v = complex(initial.value if isinstance(initial, BranchValue) else initial)
        if abs(np.exp(v) - rad[0]) > tol.eq_tol * (1.0 + abs(rad[0])):
            raise ValueError("initial value is not a logarithm of g at the start of the path")
        start = v
    final = start + (np.log(abs(rad[-1])) - np.log(abs(rad[0]))) + 1j * (phase[-1] - phase[0])
    return BranchValue(complex(final), path.end, path.steps)


def _square(z) -> complex:
    z = np.asarray(z, dtype=complex)
    return complex(np.sum(z * z))


def newtonian_monodromy(loop: PathSpec, basepoint_value: BranchValue | complex | None = None,
                        tol: Tolerances = DEFAULT_TOL) -> complex:
    """Ratio final/initial of ``1/sqrt(z.z)`` continued once around a closed loop in C^3."""
    if loop.points.ndim != 2 or loop.points.shape[1] != 3:
        raise ValueError("the loop must be sampled in C^3")
    if not loop.is_closed():
        raise ValueError("monodromy needs a closed loop")
    try:
        end = continue_sqrt(_square, loop, basepoint_value, tol)
    except BranchPointError as exc:
        raise SingularError(f"loop meets the cone z.z = 0: {exc}") from None
    start = (complex(np.sqrt(_square(loop.start))) if basepoint_value is None
             else complex(getattr(basepoint_value, "value", basepoint_value)))
    # r = 1/sqrt, so the multiplier of r is start/end
    return start / end.value


def sample_loop(center: complex = 1j, radius: float = 0.1, steps: int = 400) -> PathSpec:
    """The image of a small circle in the zeta-plane under ``zeta -> (zeta, zeta^2, 0)``."""
    return PathSpec.circle(center, radius, steps).mapped(lambda w: (w, w * w, 0.0))


def log_demo(center: complex = 1j, radius: float = 0.1, steps: int = 400) -> complex:
    """Shift of the planar potential ``log(z.z)/2`` around a loop in C^2.

    The loop is ``zeta -> (1, zeta)``, so ``z.z = 1 + zeta^2`` and the shift
    is ``i pi`` times the winding of the loop around ``zeta = +-i``.
    """
    loop = PathSpec.circle(center, radius, steps).mapped(lambda w: (1.0, w))
    g = _square
    end = continue_log(g, loop)
    start = complex(np.log(g(loop.start)))
    return 0.5 * (end.value - start)


def reduced_hull_member_3d(z, obstacles=None, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``(z - x).(z - x)`` avoids the closed negative real axis for every obstacle ``x``.

    ``obstacles`` defaults to the origin alone.
    """
    z = cvec(z, 3)
    obs = [np.zeros(3)] if obstacles is None else [rvec(x, 3) for x in obstacles]
    for x in obs:
        q = _square(z - x)
        if abs(q.imag) <= tol.eq_tol and q.real <= 0.0:
            return False
    return True


def kelvin_transform(f, eps: float, X) -> float:
    """``f(X') / sqrt(D)`` with ``D = 1 - 2 eps X1 + eps^2 |X|^2``.

    ``X' = ((X1 - eps |X|^2) / D, X2 / D, X3 / D)``.
    """
    if eps == 0:
        raise ValueError("eps must be nonzero")
    X = rvec(X, 3)
    r2 = float(X @ X)
    D = 1.0 - 2.0 * eps * X[0] + eps * eps * r2
    if not D > 0:
        raise HarmHullError(f"1 - 2 eps X1 + eps^2 |X|^2 = {D:.6g} is not positive")
    arg = np.array([(X[0] - eps * r2) / D, X[1] / D, X[2] / D])
    try:
        val = f(arg)
    except HarmHullError:
        raise
    except Exception as exc:
        raise HarmHullError(f"f is not defined at the transformed point {arg}: {exc}") from exc
    if not np.all(np.isfinite(val)):
        raise HarmHullError(f"f is not finite at the transformed point {arg}")
    return val / np.sqrt(D)


class MoebiusImage(NamedTuple):
    Z: np.ndarray
    branch_scale: complex
    branch_ok: bool


def moebius_pair(z, eps: float, tol: Tolerances = DEFAULT_TOL) -> MoebiusImage:
    """Image of ``z`` under the complexified inversion attached to ``eps``.

    ``Z = (z + eps z.z e1) / (1 + 2 eps z1 + eps^2 z.z)``.  ``branch_scale`` is
    the principal square root of the denominator and ``branch_ok`` records
    whether ``||z||^2 < 1/(9 eps^2)``, which keeps its real part positive.
    """
    z = cvec(z, 3)
    q = _square(z)
    den = 1.0 + 2.0 * eps * z[0] + eps * eps * q
    if abs(den) <= tol.eq_tol:
        raise SingularError("1 + 2 eps z1 + eps^2 z.z vanishes")
    Z = z.copy()
    Z[0] += eps * q
    Z /= den
    norm2 = float(np.vdot(z, z).real)
    ok = eps == 0 or norm2 * 9.0 * eps * eps < 1.0
    return MoebiusImage(Z, complex(np.sqrt(den)), bool(ok))


def moebius_inverse(Z, eps: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Inverse of :func:`moebius_pair`, the same map with ``-eps``."""
    Z = cvec(Z, 3)
    Q = _square(Z)
    den = 1.0 - 2.0 * eps * Z[0] + eps * eps * Q
    if abs(den) <= tol.eq_tol:
        raise SingularError("1 - 2 eps Z1 + eps^2 Z.Z vanishes")
    z = Z.copy()
    z[0] -= eps * Q
    return z / den


def check_rotation(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.shape != (3, 3):
        raise ValueError("rotation must be a 3x3 matrix")
    if np.max(np.abs(A.T @ A - np.eye(3))) > tol.eq_tol * 100 or abs(np.linalg.det(A) - 1.0) > 1e-8:
        raise HarmHullError("A is not a rotation (A^t A = I, det A = 1)")
    return A


def curved_extension_member(z, eps: float, A=None, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Membership of ``A^{-1} z`` in the chart of the rotated inversion with parameter ``eps``.

    The chart is ``||w||^2 < 1/(9 eps^2)`` with
    ``w.w / (1 + 2 eps w1 + eps^2 w.w)`` off the closed negative real axis.
    """
    if eps == 0:
        raise ValueError("eps must be nonzero; eps = 0 is the reduced hull (reduced_hull_member_3d)")
    A = np.eye(3) if A is None else check_rotation(A, tol)
    w = A.T @ cvec(z, 3)
    if not float(np.vdot(w, w).real) * 9.0 * eps * eps < 1.0:
        return False
    q = _square(w)
    den = 1.0 + 2.0 * eps * w[0] + eps * eps * q
    ratio = q / den
    return not (abs(ratio.imag) <= tol.eq_tol and ratio.real <= 0.0)


class CoverWitness(NamedTuple):
    """How a point is covered.  ``reduced`` means the reduced hull itself (``eps == 0``)."""

    rotation: np.ndarray
    epsilon: float
    reduced: bool


def _rotation_to_first_axis(u: np.ndarray) -> np.ndarray:
    """A rotation whose first column is the unit vector ``u``."""
    Qm, _ = np.linalg.qr(np.column_stack([u, np.eye(3)]))
    Qm = Qm[:, :3]
    if Qm[:, 0] @ u < 0:
        Qm[:, 0] *= -1
    if np.linalg.det(Qm) < 0:
        Qm[:, 2] *= -1
    return Qm


def cover_witness(z, tol: Tolerances = DEFAULT_TOL) -> CoverWitness:
    """A chart of the cover of the hull of R^3 minus the origin that contains ``z``.

    Points of the reduced hull get the identity with ``eps = 0``.  Otherwise
    ``z = x + iy`` has ``x.y = 0`` and ``|x| < |y|``; rotating ``y`` onto the
    first axis and taking ``eps = 1/(4 ||z||)`` gives a chart containing it.
    """
    z = cvec(z, 3)
    if abs(_square(z)) <= tol.eq_tol:
        raise SingularError("z.z = 0: the point is not in the hull")
    if reduced_hull_member_3d(z, tol=tol):
        return CoverWitness(np.eye(3), 0.0, True)
    y = z.imag
    A = _rotation_to_first_axis(y / np.linalg.norm(y))
    eps = 1.0 / (4.0 * float(np.linalg.norm(z)))
    if not curved_extension_member(z, eps, A, tol):
        raise ConsistencyError("constructed chart does not contain the point")
    return CoverWitness(A, eps, False)
