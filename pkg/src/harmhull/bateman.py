"""Bateman's contour-integral representation of harmonic functions on R^4.

For a point ``z`` of C^4 and an integrand ``f(s, t, zeta)``::

    u(z) = \\oint f(s(zeta), t(zeta), zeta) dzeta,
    s = (z1 + i z2) + (i z3 + z4) zeta,   t = (i z3 - z4) + (z1 - i z2) zeta.

Real ``z`` gives a harmonic function of four real variables; complex ``z``
is its holomorphic extension through the same code path.  Contours are
circles and the integral is computed with the trapezoidal rule, which
converges geometrically when the integrand is holomorphic on an annulus
around the circle.  For rational integrands the pole locations are known,
so :func:`bateman_eval` refuses contours that pass within ``0.1 * radius``
of a pole, and :func:`residue_oracle` supplies an independent value by
residue calculus.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import DEFAULT_TOL, HarmHullError, Tolerances, cvec, rvec
from .integrands import Expr, RationalInZeta

POLE_MARGIN = 0.1
# Roundoff in second differences scales like eps*|u|/h**2; at 1e-4 it already
# reaches 1e-6 for |u| ~ 10, so certificates use a coarser default step.
CERTIFICATE_STEP = 1e-3


class PoleProximityError(HarmHullError):
    """A pole of the integrand lies too close to the contour."""


class UnsupportedPoleOrder(HarmHullError):
    pass


class UncheckedPoleWarning(UserWarning):
    """The integrand is not rational, so pole distances could not be checked."""


@dataclass(frozen=True)
class Contour:
    """Circle ``|zeta - center| = radius`` traversed once anticlockwise with ``nodes`` points."""

    center: complex = 0j
    radius: float = 1.0
    nodes: int = 64

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("contour radius must be positive")
        if self.nodes < 16:
            raise ValueError("contour needs at least 16 quadrature nodes")

    @classmethod
    def from_string(cls, text: str) -> "Contour":
        """Parse ``"c_re,c_im,rho,N"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError("contour is given as 'c_re,c_im,rho,N'")
        return cls(complex(float(parts[0]), float(parts[1])), float(parts[2]), int(parts[3]))

    def points(self, nodes: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Nodes on the circle and the matching trapezoid weights for dzeta."""
        N = self.nodes if nodes is None else nodes
        e = np.exp(2j * np.pi * np.arange(N) / N)
        return self.center + self.radius * e, (2j * np.pi * self.radius / N) * e


def line_coefficients(z) -> tuple[complex, complex, complex, complex]:
    """``(alpha, beta, gamma, delta)`` with ``s = alpha + beta*zeta``, ``t = gamma + delta*zeta``."""
    z1, z2, z3, z4 = cvec(z, 4)
    return z1 + 1j * z2, 1j * z3 + z4, 1j * z3 - z4, z1 - 1j * z2


def _factor_roots(rat: RationalInZeta) -> np.ndarray:
    roots = []
    for F in rat.factors:
        F = F.trim()
        if F.degree() == 0:
            if F.coef[0] == 0:
                raise HarmHullError("integrand denominator vanishes identically on this line")
            continue
        roots.append(F.roots())
    return np.concatenate(roots) if roots else np.empty(0, dtype=complex)


def pole_locations(f: Expr, z) -> np.ndarray:
    """Zeros in zeta of the integrand's denominator factors on the line of ``z``."""
    return _factor_roots(f.rational_in_zeta(*line_coefficients(z)))


def _check_pole_margin(f: Expr, contour: Contour, z):
    poles = pole_locations(f, z)
    if poles.size == 0:
        return
    gap = np.min(np.abs(np.abs(poles - contour.center) - contour.radius))
    if gap < POLE_MARGIN * contour.radius:
        raise PoleProximityError(
            f"integrand pole within {gap:.3g} of the contour (margin {POLE_MARGIN} * radius)"
        )


def bateman_eval(f, contour: Contour, z, nodes: int | None = None, kernels=None) -> complex:
    """Trapezoidal evaluation of the Bateman integral at ``z`` (real or complex, dim 4).

    ``f`` is an :class:`~harmhull.integrands.Expr` or any vectorised callable
    ``f(s, t, zeta)``; the latter skips the pole check and emits
    :class:`UncheckedPoleWarning`.
    """
    kernels = kernels or _kernels
    z = cvec(z, 4)
    alpha, beta, gamma, delta = line_coefficients(z)
    if isinstance(f, Expr):
        _check_pole_margin(f, contour, z)
    else:
        warnings.warn("non-rational integrand: pole distance to the contour is unchecked",
                      UncheckedPoleWarning, stacklevel=2)
    zeta, w = contour.points(nodes)
    vals = np.asarray(f(alpha + beta * zeta, gamma + delta * zeta, zeta), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise PoleProximityError("integrand is not finite on the contour")
    return complex(kernels.circle_sum(np.ascontiguousarray(vals), w))


def _cluster(roots: np.ndarray, rtol: float = 1e-7) -> list[np.ndarray]:
    """Group numerically coincident roots; returns index arrays."""
    left = list(range(roots.size))
    groups = []
    while left:
        i = left.pop(0)
        members = [i]
        for j in left[:]:
            if abs(roots[j] - roots[i]) <= rtol * (1.0 + abs(roots[i])):
                members.append(j)
                left.remove(j)
        groups.append(np.array(members))
    return groups


def residue_oracle(f: Expr, contour: Contour, z, tol: Tolerances = DEFAULT_TOL) -> complex:
    """``2 pi i`` times the sum of residues inside the contour, by Laurent expansion.

    Supports poles of order at most 2 (counted by multiplicity in the
    denominator).  Independent of the quadrature path.
    """
    if not isinstance(f, Expr):
        raise TypeError("the residue oracle needs a rational integrand expression")
    rat = f.rational_in_zeta(*line_coefficients(cvec(z, 4)))
    lead = 1.0 + 0j
    roots = []
    for F in rat.factors:
        F = F.trim()
        if F.degree() == 0:
            if F.coef[0] == 0:
                raise HarmHullError("integrand denominator vanishes identically on this line")
            lead *= F.coef[0]
            continue
        lead *= F.coef[-1]
        roots.append(F.roots())
    roots = np.concatenate(roots) if roots else np.empty(0, dtype=complex)
    if roots.size == 0:
        return 0j
    dist = np.abs(np.abs(roots - contour.center) - contour.radius)
    if np.any(dist <= 1e-8 * contour.radius):
        raise PoleProximityError("pole on the contour")
    N = rat.numerator
    dN = N.deriv()
    total = 0j
    for idx in _cluster(roots):
        z0 = complex(np.mean(roots[idx]))
        if abs(z0 - contour.center) >= contour.radius:
            continue
        order = idx.size
        if order > 2:
            raise UnsupportedPoleOrder(f"pole of order {order} at {z0:.6g}")
        others = np.delete(roots, idx)
        R = lead * np.prod(z0 - others)
        if order == 1:
            total += N(z0) / R
        else:
            dlogR = np.sum(1.0 / (z0 - others))
            total += (dN(z0) - N(z0) * dlogR) / R
    return complex(2j * math.pi * total)


def fd_laplacian(u, x, h: float = DEFAULT_TOL.fd_step) -> complex:
    """Second-order central-difference Laplacian of ``u`` at the real point ``x``."""
    x = rvec(x)
    n = x.size
    try:
        u0 = complex(u(x))
        acc = 0j
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            acc += complex(u(x + e)) - 2.0 * u0 + complex(u(x - e))
    except HarmHullError:
        raise
    except Exception as exc:
        raise HarmHullError(f"evaluation failed on the finite-difference stencil: {exc}") from exc
    return acc / (h * h)


def harmonicity_certificate(f, contour: Contour, box=(0.0, 1.0), count: int = 20,
                            rng=None, h: float | None = None) -> float:
    """Largest finite-difference Laplacian of the Bateman integral over random points of a box.

    ``box`` is ``(lo, hi)`` applied to every coordinate of R^4; ``h``
    defaults to :data:`CERTIFICATE_STEP`.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    h = CERTIFICATE_STEP if h is None else h
    lo, hi = box
    pts = rng.uniform(lo, hi, size=(count, 4))
    worst = 0.0
    for x in pts:
        lap = fd_laplacian(lambda w: bateman_eval(f, contour, w), x, h)
        worst = max(worst, abs(lap))
    return worst
