"""Hot inner loops, compiled with numba when available.

Every kernel has a pure-numpy twin with identical semantics.  The numba
versions are used unless numba is missing or ``HARMHULL_NO_NUMBA`` is set
to a non-empty value other than ``0``; ``BACKEND`` records the choice.
Both variants stay importable (``numpy_kernels`` / ``numba_kernels``) so
tests and the benchmark can compare them directly.
"""
from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

# Obstacle kinds understood by the blocking kernel.
KIND_BALL = 0       # closed ball (radius 0 for a point)
KIND_HALFSPACE = 1  # closed half-space {a.w <= b}
KIND_EXTERIOR = 2   # complement of an open ball

# Status codes of the square-root tracker.
TRACK_OK = 0
TRACK_AMBIGUOUS = 1


# --------------------------------------------------------------------------
# numpy implementations

def _first_blocking_np(centers, radii, axes, kinds, ocenters, oradii, onormals):
    """Index of the first obstacle met by each cone-slice sphere, or -1.

    ``centers``/``axes`` are (N, n), ``radii`` is (N,); obstacle arrays are
    (P,), (P, n), (P,), (P, n).  A zero radius means the sphere is a point.
    """
    N = centers.shape[0]
    out = np.full(N, -1, dtype=np.int64)
    for k in range(kinds.shape[0]):
        kind = kinds[k]
        if kind == KIND_HALFSPACE:
            a = onormals[k]
            au = axes @ a
            perp = np.sqrt(np.maximum(a @ a - au * au, 0.0))
            inside = centers @ a - radii * perp > oradii[k]
            hit = ~inside
        else:
            d = ocenters[k] - centers
            along = np.sum(d * axes, axis=1)
            q2 = np.maximum(np.sum(d * d, axis=1) - along * along, 0.0)
            qn = np.sqrt(q2)
            if kind == KIND_BALL:
                dist2 = along * along + (qn - radii) ** 2
                hit = ~(dist2 > oradii[k] * oradii[k])
            else:
                far2 = along * along + (qn + radii) ** 2
                hit = ~(far2 < oradii[k] * oradii[k])
        out[(out < 0) & hit] = k
    return out


def _track_sqrt_np(radicands, w0):
    """Continue a square root along sampled radicand values.

    Returns ``(values, status, index)``; ``status`` is ``TRACK_AMBIGUOUS``
    when at sample ``index`` the two candidate roots are within 10 percent
    of equidistant from the previous value.
    """
    M = radicands.shape[0]
    values = np.empty(M, dtype=np.complex128)
    values[0] = w0
    prev = w0
    for k in range(1, M):
        r = np.sqrt(radicands[k])
        d_plus = abs(r - prev)
        d_minus = abs(-r - prev)
        if abs(d_plus - d_minus) < 0.1 * max(d_plus, d_minus):
            return values[:k], TRACK_AMBIGUOUS, k
        prev = r if d_plus <= d_minus else -r
        values[k] = prev
    return values, TRACK_OK, M


def _track_log_np(args):
    """Unwrap the argument of sampled nonzero values; returns accumulated phase."""
    ph = np.angle(args)
    steps = np.diff(ph)
    steps = (steps + np.pi) % (2.0 * np.pi) - np.pi
    return np.concatenate([[ph[0]], ph[0] + np.cumsum(steps)])


def _circle_sum_np(values, weights):
    """Fixed-order sum of ``values * weights`` (trapezoid reduction)."""
    acc = 0j
    for k in range(values.shape[0]):
        acc += values[k] * weights[k]
    return acc


numpy_kernels = SimpleNamespace(
    first_blocking=_first_blocking_np,
    track_sqrt=_track_sqrt_np,
    track_log=_track_log_np,
    circle_sum=_circle_sum_np,
)


# --------------------------------------------------------------------------
# numba implementations

def _build_numba():
    from numba import njit

    @njit(cache=True)
    def first_blocking(centers, radii, axes, kinds, ocenters, oradii, onormals):
        N, n = centers.shape
        P = kinds.shape[0]
        out = np.full(N, -1, dtype=np.int64)
        for i in range(N):
            for k in range(P):
                kind = kinds[k]
                if kind == KIND_HALFSPACE:
                    ax = 0.0
                    aa = 0.0
                    uu = 0.0
                    for j in range(n):
                        ax += onormals[k, j] * centers[i, j]
                        aa += onormals[k, j] * onormals[k, j]
                        uu += onormals[k, j] * axes[i, j]
                    perp = np.sqrt(max(aa - uu * uu, 0.0))
                    if not (ax - radii[i] * perp > oradii[k]):
                        out[i] = k
                        break
                else:
                    along = 0.0
                    dd = 0.0
                    for j in range(n):
                        d = ocenters[k, j] - centers[i, j]
                        along += d * axes[i, j]
                        dd += d * d
                    qn = np.sqrt(max(dd - along * along, 0.0))
                    rho2 = oradii[k] * oradii[k]
                    if kind == KIND_BALL:
                        t = qn - radii[i]
                        if not (along * along + t * t > rho2):
                            out[i] = k
                            break
                    else:
                        t = qn + radii[i]
                        if not (along * along + t * t < rho2):
                            out[i] = k
                            break
        return out

    @njit(cache=True)
    def track_sqrt(radicands, w0):
        M = radicands.shape[0]
        values = np.empty(M, dtype=np.complex128)
        values[0] = w0
        prev = w0
        for k in range(1, M):
            r = np.sqrt(radicands[k])
            d_plus = abs(r - prev)
            d_minus = abs(-r - prev)
            if abs(d_plus - d_minus) < 0.1 * max(d_plus, d_minus):
                return values[:k], TRACK_AMBIGUOUS, k
            if d_plus <= d_minus:
                prev = r
            else:
                prev = -r
            values[k] = prev
        return values, TRACK_OK, M

    @njit(cache=True)
    def track_log(args):
        M = args.shape[0]
        out = np.empty(M)
        out[0] = np.angle(args[0])
        for k in range(1, M):
            step = np.angle(args[k]) - np.angle(args[k - 1])
            step = (step + np.pi) % (2.0 * np.pi) - np.pi
            out[k] = out[k - 1] + step
        return out

    @njit(cache=True)
    def circle_sum(values, weights):
        acc = 0j
        for k in range(values.shape[0]):
            acc += values[k] * weights[k]
        return acc

    return SimpleNamespace(
        first_blocking=first_blocking,
        track_sqrt=track_sqrt,
        track_log=track_log,
        circle_sum=circle_sum,
    )


try:
    numba_kernels = _build_numba()
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_kernels = None

_disabled = os.environ.get("HARMHULL_NO_NUMBA", "") not in ("", "0")

if numba_kernels is not None and not _disabled:
    BACKEND = "numba"
    _active = numba_kernels
else:
    BACKEND = "numpy"
    _active = numpy_kernels

first_blocking = _active.first_blocking
track_sqrt = _active.track_sqrt
track_log = _active.track_log
circle_sum = _active.circle_sum
