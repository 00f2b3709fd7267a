import os
import subprocess
import sys

import numpy as np
import pytest

from harmhull import _kernels, bateman, hull
from harmhull.integrands import builtin
from harmhull.regions import BallExterior, ClosedBall, ClosedHalfSpace

NP = _kernels.numpy_kernels
NB = _kernels.numba_kernels

needs_numba = pytest.mark.skipif(NB is None, reason="numba not installed")


def _obstacles(rng):
    return [ClosedBall(rng.uniform(-1, 1, 4), 0.4), ClosedBall(np.zeros(4)),
            ClosedHalfSpace(rng.standard_normal(4), -1.5), BallExterior(np.zeros(4), 3.5)]


@needs_numba
def test_first_blocking_backends_agree(rng):
    Z = rng.uniform(-2, 2, (2000, 4)) + 1j * rng.uniform(-1.5, 1.5, (2000, 4))
    Z[:10] = Z[:10].real
    obs = _obstacles(rng)
    a = hull.blocking_indices(Z, obs, kernels=NP)
    b = hull.blocking_indices(Z, obs, kernels=NB)
    assert np.array_equal(a, b)
    assert set(np.unique(a)) >= {-1, 0, 2, 3}


@needs_numba
def test_track_sqrt_backends_agree():
    theta = 2 * np.pi * np.arange(401) / 400
    rad = 1 + (1j + 0.1 * np.exp(1j * theta)) ** 2
    va, sa, ka = NP.track_sqrt(rad, np.sqrt(rad[0]))
    vb, sb, kb = NB.track_sqrt(rad, np.sqrt(rad[0]))
    assert sa == sb == _kernels.TRACK_OK and ka == kb
    assert np.array_equal(va, vb)
    w = np.exp(1j * 2 * np.pi * np.arange(102) / 101) ** 50
    assert NP.track_sqrt(w, 1 + 0j)[1:] == NB.track_sqrt(w, 1 + 0j)[1:]


@needs_numba
def test_track_log_and_sum_agree(rng):
    args = np.exp(1j * np.linspace(0, 7, 300)) * (1 + 0.1 * rng.standard_normal(300))
    assert np.allclose(NP.track_log(args), NB.track_log(args), atol=1e-14)
    v = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    w = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    assert NP.circle_sum(v, w) == NB.circle_sum(v, w)


@needs_numba
def test_bateman_backends_agree(rng):
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    f = builtin("s2t2_over_zeta")
    g = bateman.Contour()
    assert bateman.bateman_eval(f, g, z, kernels=NP) == bateman.bateman_eval(f, g, z, kernels=NB)


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", "numba"), ("", "numba")])
def test_env_flag_selects_backend(flag, expected):
    if NB is None and expected == "numba":
        pytest.skip("numba not installed")
    env = dict(os.environ, HARMHULL_NO_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "from harmhull import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected
