import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmhull import hull
from harmhull.bateman import fd_laplacian
from harmhull.core import HarmHullError, SingularError, bilinear
from harmhull.hull import HullStatus
from harmhull.regions import (
    Ball,
    BallExterior,
    ClosedBall,
    ClosedHalfSpace,
    Complement,
    HalfSpace,
    Intersection,
    Region,
    Union,
    UnsupportedRegion,
    punctured,
)

coord = st.floats(-3, 3, allow_nan=False)
cvec4 = st.tuples(*[st.tuples(coord, coord)] * 4).map(lambda t: np.array([complex(*p) for p in t]))


def test_real_cone_slice_examples():
    S = hull.real_cone_slice([1, 2, 3, 4])
    assert S.is_point and np.array_equal(S.center, [1, 2, 3, 4])
    S = hull.real_cone_slice([1, 1j, 0, 0])
    assert np.array_equal(S.center, [1, 0, 0, 0])
    assert S.radius == 1 and np.array_equal(S.axis, [0, 1, 0, 0])


@given(cvec4)
@settings(max_examples=50)
def test_slice_points_are_on_the_cone(z):
    rng = np.random.default_rng(0)
    W = hull.real_cone_slice(z).sample(1000, rng)
    res = [abs(bilinear(w - z, w - z)) for w in W]
    assert max(res) <= 1e-10 * (1 + np.abs(z).max() ** 2)


def test_cone_solutions_lie_on_slice(rng):
    # w real with <w - z, w - z> = 0: w = x + r u for unit u orthogonal to y
    for _ in range(50):
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        S = hull.real_cone_slice(z)
        for _ in range(20):
            u = rng.standard_normal(4)
            u -= (u @ z.imag) / (z.imag @ z.imag) * z.imag
            w = z.real + np.linalg.norm(z.imag) * u / np.linalg.norm(u)
            assert abs(bilinear(w - z, w - z)) < 1e-10
            assert abs(np.linalg.norm(w - S.center) - S.radius) < 1e-12
            assert abs((w - S.center) @ S.axis) < 1e-12


@given(cvec4, cvec4)
def test_cone_symmetry(z, w):
    assert bilinear(w - z, w - z) == bilinear(z - w, z - w)


def test_sphere_avoids_examples():
    S = hull.ConeSliceSphere(np.zeros(4), 1.0, np.array([1.0, 0, 0, 0]))
    assert hull.sphere_avoids(S, ClosedBall(np.zeros(4)))
    assert not hull.sphere_avoids(S, ClosedBall(np.array([0, 1.0, 0, 0])))
    P = hull.real_cone_slice([1, 2, 3, 4])
    assert not hull.sphere_avoids(P, ClosedBall(np.array([1.0, 2, 3, 4])))
    assert hull.sphere_avoids(S, ClosedBall(np.array([3.0, 0, 0, 0]), 2.5))
    assert not hull.sphere_avoids(S, ClosedBall(np.array([3.0, 0, 0, 0]), 3.5))


def test_sphere_vs_halfspace_and_exterior():
    S = hull.ConeSliceSphere(np.zeros(3), 1.0, np.array([0, 0, 1.0]))
    # S is the unit circle in the xy-plane
    assert hull.sphere_avoids(S, ClosedHalfSpace(np.array([1.0, 0, 0]), -1.1))
    assert not hull.sphere_avoids(S, ClosedHalfSpace(np.array([1.0, 0, 0]), -0.9))
    assert hull.sphere_avoids(S, ClosedHalfSpace(np.array([0, 0, 1.0]), -0.01))
    assert hull.sphere_avoids(S, BallExterior(np.zeros(3), 1.01))
    assert not hull.sphere_avoids(S, BallExterior(np.zeros(3), 1.0))


def test_exact_predicate_vs_samples(rng):
    obstacles = [ClosedBall(rng.uniform(-1, 1, 4), rng.uniform(0.2, 0.6)) for _ in range(3)]
    obstacles.append(ClosedHalfSpace(rng.standard_normal(4), -2.0))
    obstacles.append(BallExterior(np.zeros(4), 4.0))
    for _ in range(100):
        z = rng.uniform(-1.5, 1.5, 4) + 1j * rng.uniform(-1, 1, 4)
        S = hull.real_cone_slice(z)
        W = S.sample(4000, rng)
        for ob in obstacles:
            if isinstance(ob, ClosedBall):
                hit = np.any(np.linalg.norm(W - ob.center, axis=1) <= ob.radius)
            elif isinstance(ob, ClosedHalfSpace):
                hit = np.any(W @ ob.normal <= ob.offset)
            else:
                hit = np.any(np.linalg.norm(W - ob.center, axis=1) >= ob.radius)
            # sampling can only miss a hit, never invent one
            if hit:
                assert not hull.sphere_avoids(S, ob)


def test_blocking_indices_matches_scalar(rng):
    obstacles = [ClosedBall(rng.uniform(-1, 1, 4), 0.5), ClosedHalfSpace(np.array([1.0, 0, 0, 0]), -1.5),
                 BallExterior(np.zeros(4), 3.0), ClosedBall(np.zeros(4))]
    Z = rng.uniform(-2, 2, (300, 4)) + 1j * rng.uniform(-1.5, 1.5, (300, 4))
    Z[:5] = Z[:5].real
    idx = hull.blocking_indices(Z, obstacles)
    for z, k in zip(Z, idx):
        ob = hull.first_blocking_obstacle(z, obstacles)
        assert (k < 0 and ob is None) or ob is obstacles[k]


def test_membership_examples():
    U = punctured(4)
    e1 = [1.0, 0, 0, 0]
    assert hull.hull_membership(e1, U, e1).status is HullStatus.MEMBER_CERTIFIED
    v = hull.hull_membership([1, 1j, 0, 0], U, e1)
    assert v.status is HullStatus.CONE_FAILS_OBSTACLE
    assert v.to_json()["witness"] == {"point": [0.0, 0.0, 0.0, 0.0]}
    assert hull.hull_membership([0.5j, 0, 0, 0], U, e1, 64).status is HullStatus.MEMBER_CERTIFIED


def test_connectivity_unverified():
    # the cone condition holds at z, but the segment from the basepoint passes
    # through the obstacle ball around the origin
    U = Region(4, Complement(Ball(np.zeros(4), 0.2)))
    z = [-1, 0.05j, 0, 0]
    v = hull.hull_membership(z, U, [1.0, 0, 0, 0], samples=64)
    assert v.status is HullStatus.CONE_OK_CONNECTIVITY_UNVERIFIED
    assert v.status.code == 2


def test_membership_errors():
    U3 = punctured(3)
    with pytest.raises(HarmHullError, match="odd"):
        hull.hull_membership([1, 0, 0], U3, [1, 0, 0])
    U = punctured(4)
    with pytest.raises(ValueError):
        hull.hull_membership([1, 0, 0, 0], U, [0, 0, 0, 0])
    bad = Region(4, Union((Ball(np.zeros(4), 1), Ball(np.full(4, 3.0), 1))))
    with pytest.raises(UnsupportedRegion):
        hull.hull_membership([0.1, 0, 0, 0], bad, [0, 0, 0, 0])


def test_sampled_fallback_never_certifies(rng):
    bad = Region(4, Union((Ball(np.zeros(4), 1), Ball(np.full(4, 3.0), 1))))
    v = hull.hull_membership([0.1, 0.1j, 0, 0], bad, [0, 0, 0, 0], fallback_samples=500, rng=rng)
    assert v.status is HullStatus.CONE_OK_CONNECTIVITY_UNVERIFIED
    assert "sampled, not certified" in v.details
    v = hull.hull_membership([0.1, 2j, 0, 0], bad, [0, 0, 0, 0], fallback_samples=500, rng=rng)
    assert v.status is HullStatus.CONE_FAILS_OBSTACLE
    assert not hull.supports_exact(bad)


def test_hull_codes_agree_with_membership(rng):
    U = Region(4, Intersection((Complement(Ball(np.array([0.5, 0, 0, 0]), 0.3)),
                                HalfSpace(np.array([0, 0, 0, 1.0]), -2.0))))
    x0 = np.array([-1.0, 0, 0, 0])
    Z = rng.uniform(-1, 1, (200, 4)) + 1j * rng.uniform(-0.7, 0.7, (200, 4))
    codes = hull.hull_codes(Z, U, x0, samples=8)
    for z, c in zip(Z, codes):
        assert hull.hull_membership(z, U, x0, samples=8).status.code == c
    assert set(codes) == {0, 1, 2}


def test_two_dim_examples():
    disc = Region(2, Ball(np.zeros(2), 1.0))
    assert hull.hull_membership_2d([0.3, -0.2], disc)
    assert hull.hull_membership_2d([0.5 + 0.2j, 0], disc)
    assert hull.hull_membership_2d([0, 0.8j], disc)
    assert not hull.hull_membership_2d([0, 1.2j], disc)


def test_extend_2d():
    assert hull.extend_2d(lambda w: w, lambda w: 0, [2.0, 3.0]) == 2 + 3j
    assert np.isclose(hull.extend_2d(np.exp, lambda w: 0, [1j, 0]), np.exp(1j))
    u = lambda x: hull.extend_2d(lambda w: w * w, lambda w: w * w, x).real  # noqa: E731
    assert np.isclose(u([2.0, 1.0]), 2 * (4 - 1))
    assert abs(fd_laplacian(u, np.array([0.3, -0.7]), 1e-3)) < 1e-6
    disc = Region(2, Ball(np.zeros(2), 1.0))
    with pytest.raises(HarmHullError):
        hull.extend_2d(np.exp, np.exp, [0, 1.2j], disc)


def test_newtonian_potential_examples():
    assert hull.newtonian_potential(np.zeros(4), [1, 0, 0, 0]) == 1
    assert hull.newtonian_potential(np.zeros(4), [2, 0, 0, 0]) == 0.25
    assert hull.newtonian_potential(np.zeros(6), [1, 1, 0, 0, 0, 0]) == 0.25
    with pytest.raises(SingularError):
        hull.newtonian_potential(np.zeros(4), [1, 1j, 0, 0])
    with pytest.raises(ValueError):
        hull.newtonian_potential(np.zeros(3), [1, 0, 0])


@pytest.mark.parametrize("m", [2, 3])
def test_newtonian_potential_harmonic(m, rng):
    # points at distance 2..4 from the pole keep the O(h^2) truncation below the bound
    x = rng.standard_normal(2 * m)
    worst = 0.0
    for _ in range(50):
        d = rng.standard_normal(2 * m)
        p = x + rng.uniform(2.0, 4.0) * d / np.linalg.norm(d)
        lap = fd_laplacian(lambda w: hull.newtonian_potential(x, w), p, 1e-3)
        worst = max(worst, abs(lap))
    assert worst <= 1e-5
