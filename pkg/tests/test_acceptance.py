"""The eleven acceptance criteria, each at its stated tolerance.

Run alone with ``python3 tests/test_acceptance.py`` or ``pytest tests/test_acceptance.py``;
the terminal summary prints one PASS/FAIL line per criterion.
"""
import warnings

import numpy as np
import pytest

from harmhull import bateman, hull, lie, odd_dim, twistor
from harmhull.integrands import builtin, catalogue, parse_integrand
from harmhull.regions import Ball, Complement, Intersection, Region, punctured

SEED = 12345


def _rng(k):
    return np.random.default_rng(SEED + k)


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.mark.acceptance(1, "fibration: tau(embed_line(x, zeta)) = inverse stereographic(x)")
def test_criterion_01_fibration():
    rng = _rng(1)
    worst = 0.0
    for _ in range(200):
        x = rng.standard_normal(4)
        zeta = _crandn(rng, 2)
        worst = max(worst, np.max(np.abs(twistor.tau(twistor.embed_line(x, zeta))
                                         - twistor.inverse_stereographic(x))))
    assert worst <= 1e-10


@pytest.mark.acceptance(2, "quadric identities for real lines and the real form RP^5")
def test_criterion_02_quadric():
    rng = _rng(2)
    for _ in range(200):
        x = rng.standard_normal(4)
        assert abs(twistor.quadric_residual(twistor.pluecker_of_real(x))) <= 1e-12
        xi = rng.standard_normal(6)
        phi = twistor.rp5_embed(xi)
        assert abs(twistor.quadric_form(phi.coords) - twistor.lorentz_form(xi)) <= 1e-12


def _random_null(rng):
    a = rng.standard_normal(4)
    b = rng.standard_normal(4)
    b -= (a @ b) / (a @ a) * a
    b *= np.linalg.norm(a) / np.linalg.norm(b)
    return a + 1j * b


def _planes_meet(z, zp) -> bool:
    """Two lines of CP^3 meet iff their four spanning vectors are dependent."""
    M = np.vstack([twistor.line_basis(z), twistor.line_basis(zp)])
    s = np.linalg.svd(M, compute_uv=False)
    return s[-1] <= 1e-8 * s[0]


@pytest.mark.acceptance(3, "incidence iff null separation; distinct real lines are disjoint")
def test_criterion_03_incidence():
    rng = _rng(3)
    for k in range(500):
        z = _crandn(rng, 4)
        zp = z + _random_null(rng) if k % 2 else _crandn(rng, 4)
        res = twistor.lines_intersect(z, zp)
        assert res.intersect == _planes_meet(z, zp)
        if res.intersect:
            P = res.point
            assert P == twistor.embed_line(z, res.zeta)
            assert P == twistor.embed_line(zp, res.zeta)
    for _ in range(500):
        x, xp = rng.standard_normal(4), rng.standard_normal(4)
        assert not twistor.lines_intersect(x, xp).intersect
        assert not _planes_meet(x, xp)


@pytest.mark.acceptance(4, "Bateman: quadrature = residues, harmonicity, Cauchy vanishing")
def test_criterion_04_bateman():
    rng = _rng(4)
    gamma = bateman.Contour(0j, 1.0, 512)
    checked = 0
    for name, f in catalogue().items():
        got = 0
        while got < 50:
            z = 0.5 * _crandn(rng, 4)
            try:
                q = bateman.bateman_eval(f, gamma, z)
            except bateman.PoleProximityError:
                continue
            r = bateman.residue_oracle(f, gamma, z)
            assert abs(q - r) <= 1e-9 * (1 + abs(r)), name
            got += 1
        checked += 1
    assert checked == len(catalogue())

    unit = bateman.Contour()
    assert bateman.harmonicity_certificate(builtin("st_over_zeta"), unit, (0.0, 1.0), 20) <= 1e-6

    entire = [builtin("inv_zeta_minus_a", a=2.0), parse_integrand("s*t"), parse_integrand("s**3*t + 1")]
    for f in entire:
        for _ in range(20):
            z = _crandn(rng, 4)
            assert abs(bateman.bateman_eval(f, unit, z)) <= 1e-10


@pytest.mark.acceptance(5, "exact hull predicate vs 10^4-sample sphere oracle; witnesses")
def test_criterion_05_hull_oracle():
    rng = _rng(5)
    centers = rng.uniform(-2, 2, (3, 4))
    radii = rng.uniform(0.3, 0.8, 3)
    U = Region(4, Intersection(tuple(Complement(Ball(c, r)) for c, r in zip(centers, radii))))
    x0 = np.array([10.0, 0.0, 0.0, 0.0])
    for _ in range(200):
        z = rng.uniform(-2, 2, 4) + 1j * rng.uniform(-1, 1, 4)
        v = hull.hull_membership(z, U, x0, samples=16)
        exact_ok = v.status is not hull.HullStatus.CONE_FAILS_OBSTACLE
        assert exact_ok == hull.sampled_cone_condition(z, U, 10_000, rng)

    U0 = punctured(4)
    e1 = [1.0, 0, 0, 0]
    v = hull.hull_membership([1, 1j, 0, 0], U0, e1)
    assert v.status is hull.HullStatus.CONE_FAILS_OBSTACLE
    assert np.allclose(v.witness.center, 0) and v.witness.radius == 0
    v = hull.hull_membership([0.5j, 0, 0, 0], U0, e1, samples=64)
    assert v.status is hull.HullStatus.MEMBER_CERTIFIED


@pytest.mark.acceptance(6, "Newtonian potential blows up approaching the cone V(x)")
def test_criterion_06_blowup():
    for n in (4, 6):
        x = np.zeros(n)
        v = np.zeros(n, complex)
        v[0], v[1] = 1, 1j
        w = np.zeros(n)
        w[2] = 1.0
        ks = np.arange(1, 10_001)
        vals = np.array([abs(hull.newtonian_potential(x, x + v + (w - v) / k)) for k in ks])
        # strictly increasing along the whole sequence, in particular past |r| = 1e3
        assert np.all(np.diff(vals) > 0)
        assert vals.max() > 1e6


@pytest.mark.acceptance(7, "odd-dimension monodromy is -1 and stable under step halving")
def test_criterion_07_monodromy():
    mult = [odd_dim.newtonian_monodromy(odd_dim.sample_loop(1j, 0.1, M)) for M in (400, 800, 1600)]
    assert abs(mult[0] + 1) <= 1e-8
    assert abs(mult[1] - mult[0]) <= 1e-10
    assert abs(mult[2] - mult[1]) <= 1e-10


@pytest.mark.acceptance(8, "Kelvin/Moebius identities and cover witnesses")
def test_criterion_08_kelvin_moebius_cover():
    rng = _rng(8)
    done = 0
    while done < 100:
        z = 0.5 * _crandn(rng, 3)
        eps = rng.uniform(-1, 1)
        den = 1 + 2 * eps * z[0] + eps ** 2 * np.sum(z * z)
        if abs(den) < 0.1:
            continue
        Z = odd_dim.moebius_pair(z, eps).Z
        assert abs(den * (1 - 2 * eps * Z[0] + eps ** 2 * np.sum(Z * Z)) - 1) <= 1e-10
        done += 1

    e1 = np.array([1.0, 0, 0])
    for _ in range(100):
        X = rng.uniform(-3, 3, 3)
        if np.linalg.norm(X - e1) < 0.05:
            continue
        F = odd_dim.kelvin_transform(lambda a: 1.0, 1.0, X)
        assert abs(F - 1 / np.linalg.norm(X - e1)) <= 1e-12

    for _ in range(500):
        y = rng.standard_normal(3) * rng.uniform(0.1, 5)
        x = rng.standard_normal(3)
        x -= (x @ y) / (y @ y) * y
        x *= rng.uniform(0, 0.999) * np.linalg.norm(y) / np.linalg.norm(x)
        z = x + 1j * y
        assert not odd_dim.reduced_hull_member_3d(z)
        w = odd_dim.cover_witness(z)
        assert not w.reduced
        assert odd_dim.curved_extension_member(z, w.epsilon, w.rotation)


@pytest.mark.acceptance(9, "PQP: C11 vanishes on products, generic elsewhere, rank m(2m+3)")
def test_criterion_09_pqp():
    rng = _rng(9)
    for m in (2, 3):
        worst = 0.0
        for _ in range(1000):
            g = lie.sample_P(m, rng) @ lie.sample_Q(m, rng) @ lie.sample_P(m, rng)
            worst = max(worst, abs(lie.pqp_member(g).c11))
        assert worst <= 1e-9
        generic = sum(abs(lie.random_group_element(m, rng)[m + 1, 0]) > 1e-6 for _ in range(1000))
        assert generic >= 990
    assert lie.pqp_rank_estimate(2, 10, rng).rank == 14
    assert lie.pqp_rank_estimate(3, 10, rng).rank == 27


@pytest.mark.acceptance(10, "null separation: dot product agrees with chart C11 test")
def test_criterion_10_null_related():
    rng = _rng(10)
    seen = set()
    for m in (2, 3):
        for k in range(500):
            x, y, xp, yp = (_crandn(rng, m) for _ in range(4))
            if k % 2:
                a = x - xp
                b = y - yp
                b -= (a @ b) / (a @ a) * a
                y = yp + b
            rel = lie.null_related(x, y, xp, yp)
            g = lie.inverse(lie.affine_chart(xp, yp)) @ lie.affine_chart(x, y)
            assert rel == lie.pqp_member(g).member
            seen.add(rel)
    assert seen == {True, False}


@pytest.mark.acceptance(11, "2D: extension restricts correctly; disc hull matches closed form")
def test_criterion_11_two_dim():
    rng = _rng(11)
    f = np.exp
    g = lambda w: w ** 2 - 3j * w  # noqa: E731
    for _ in range(100):
        x1, x2 = rng.standard_normal(2)
        zeta = complex(x1, x2)
        assert abs(hull.extend_2d(f, g, [x1, x2]) - (f(zeta) + g(zeta.conjugate()))) <= 1e-12

    disc = Region(2, Ball(np.zeros(2), 1.0))
    s = np.linspace(-1.5, 1.5, 101)
    for z2 in (0.0, 0.3 - 0.2j, 0.1 + 0.7j):
        for a in s:
            for b in s:
                z1 = complex(a, b)
                expect = abs(z1 + 1j * z2) < 1 and abs(z1 - 1j * z2) < 1
                assert hull.hull_membership_2d([z1, z2], disc) == expect


if __name__ == "__main__":
    import sys

    warnings.simplefilter("default")
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
