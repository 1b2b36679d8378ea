import numpy as np
import pytest

from pampa_swe.models import (CRITICAL_KAPPA, EigenstructureUndefined, RotatingShallowWater,
                              SaintVenant, critical_ratio, eigenstructure, kappa_from_froude,
                              max_wave_speed, physical_flux, pointwise_source)

G = 9.812


def test_flux_values():
    m = SaintVenant(G)
    f = physical_flux(np.array([2.0, 24.0]), m)
    assert f[1] == pytest.approx(288 + 19.624, rel=1e-15)
    np.testing.assert_allclose(physical_flux(np.array([1.0, 0.0]), m), [0, G / 2])
    np.testing.assert_array_equal(physical_flux(np.array([0.0, 0.0]), m), [0, 0])


def test_rotating_flux():
    m = RotatingShallowWater(1.0, 10.0)
    f = physical_flux(np.array([2.0, 1.0, 3.0]), m)
    np.testing.assert_allclose(f, [1.0, 0.5 + 2.0, 1.5])


def test_sources():
    assert np.all(pointwise_source(np.array([1.0, 0.0]), 0.0, 0.0, SaintVenant(G)) == 0)
    s = pointwise_source(np.array([1.0, 1.0]), 0.0, 0.0, SaintVenant(G, 0.05))
    assert s[1] == pytest.approx(-G * 0.0025, rel=1e-14)
    s = pointwise_source(np.array([1.0, 0.0, 1.0]), 0.0, 0.0, RotatingShallowWater(1.0, 10.0))
    np.testing.assert_allclose(s, [0, 10, 0])
    s = pointwise_source(np.array([2.0, 0.0]), 0.0, 0.5, SaintVenant(G))
    assert s[1] == pytest.approx(-G * 2 * 0.5)


def test_friction_exponent():
    m = SaintVenant(G, 0.05)
    s = pointwise_source(np.array([3.0, 2.0]), 0.0, 0.0, m)
    # -g n^2 |hu| hu / h^(7/3)
    assert s[1] == pytest.approx(-G * 0.0025 * 4.0 / 3.0 ** (7.0 / 3.0), rel=1e-13)


def test_beta_plane():
    m = RotatingShallowWater(1.0, 0.5, 0.01)
    assert m.coriolis(10.0) == pytest.approx(0.6)


def test_eigenvalues_simple():
    lam, R, Rinv = eigenstructure(np.array([1.0, 0.0]), SaintVenant(1.0))
    np.testing.assert_allclose(lam, [-1, 1])
    lam, R, Rinv = eigenstructure(np.array([1.0, 0.0, 0.0]), RotatingShallowWater(1.0))
    np.testing.assert_allclose(lam, [-1, 0, 1])


@pytest.mark.parametrize("model", [SaintVenant(G, 0.03), RotatingShallowWater(G, 1.0)])
def test_eigendecomposition_reconstructs_jacobian(model, rng):
    n = 10_000
    h = rng.uniform(1e-3, 10, n)
    rows = [h, h * rng.uniform(-5, 5, n)]
    if model.nvars == 3:
        rows.append(h * rng.uniform(-5, 5, n))
    u = np.stack(rows)
    lam, R, Rinv = model.eigenstructure(u)
    J = model.jacobian(u)
    eye = np.einsum("...ij,...jk->...ik", R, Rinv)
    assert np.max(np.abs(eye - np.eye(model.nvars))) < 1e-13
    rebuilt = np.einsum("...ij,j...,...jk->...ik", R, lam, Rinv)
    scale = 1.0 + np.max(np.abs(J), axis=(-2, -1))
    assert np.max(np.max(np.abs(rebuilt - J), axis=(-2, -1)) / scale) < 1e-11
    # J r_i = lambda_i r_i
    Jr = np.einsum("...ij,...jk->...ik", J, R)
    assert np.max(np.abs(Jr - R * np.moveaxis(lam, 0, -1)[..., None, :]) / scale[:, None, None]) < 1e-12


def test_jacobian_matches_finite_differences(rng):
    for model in (SaintVenant(G), RotatingShallowWater(G, 1.0)):
        u = np.array([1.7, 0.9, -0.4])[: model.nvars]
        J = model.jacobian(u)
        eps = 1e-6
        for k in range(model.nvars):
            du = np.zeros(model.nvars)
            du[k] = eps
            col = (model.flux(u + du) - model.flux(u - du)) / (2 * eps)
            np.testing.assert_allclose(J[:, k], col, atol=1e-7)


def test_eigenstructure_dry_raises():
    with pytest.raises(EigenstructureUndefined):
        eigenstructure(np.array([0.0, 0.0]), SaintVenant(G))


def test_max_wave_speed():
    assert max_wave_speed(np.array([1.0, 0.0]), SaintVenant(1.0)) == pytest.approx(1.0)
    assert max_wave_speed(np.array([0.0, 0.0]), SaintVenant(1.0)) == 0.0
    assert max_wave_speed(np.array([4.0, 12.0]), SaintVenant(G)) == pytest.approx(3 + np.sqrt(39.248))


def test_critical_ratio():
    g, h = G, 1.3
    u = np.sqrt(g * h)
    m = SaintVenant(g)
    kappa, regime = critical_ratio(m.flux(np.array([h, h * u])), g, state=(h, h * u))
    assert kappa == pytest.approx(CRITICAL_KAPPA, abs=1e-12)
    assert regime == "critical"
    assert critical_ratio(m.flux(np.array([h, 0.0])), g)[0] == 0.0
    h, u = 2.0, 6.0
    kappa, regime = critical_ratio(m.flux(np.array([h, h * u])), g, state=(h, h * u))
    assert kappa == pytest.approx(float(kappa_from_froude(u / np.sqrt(g * h))), abs=1e-12)
    assert regime == "supercritical"
    assert critical_ratio(m.flux(np.array([2.0, 4.42])), g, state=(2.0, 4.42))[1] == "subcritical"
    with pytest.raises(ValueError):
        critical_ratio([1.0, 0.0], g)


def test_kappa_identity_random(rng):
    g = G
    h = rng.uniform(0.01, 10, 1000)
    u = rng.uniform(-20, 20, 1000)
    f1, f2 = h * u, h * u * u + 0.5 * g * h * h
    k1 = g * f1 ** 4 / f2 ** 3
    k2 = kappa_from_froude(u / np.sqrt(g * h))
    np.testing.assert_allclose(k1, k2, rtol=0, atol=1e-12)


def test_flux_derivative_balances_source():
    # manufactured still state h + B = const: d f2/dx = -g h B_x
    m = SaintVenant(G)
    for n in (100, 200):
        x = np.linspace(0, 1, n + 1)
        B = 0.3 * np.sin(2 * np.pi * x)
        h = 2.0 - B
        f2 = m.flux(np.stack([h, 0 * h]))[1]
        dfdx = np.gradient(f2, x)[1:-1]
        Bx = 0.6 * np.pi * np.cos(2 * np.pi * x)
        s = m.source(np.stack([h, 0 * h]), x, Bx)[1][1:-1]
        err = np.max(np.abs(dfdx - s))
        if n == 100:
            e100 = err
    assert err < e100 / 3.5
