import numpy as np
import pytest

from pampa_swe.global_flux import LocalFlux
from pampa_swe.high_order import (biased_derivatives, high_order_node_fluxes,
                                  high_order_point_residuals, sign_matrices)
from pampa_swe.models import RotatingShallowWater, SaintVenant

G = 9.812


def test_supercritical_full_upwinding():
    m = SaintVenant(G)
    u = np.array([[1.0], [10.0]])
    jp, jm = sign_matrices(u, m)
    np.testing.assert_allclose(jp[0], np.eye(2), atol=1e-14)
    np.testing.assert_allclose(jm[0], 0.0, atol=1e-14)


def test_at_rest_split():
    m = SaintVenant(G)
    u = np.array([[2.0], [0.0]])
    jp, jm = sign_matrices(u, m)
    lam, R, Rinv = m.eigenstructure(u)
    np.testing.assert_allclose(jp[0], R[0] @ np.diag([0.0, 1.0]) @ Rinv[0], atol=1e-14)
    np.testing.assert_allclose(jp + jm, np.eye(2)[None], atol=1e-14)


def test_rotating_zero_mode_gets_half():
    m = RotatingShallowWater(1.0, 1.0)
    u = np.array([[1.0], [0.0], [0.5]])
    jp, _ = sign_matrices(u, m)
    lam, R, Rinv = m.eigenstructure(u)
    np.testing.assert_allclose(jp[0], R[0] @ np.diag([0.0, 0.5, 1.0]) @ Rinv[0], atol=1e-14)


def test_projection_property(rng):
    m = SaintVenant(G)
    h = rng.uniform(0.1, 5, 200)
    u = np.stack([h, h * rng.uniform(-15, 15, 200)])
    jp, jm = sign_matrices(u, m)
    np.testing.assert_allclose(jp @ jp, jp, atol=1e-10)
    np.testing.assert_allclose(jp + jm, np.broadcast_to(np.eye(2), jp.shape), atol=1e-13)


@pytest.mark.parametrize("G_fn, dG", [(lambda x: 3.0 + 0 * x, lambda x: 0 * x),
                                      (lambda x: x, lambda x: 1 + 0 * x),
                                      (lambda x: x * x, lambda x: 2 * x)])
def test_biased_derivatives_exact_for_quadratics(G_fn, dG):
    x0, dx = 0.3, 0.1
    dp, dm = biased_derivatives(G_fn(x0), G_fn(x0 + dx / 2), G_fn(x0 + dx), dx)
    assert dp == pytest.approx(dG(x0 + dx), abs=1e-13)
    assert dm == pytest.approx(dG(x0), abs=1e-13)


def _lf_from_G(G_fn, x, nv):
    dx = x[1] - x[0]
    col = lambda s: np.broadcast_to(G_fn(s), (nv, s.size)).copy()
    g0 = col(x[:-1])
    return LocalFlux(g0 - g0, col(x[:-1] + dx / 2) - g0, col(x[1:]) - g0), dx


def test_constant_flux_gives_zero_residuals(rng):
    m = SaintVenant(G)
    x = np.linspace(0, 1, 11)
    lf, dx = _lf_from_G(lambda s: 4.0 + 0 * s, x, 2)
    pts = np.stack([rng.uniform(0.5, 2, 11), rng.uniform(-1, 1, 11)])
    a, b, wet = high_order_point_residuals(pts, lf, dx, m, periodic=False)
    assert np.all(wet)
    np.testing.assert_allclose(a, 0, atol=1e-14)
    np.testing.assert_allclose(b, 0, atol=1e-14)


def test_consistency_and_upwinding(rng):
    m = SaintVenant(G)
    x = np.linspace(0, 1, 21)
    lf, dx = _lf_from_G(lambda s: 1.0 + 0.5 * s, x, 2)
    pts = np.stack([rng.uniform(0.5, 2, 21), rng.uniform(-1, 1, 21)])
    a, b, _ = high_order_point_residuals(pts, lf, dx, m, periodic=False)
    # equal one-sided derivatives D = 0.5 at interior nodes
    np.testing.assert_allclose((a + b)[:, 1:-1] * 2 / dx, 0.5, atol=1e-13)
    sup = np.stack([np.ones(21), 20 * np.ones(21)])
    a, b, _ = high_order_point_residuals(sup, lf, dx, m, periodic=False)
    np.testing.assert_allclose(b, 0, atol=1e-14)


def test_dry_nodes_are_flagged():
    m = SaintVenant(G)
    x = np.linspace(0, 1, 5)
    lf, dx = _lf_from_G(lambda s: s, x, 2)
    pts = np.array([[1.0, 0.0, 1e-12, 1.0, 1.0], [0.0] * 5])
    a, b, wet = high_order_point_residuals(pts, lf, dx, m, periodic=False)
    assert wet.tolist() == [True, False, False, True, True]
    assert np.all(a[:, ~wet] == 0) and np.all(b[:, ~wet] == 0)


def test_node_fluxes_are_local_flux_endpoints():
    lf = LocalFlux(np.zeros((2, 3)), np.ones((2, 3)), 2 * np.ones((2, 3)))
    g0, g1 = high_order_node_fluxes(lf)
    assert np.all(g0 == 0) and np.all(g1 == 2)
