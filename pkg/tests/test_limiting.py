import numpy as np
import pytest

from pampa_swe.limiting import (combine_thetas, dry_velocity, oscillation_sigma, steady_indicator,
                                theta_flux, theta_oscillation, theta_residual)


def test_theta_flux_cases():
    one = np.ones(1)
    assert theta_flux(np.zeros(1), one, one, 0 * one, 0 * one, one)[0] == 1.0
    assert theta_flux(one, 0 * one, 0 * one, 0 * one, 0 * one, one)[0] == 0.0
    assert theta_flux(one, one, one, 0 * one, 0 * one, one)[0] == pytest.approx(0.5)
    # below the round-off guard
    assert theta_flux(np.array([1e-20]), 0 * one, 0 * one, 0 * one, 0 * one, one, scale=1.0)[0] == 1.0


def test_theta_residual_cases():
    one = np.ones(1)
    tl, tr = theta_residual(0 * one, 0 * one, one, one, 0 * one, 0 * one, one, one)
    assert tl[0] == 1.0 and tr[0] == 1.0
    tl, tr = theta_residual(one, one, 0 * one, 0 * one, 0 * one, 0 * one, one, one)
    assert tl[0] == 0.0 and tr[0] == 0.0
    tl, tr = theta_residual(one, -one, one, one, 0.5 * one, 0.5 * one, one, one)
    assert tl[0] == pytest.approx(0.75) and tr[0] == pytest.approx(0.25)


def test_thetas_in_unit_interval(rng):
    n = 1000
    d = rng.normal(size=n)
    h1, h2 = rng.uniform(0, 2, (2, n))
    u1, u2 = rng.uniform(-1, 1, (2, n))
    a = np.abs(u1) + np.abs(u2) + rng.uniform(0, 2, n)
    th = theta_flux(d, h1, h2, u1, u2, a)
    assert np.all((th >= 0) & (th <= 1))
    tl, tr = theta_residual(d, -d, h1, h2, u1, u2, a, a)
    assert np.all((tl >= 0) & (tl <= 1) & (tr >= 0) & (tr <= 1))


def test_steady_indicator_values():
    z = np.zeros(3)
    assert np.all(steady_indicator(z + 2, z + 2, z + 2, 0.1, 1.0) == 0)
    # phi = (dG/dx) L / max|G|, so G_right = 1/0.99 gives C phi = 1 with C = 10
    dx, L = 0.1, 1.0
    H = steady_indicator(np.array([1.0]), np.array([1.0]), np.array([1.0 / 0.99]), dx, L)
    assert H[0] == pytest.approx(0.5, abs=1e-12)
    g_right = 1.0 / 0.98
    H = steady_indicator(np.array([1.0]), np.array([1.0]), np.array([g_right]), dx, L)
    assert H[0] == pytest.approx(2.0 ** 20 / (1 + 2.0 ** 20), rel=1e-12)
    assert steady_indicator(np.zeros(1), np.zeros(1), np.array([1e-15]), 0.1, 1.0)[0] == 0.0


def test_oscillation_sigma_constant_and_monotone():
    n, dx = 10, 0.1
    assert np.all(oscillation_sigma(np.ones(n + 1), np.ones(n), dx, 1.0, False) == 0)
    assert np.all(theta_oscillation(np.zeros(n), 3.0, 0.01, dx) == 1.0)
    x = np.linspace(0, 1, n + 1)
    # growing kink on top of a linear profile
    h_pts = 1.0 + 0.2 * x
    h_avg = 1.0 + 0.2 * 0.5 * (x[:-1] + x[1:])
    base = oscillation_sigma(h_pts, h_avg, dx, 1.0, False)
    assert np.all(base < 1e-12)
    prev = 1.0
    for kink in (0.01, 0.1, 1.0):
        hp = h_pts + kink * np.maximum(x - 0.5, 0)
        ha = h_avg + kink * np.maximum(0.5 * (x[:-1] + x[1:]) - 0.5, 0)
        th = theta_oscillation(oscillation_sigma(hp, ha, dx, 1.0, False), 1.0, 0.02, dx)
        assert th[4] < prev
        prev = th[4]


def test_oscillation_smooth_refinement():
    # smooth data: 1 - theta shrinks under refinement at fixed CFL
    vals = []
    for n in (20, 40, 80):
        x = np.linspace(0, 1, n + 1)
        dx = 1.0 / n
        hp = 1 + 0.1 * np.sin(2 * np.pi * x)
        # exact cell averages of the sine
        ha = 1 + 0.1 * (np.cos(2 * np.pi * x[:-1]) - np.cos(2 * np.pi * x[1:])) / (2 * np.pi * dx)
        th = theta_oscillation(oscillation_sigma(hp, ha, dx, 1.0, True), 1.0, 0.2 * dx, dx)
        vals.append(1 - th.min())
    assert vals[0] > vals[1] > vals[2]


def test_combine_min_semantics():
    bf = combine_thetas(np.array([0.7, 0.7, 0.7]), np.array([0.7, 0.7]), np.array([0.3, 1.0]),
                        np.array([0.5, 0.5]), periodic=False)
    np.testing.assert_allclose(bf.theta_node, [0.3, 0.3, 0.7])
    np.testing.assert_allclose(bf.theta_cell, [0.3, 0.7])
    bf = combine_thetas(np.ones(3), np.ones(2), np.array([0.3, 0.2]), np.array([1e-4, 0.5]), False)
    np.testing.assert_allclose(bf.theta_oe, [1.0, 0.2])
    bf = combine_thetas(np.ones(3), np.ones(2), np.array([0.3, 0.9]), np.ones(2), periodic=True)
    assert bf.theta_node[0] == bf.theta_node[-1] == 0.3


def test_dry_velocity_branches():
    assert dry_velocity(0.0, 1.0) == 0.0
    assert dry_velocity(1e-15, 1e-16) == 0.0
    h0 = 1e-4
    assert dry_velocity(h0, 3e-4) == pytest.approx(3.0, rel=1e-15)
    assert dry_velocity(0.5, 0.25) == 0.5
    h = 5e-5
    s = h / h0
    f = 2 * s ** 3 - 3 * s ** 2 + 1
    assert dry_velocity(h, 1e-6) == pytest.approx(1e-6 * h / (h * h + f * 5e-9), rel=1e-14)
    # continuity at h0
    assert dry_velocity(h0 * (1 - 1e-9), 1e-4) == pytest.approx(1.0, rel=1e-6)
