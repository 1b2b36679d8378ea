"""Upwinded point residuals from one-sided differences of the global flux."""

from __future__ import annotations

import numpy as np

from .global_flux import LocalFlux

# nodes shallower than this fall back to low order residuals
HO_DRY_H = 1e-10
SONIC_REL_TOL = 1e-8


def sign_ratios(lam, tol):
    """lambda^+/lambda as 1, 0 or 1/2 (inside the sonic band)."""
    return np.where(lam > tol, 1.0, np.where(lam < -tol, 0.0, 0.5))


def sign_matrices(u, model, sonic_tol=None):
    """J+ = R diag(ratio) R^-1 and J- = I - J+ at each state.

    ``u`` has shape (nvars, ...); returned matrices have shape (..., nvars, nvars).
    The default sonic tolerance is 1e-8 * max(1, |u| + c).
    """
    lam, R, Rinv = model.eigenstructure(u)
    if sonic_tol is None:
        sonic_tol = SONIC_REL_TOL * np.maximum(1.0, model.max_wave_speed(u))
    ratio = sign_ratios(lam, sonic_tol)
    ratio = np.moveaxis(ratio, 0, -1)
    jp = np.einsum("...ik,...k,...kj->...ij", R, ratio, Rinv)
    jm = np.eye(R.shape[-1]) - jp
    return jp, jm


def biased_derivatives(g_left, g_mid, g_right, dx):
    """One-sided second order derivatives at the right end and left end of a cell.

    Returns (d_plus, d_minus): d_plus = (G_0 - 4 G_1/2 + 3 G_1)/dx is the
    derivative at x_1 from the cell to its left; d_minus = (-3 G_0 + 4 G_1/2 - G_1)/dx
    is the derivative at x_0 from the cell to its right.
    """
    d_plus = (g_left - 4.0 * g_mid + 3.0 * g_right) / dx
    d_minus = (-3.0 * g_left + 4.0 * g_mid - g_right) / dx
    return d_plus, d_minus


def node_derivatives(lf: LocalFlux, dx, periodic: bool):
    """d+G and d-G at every node.

    Outside a non-periodic domain G is held constant, so the outward
    derivative at each end node is zero.
    """
    d_plus_cell, d_minus_cell = biased_derivatives(lf.g0, lf.gm, lf.g1, dx)
    nv, n = d_plus_cell.shape
    d_plus = np.zeros((nv, n + 1))
    d_minus = np.zeros((nv, n + 1))
    d_plus[:, 1:] = d_plus_cell
    d_minus[:, :-1] = d_minus_cell
    if periodic:
        d_plus[:, 0] = d_plus_cell[:, -1]
        d_minus[:, -1] = d_minus_cell[:, 0]
    return d_plus, d_minus


def wet_mask(points):
    return points[0] > HO_DRY_H


def high_order_point_residuals(points, lf: LocalFlux, dx, model, periodic: bool):
    """Scaled residuals (dx/2) J+ d+G and (dx/2) J- d-G at every node.

    Returns (from_left, from_right, wet) where ``wet`` marks nodes with a
    defined eigenstructure; residuals at the other nodes are zero and must
    be replaced by the low order ones.
    """
    d_plus, d_minus = node_derivatives(lf, dx, periodic)
    wet = wet_mask(points)
    from_left = np.zeros_like(points)
    from_right = np.zeros_like(points)
    if np.any(wet):
        jp, jm = sign_matrices(points[:, wet], model)
        from_left[:, wet] = 0.5 * dx * np.einsum("kij,jk->ik", jp, d_plus[:, wet])
        from_right[:, wet] = 0.5 * dx * np.einsum("kij,jk->ik", jm, d_minus[:, wet])
    return from_left, from_right, wet


def high_order_node_fluxes(lf: LocalFlux):
    """High order fluxes at the left and right node of every cell, relative to R_left."""
    return lf.g0, lf.g1

