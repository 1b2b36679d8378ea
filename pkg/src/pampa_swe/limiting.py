"""Blending coefficients between the low and high order updates.

Positivity coefficients bound the high-minus-low corrections of the mass
component by the non-negative parts of the low order update.  The
oscillation factor damps the high order part where the depth has large
derivative jumps, and is switched off near discrete steady states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .drying import dry_velocity  # noqa: F401  re-exported
from .reconstruction import derivative_jumps, sup_deviation

GUARD_REL = 1e-14
STEADY_C = 10.0
STEADY_KAPPA = 20
STEADY_THRESHOLD = 1e-3


def _ratio_bound(budget, delta, scale):
    """min(1, budget / |delta|), or 1 where |delta| is negligible."""
    delta = np.abs(delta)
    inactive = delta <= GUARD_REL * np.abs(scale)
    safe = np.where(inactive, 1.0, delta)
    return np.where(inactive, 1.0, np.clip(np.maximum(budget, 0.0) / safe, 0.0, 1.0))


def theta_flux(delta_g1, h_plus, h_minus, u_bar_right, u_bar_left, alpha, scale=0.0):
    """Flux blending coefficient at a node.

    ``delta_g1`` is the mass component of the high minus low order flux;
    ``scale`` sets the magnitude below which the difference counts as zero.
    """
    b_right = 0.5 * h_plus * (alpha - u_bar_right)
    b_left = 0.5 * h_minus * (alpha + u_bar_left)
    return np.minimum(_ratio_bound(b_right, delta_g1, scale), _ratio_bound(b_left, delta_g1, scale))


def theta_residual(delta_from_left, delta_from_right, h_cell_side_left, h_cell_side_right,
                   u_bar_left, u_bar_right, alpha_left, alpha_right, scale=0.0):
    """Residual coefficients at a node, one per adjacent cell.

    ``delta_from_left`` is the mass component of the high minus low order
    scaled residual coming from the cell on the left of the node and
    ``h_cell_side_left`` the depth of the cell-average side state at
    x_j - dx/4 (likewise on the right at x_j + dx/4).  Returns
    (theta for the left cell, theta for the right cell).
    """
    th_l = _ratio_bound(0.5 * h_cell_side_left * (alpha_left + u_bar_left), delta_from_left, scale)
    th_r = _ratio_bound(0.5 * h_cell_side_right * (alpha_right - u_bar_right), delta_from_right, scale)
    return th_l, th_r


def steady_indicator(g2_left, g2_mid, g2_right, dx, domain_length,
                     C: float = STEADY_C, kappa: int = STEADY_KAPPA):
    """H(phi) = (C phi)^k / (1 + (C phi)^k) per cell, from the second G component."""
    denom = np.maximum.reduce([np.abs(g2_left), np.abs(g2_mid), np.abs(g2_right)])
    steady = denom < 1e-14
    phi = (g2_right - g2_left) / dx * domain_length / np.where(steady, 1.0, denom)
    z = np.abs(C * phi)
    # z^k / (1 + z^k) written to avoid overflow for large z
    with np.errstate(over="ignore", divide="ignore"):
        inv = np.where(z > 0, z ** (-float(kappa)), np.inf)
    H = np.where(z > 0, 1.0 / (1.0 + inv), 0.0)
    return np.where(steady, 0.0, H)


def oscillation_sigma(h_points, h_avg, dx, domain_length, periodic: bool):
    """sigma per cell from depth derivative jumps at its two nodes."""
    mean = dx * np.sum(h_avg) / domain_length
    norm = sup_deviation(h_points, h_avg, mean)
    n = h_avg.shape[-1]
    if not norm > 0.0:
        return np.zeros(n)
    j1, j2 = derivative_jumps(h_points, h_avg, periodic)
    # m = 0 jump is zero for the continuous representation
    jumps = np.abs(j1) + np.abs(j2)
    return (jumps[:-1] + jumps[1:]) / (2.0 * norm)


def theta_oscillation(sigma, alpha_cell, dt, dx):
    return np.exp(-alpha_cell * dt * sigma / dx)


@dataclass
class BlendFactors:
    theta_node: np.ndarray
    theta_cell: np.ndarray
    theta_oe: np.ndarray


def combine_thetas(theta_pp_node, theta_pp_cell, theta_oe_raw, steady_H, periodic: bool) -> BlendFactors:
    """Fold the oscillation factor into the positivity coefficients.

    Cells with H <= 1e-3 keep theta_oe = 1.  A node takes the minimum over
    its two adjacent cells (one at a non-periodic end).
    """
    oe = np.where(steady_H <= STEADY_THRESHOLD, 1.0, theta_oe_raw)
    n = oe.shape[-1]
    node_oe = np.ones(n + 1)
    node_oe[1:-1] = np.minimum(oe[:-1], oe[1:])
    if periodic:
        node_oe[0] = node_oe[-1] = min(oe[0], oe[-1])
    else:
        node_oe[0], node_oe[-1] = oe[0], oe[-1]
    return BlendFactors(np.minimum(theta_pp_node, node_oe), np.minimum(theta_pp_cell, oe), oe)
