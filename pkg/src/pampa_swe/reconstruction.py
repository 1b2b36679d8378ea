"""Quadratic in-cell representation built from two point values and an average.

On a cell with local coordinate xi in [0, 1] the representation is

    u(xi) = phi_L(xi) u_L + phi_bar(xi) u_bar + phi_R(xi) u_R

with phi_L = (1 - xi)(1 - 3 xi), phi_bar = 6 xi (1 - xi), phi_R = xi (3 xi - 2).
Arrays follow the component-first convention; the limiter acts on row 0 (h).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS_H_CAP = 1e-13


def basis_eval(xi):
    """Return (phi_L, phi_bar, phi_R) at ``xi``."""
    xi = np.asarray(xi, dtype=float)
    if np.any((xi < 0.0) | (xi > 1.0)):
        raise ValueError("local coordinate must lie in [0, 1]")
    return (1.0 - xi) * (1.0 - 3.0 * xi), 6.0 * xi * (1.0 - xi), xi * (3.0 * xi - 2.0)


def basis_derivative(xi):
    """d/dxi of the three basis functions."""
    xi = np.asarray(xi, dtype=float)
    return 6.0 * xi - 4.0, 6.0 - 12.0 * xi, 6.0 * xi - 2.0


def evaluate(u_left, u_avg, u_right, xi):
    pl, pb, pr = basis_eval(xi)
    return pl * u_left + pb * u_avg + pr * u_right


def midpoint_unlimited(u_left, u_avg, u_right):
    return 1.5 * u_avg - 0.25 * (u_left + u_right)


def quarter_unlimited(u_left, u_avg, u_right):
    """Representation at xi = 1/4."""
    return 0.1875 * u_left + 1.125 * u_avg - 0.3125 * u_right


def eps_h(h_avg):
    """Per-cell positivity floor min(1e-13, h_bar)."""
    return np.minimum(EPS_H_CAP, h_avg)


def scaling_eta(h_avg, h_target):
    """Scaling factor toward the average that lifts ``h_target`` to eps_h.

    eta = 1 unless h_target < eps_h; then eta = (h_bar - eps_h) / (h_bar - h_target).
    A vanishing denominator means nothing to limit and also gives eta = 1.
    """
    h_avg = np.asarray(h_avg, dtype=float)
    h_target = np.asarray(h_target, dtype=float)
    eps = eps_h(h_avg)
    denom = h_avg - h_target
    active = (h_target < eps) & (denom > 0.0)
    safe = np.where(active, denom, 1.0)
    eta = np.where(active, (h_avg - eps) / safe, 1.0)
    return np.clip(eta, 0.0, 1.0)


def scale_toward_average(u_avg, u_target):
    """(1 - eta) u_bar + eta u_target with eta from the h row."""
    eta = scaling_eta(u_avg[0], u_target[0])
    return u_avg + eta * (u_target - u_avg), eta


def pp_scale_midpoint(u_left, u_avg, u_right):
    """Positivity-limited midpoint value and its scaling factor."""
    return scale_toward_average(u_avg, midpoint_unlimited(u_left, u_avg, u_right))


def quarter_point(u_left, u_avg, u_right):
    """Positivity-limited value at xi = 1/4."""
    return scale_toward_average(u_avg, quarter_unlimited(u_left, u_avg, u_right))[0]


@dataclass
class CellValues:
    """Reconstructed values for every cell of a (possibly extended) mesh."""

    left: np.ndarray
    avg: np.ndarray
    right: np.ndarray
    mid: np.ndarray
    quarter: np.ndarray
    eta_mid: np.ndarray


def reconstruct_cells(points, averages) -> CellValues:
    """Limited midpoints and quarter points for cells between consecutive nodes."""
    left, right = points[:, :-1], points[:, 1:]
    mid, eta = pp_scale_midpoint(left, averages, right)
    quarter = quarter_point(left, averages, right)
    return CellValues(left, averages, right, mid, quarter, eta)


@dataclass
class BathymetryCell:
    """Bathymetry values and slopes at xi = 0, 1/4, 1/2, 1 for each cell."""

    left: np.ndarray
    avg: np.ndarray
    right: np.ndarray
    mid: np.ndarray
    slope0: np.ndarray
    slope_q: np.ndarray
    slope_mid: np.ndarray
    slope1: np.ndarray


def bathymetry_cells(bathy_points, bathy_averages, dx: float) -> BathymetryCell:
    """Exact slopes of the (unlimited) quadratic bathymetry representation."""
    bl, br, bb = bathy_points[:-1], bathy_points[1:], bathy_averages
    return BathymetryCell(
        left=bl, avg=bb, right=br,
        mid=midpoint_unlimited(bl, bb, br),
        slope0=(-4.0 * bl + 6.0 * bb - 2.0 * br) / dx,
        slope_q=(-2.5 * bl + 3.0 * bb - 0.5 * br) / dx,
        slope_mid=(br - bl) / dx,
        slope1=(2.0 * bl - 6.0 * bb + 4.0 * br) / dx,
    )


def derivative_jumps(h_points, h_avg, periodic: bool):
    """Jumps of dx^m d^m h / dx^m, m = 1, 2, across each node.

    Returns two arrays of length n_nodes.  The m = 0 jump vanishes because
    the representation is continuous.  End nodes get zero jumps unless the
    mesh is periodic.
    """
    hl, hr = h_points[:-1], h_points[1:]
    d_left_end = -4.0 * hl + 6.0 * h_avg - 2.0 * hr
    d_right_end = 2.0 * hl - 6.0 * h_avg + 4.0 * hr
    curv = 6.0 * hl - 12.0 * h_avg + 6.0 * hr
    n_nodes = h_points.shape[-1]
    j1 = np.zeros(n_nodes)
    j2 = np.zeros(n_nodes)
    j1[1:-1] = d_left_end[1:] - d_right_end[:-1]
    j2[1:-1] = curv[1:] - curv[:-1]
    if periodic:
        j1[0] = j1[-1] = d_left_end[0] - d_right_end[-1]
        j2[0] = j2[-1] = curv[0] - curv[-1]
    return j1, j2


def sup_deviation(h_points, h_avg, mean):
    """max |h_h - mean| over nodes and interior extrema of each parabola."""
    hl, hr = h_points[:-1], h_points[1:]
    a = 3.0 * hl - 6.0 * h_avg + 3.0 * hr   # coefficient of xi^2
    b = -4.0 * hl + 6.0 * h_avg - 2.0 * hr  # coefficient of xi
    safe = np.where(a != 0.0, a, 1.0)
    xi_star = np.where(a != 0.0, -b / (2.0 * safe), -1.0)
    inside = (xi_star > 0.0) & (xi_star < 1.0)
    xi_c = np.where(inside, xi_star, 0.0)
    h_star = np.where(inside, hl + b * xi_c + a * xi_c * xi_c, hl)
    return max(np.max(np.abs(h_points - mean)), np.max(np.abs(h_star - mean)))
