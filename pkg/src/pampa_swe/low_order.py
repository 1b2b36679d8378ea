"""First-order fluxes and point residuals built on hydrostatic reconstruction.

Every function here is vectorized over trailing axes.  States are rebuilt
from a reconstructed depth and the velocities of the donor DoF, which keeps
still water exact and the depth of every reconstructed state between zero
and the donor depth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def with_depth(h, u_donor, model):
    """State with depth ``h`` and the (filtered) velocities of ``u_donor``."""
    vels = model.velocities(u_donor)
    return np.stack([h] + [h * v for v in vels])


def llf_flux(u_plus, u_minus, alpha, model):
    """Local Lax-Friedrichs flux 0.5 (f(u+) + f(u-)) - 0.5 alpha (u+ - u-)."""
    return 0.5 * (model.flux(u_plus) + model.flux(u_minus)) - 0.5 * alpha * (u_plus - u_minus)


@dataclass
class ReconstructedPair:
    """Two one-sided states at a location, plus the wave speed bound."""

    u_plus: np.ndarray
    u_minus: np.ndarray
    B_plus: np.ndarray
    B_minus: np.ndarray
    alpha: np.ndarray

    @property
    def h_plus(self):
        return self.u_plus[0]

    @property
    def h_minus(self):
        return self.u_minus[0]


def hydrostatic_interface(avg_left, avg_right, B_left, B_right, model) -> ReconstructedPair:
    """Interface states at a node from the two adjacent cell averages."""
    B_max = np.maximum(B_right, B_left)
    w_right = avg_right[0] + B_right
    w_left = avg_left[0] + B_left
    B_plus = np.minimum(w_right, B_max)
    B_minus = np.minimum(w_left, B_max)
    u_plus = with_depth(w_right - B_plus, avg_right, model)
    u_minus = with_depth(w_left - B_minus, avg_left, model)
    alpha = np.maximum.reduce([model.max_wave_speed(u_plus), model.max_wave_speed(u_minus),
                               model.max_wave_speed(avg_left), model.max_wave_speed(avg_right)])
    return ReconstructedPair(u_plus, u_minus, B_plus, B_minus, alpha)


def quarter_states_right(u_node, B_node, avg_right, B_avg_right, model) -> ReconstructedPair:
    """States at x_{j+1/4}: '+' from the cell average, '-' from the node."""
    B_max = np.maximum(B_avg_right, B_node)
    w_cell = avg_right[0] + B_avg_right
    w_node = u_node[0] + B_node
    B_plus = np.minimum(w_cell, B_max)
    B_minus = np.minimum(w_node, B_max)
    u_plus = with_depth(w_cell - B_plus, avg_right, model)
    u_minus = with_depth(w_node - B_minus, u_node, model)
    alpha = np.maximum.reduce([model.max_wave_speed(u_plus), model.max_wave_speed(u_minus),
                               model.max_wave_speed(u_node), model.max_wave_speed(avg_right)])
    return ReconstructedPair(u_plus, u_minus, B_plus, B_minus, alpha)


def quarter_states_left(u_node, B_node, avg_left, B_avg_left, model) -> ReconstructedPair:
    """States at x_{j-1/4}: '+' from the node, '-' from the cell average."""
    B_max = np.maximum(B_avg_left, B_node)
    w_cell = avg_left[0] + B_avg_left
    w_node = u_node[0] + B_node
    B_plus = np.minimum(w_node, B_max)
    B_minus = np.minimum(w_cell, B_max)
    u_plus = with_depth(w_node - B_plus, u_node, model)
    u_minus = with_depth(w_cell - B_minus, avg_left, model)
    alpha = np.maximum.reduce([model.max_wave_speed(u_plus), model.max_wave_speed(u_minus),
                               model.max_wave_speed(u_node), model.max_wave_speed(avg_left)])
    return ReconstructedPair(u_plus, u_minus, B_plus, B_minus, alpha)


def _momentum(values, nvars):
    """Vector with ``values`` in the momentum row and zeros elsewhere."""
    out = np.zeros((nvars,) + np.shape(values))
    out[1] = values
    return out


@dataclass
class LowOrderFluxes:
    """Left/right low-order fluxes of every cell relative to R at its left node."""

    left: np.ndarray
    right: np.ndarray
    interfaces: ReconstructedPair
    llf: np.ndarray


def low_order_cell_fluxes(avg_ext, B_avg_ext, x_nodes, dx, dR_half, model) -> LowOrderFluxes:
    """Low-order left/right fluxes for each interior cell.

    ``avg_ext`` and ``B_avg_ext`` carry one ghost cell per side, so node j
    sits between extended cells j and j + 1.  Both returned fluxes have the
    shared midpoint primitive R_{j+1/2} removed (as dR_half relative to R_j).
    """
    g = model.g
    nv = avg_ext.shape[0]
    iface = hydrostatic_interface(avg_ext[:, :-1], avg_ext[:, 1:], B_avg_ext[:-1], B_avg_ext[1:], model)
    F = llf_flux(iface.u_plus, iface.u_minus, iface.alpha, model)

    avg = avg_ext[:, 1:-1]
    h_bar, B_bar = avg[0], B_avg_ext[1:-1]
    x_mid = 0.5 * (x_nodes[:-1] + x_nodes[1:])
    s_avg = model.extra_source(avg, x_mid)

    u_p = iface.u_plus[:, :-1]      # right-cell state at the cell's left node
    u_m = iface.u_minus[:, 1:]      # left-cell state at the cell's right node
    s_p = model.extra_source(u_p, x_nodes[:-1])
    s_m = model.extra_source(u_m, x_nodes[1:])

    left = (F[:, :-1]
            - _momentum(g * 0.5 * (h_bar + u_p[0]) * (B_bar - iface.B_plus[:-1]), nv)
            + 0.25 * dx * (s_avg + s_p) - dR_half)
    right = (F[:, 1:]
             + _momentum(g * 0.5 * (u_m[0] + h_bar) * (iface.B_minus[1:] - B_bar), nv)
             - 0.25 * dx * (s_avg + s_m) - dR_half)
    return LowOrderFluxes(left, right, iface, F)


@dataclass
class LowOrderResiduals:
    """psi = (dx/2) Phi for both residuals at every node."""

    from_left: np.ndarray    # dx/2 * Phi->_{j-1/2}
    from_right: np.ndarray   # dx/2 * Phi<-_{j+1/2}
    quarter_left: ReconstructedPair
    quarter_right: ReconstructedPair


def low_order_point_residuals(points, B_points, avg_ext, B_avg_ext, x_nodes, dx, model) -> LowOrderResiduals:
    """Scaled low-order residuals at every node.

    The point update reads du_j/dt = -(2/dx) (from_left_j + from_right_j).
    Node j uses the extended cells j (left) and j + 1 (right).
    """
    g = model.g
    nv = points.shape[0]
    ql = quarter_states_left(points, B_points, avg_ext[:, :-1], B_avg_ext[:-1], model)
    qr = quarter_states_right(points, B_points, avg_ext[:, 1:], B_avg_ext[1:], model)
    f_node = model.flux(points)
    s_node = model.extra_source(points, x_nodes)

    x_ql = x_nodes - 0.25 * dx
    x_qr = x_nodes + 0.25 * dx
    F_l = llf_flux(ql.u_plus, ql.u_minus, ql.alpha, model)
    F_r = llf_flux(qr.u_plus, qr.u_minus, qr.alpha, model)
    s_ql = model.extra_source(ql.u_plus, x_ql)
    s_qr = model.extra_source(qr.u_minus, x_qr)

    h = points[0]
    from_left = (f_node - F_l
                 + _momentum(g * 0.5 * (h + ql.h_plus) * (B_points - ql.B_plus), nv)
                 - 0.125 * dx * (s_node + s_ql))
    from_right = (F_r - f_node
                  + _momentum(g * 0.5 * (qr.h_minus + h) * (qr.B_minus - B_points), nv)
                  - 0.125 * dx * (s_qr + s_node))
    return LowOrderResiduals(from_left, from_right, ql, qr)
