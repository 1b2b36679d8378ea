"""Semi-discrete right-hand side of the blended scheme.

One call evaluates, for given point values and averages, every ingredient
of an explicit stage: ghost layer, reconstruction, source increments, low
and high order fluxes and residuals, blending coefficients, and the final
time derivatives of all averages and point values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .global_flux import (SC_LOBATTO_III, assemble_global_flux, cell_sources, local_flux,
                          normalize_quadrature, source_increments)
from .high_order import high_order_point_residuals
from .limiting import (BlendFactors, combine_thetas, oscillation_sigma, steady_indicator,
                       theta_flux, theta_oscillation, theta_residual)
from .low_order import low_order_cell_fluxes, low_order_point_residuals
from .mesh import BoundaryCondition, SolutionState, extend
from .reconstruction import bathymetry_cells, reconstruct_cells

HIGH_BLENDED = "high_blended"
LOW_ONLY = "low_only"
HIGH_UNLIMITED = "high_unlimited"
ORDERS = (HIGH_BLENDED, LOW_ONLY, HIGH_UNLIMITED)

_ORDER_ALIASES = {"high": HIGH_BLENDED, "high_blended": HIGH_BLENDED, "blended": HIGH_BLENDED,
                  "low": LOW_ONLY, "low_only": LOW_ONLY,
                  "unlimited": HIGH_UNLIMITED, "high_unlimited": HIGH_UNLIMITED}


def normalize_order(name: str) -> str:
    key = str(name).lower()
    if key not in _ORDER_ALIASES:
        raise ValueError(f"unknown order {name!r}")
    return _ORDER_ALIASES[key]


@dataclass(frozen=True)
class SchemeOptions:
    quadrature: str = SC_LOBATTO_III
    order: str = HIGH_BLENDED
    oscillation_elimination: bool = True

    def __post_init__(self):
        object.__setattr__(self, "quadrature", normalize_quadrature(self.quadrature))
        object.__setattr__(self, "order", normalize_order(self.order))


@dataclass
class StageResult:
    """Time derivatives and the intermediate quantities behind them."""

    d_points: np.ndarray
    d_averages: np.ndarray
    blend: BlendFactors
    theta_left_side: np.ndarray
    theta_right_side: np.ndarray
    extras: dict = field(default_factory=dict)


def _cell_side_thetas(th_l, th_r, oe, periodic):
    """Per-cell residual theta and its copies on each node side."""
    theta_cell = np.minimum(np.minimum(th_r[:-1], th_l[1:]), oe)
    n = theta_cell.shape[0]
    left_side = np.empty(n + 1)
    right_side = np.empty(n + 1)
    left_side[1:] = theta_cell
    right_side[:-1] = theta_cell
    if periodic:
        left_side[0] = theta_cell[-1]
        right_side[-1] = theta_cell[0]
    else:
        left_side[0] = min(th_l[0], oe[0])
        right_side[-1] = min(th_r[-1], oe[-1])
    return theta_cell, left_side, right_side


def evaluate_rhs(state: SolutionState, model, bc: BoundaryCondition, options: SchemeOptions,
                 dt: float, want_extras: bool = False) -> StageResult:
    """Time derivatives of point values and averages for one explicit stage.

    ``dt`` only enters the oscillation-elimination factor.
    """
    grid = state.grid
    dx = grid.dx
    x_nodes = grid.nodes
    periodic = bc.periodic
    points, averages = state.points, state.averages
    Bp, Ba = state.bathy_points, state.bathy_averages

    _, avg_ext = extend(points, averages, bc)
    _, Ba_ext = extend(Bp, Ba, BoundaryCondition.make_periodic() if periodic else BoundaryCondition())

    cells = reconstruct_cells(points, averages)
    bathy = bathymetry_cells(Bp, Ba, dx)
    sources = cell_sources(cells, bathy, x_nodes[:-1], dx, model)
    inc = source_increments(sources, dx, options.quadrature)
    lf = local_flux(cells, inc, model)

    lo_flux = low_order_cell_fluxes(avg_ext, Ba_ext, x_nodes, dx, inc.dR_half, model)
    lo_res = low_order_point_residuals(points, Bp, avg_ext, Ba_ext, x_nodes, dx, model)
    ho_left, ho_right, wet = high_order_point_residuals(points, lf, dx, model, periodic)

    dG_left = lf.g0 - lo_flux.left
    dG_right = lf.g1 - lo_flux.right
    d_res_left = ho_left - lo_res.from_left
    d_res_right = ho_right - lo_res.from_right

    n = grid.n_cells
    order = options.order
    if order == LOW_ONLY:
        blend = BlendFactors(np.zeros(n + 1), np.zeros(n), np.ones(n))
        th_ls = np.zeros(n + 1)
        th_rs = np.zeros(n + 1)
    elif order == HIGH_UNLIMITED:
        blend = BlendFactors(np.ones(n + 1), np.ones(n), np.ones(n))
        th_ls = wet.astype(float)
        th_rs = wet.astype(float)
    else:
        vel_avg = model.velocity(avg_ext)
        iface = lo_flux.interfaces
        llf1 = lo_flux.llf[0]
        dg1_node = points[1] - llf1
        th_node = theta_flux(dg1_node, iface.h_plus, iface.h_minus, vel_avg[1:], vel_avg[:-1],
                             iface.alpha, scale=np.abs(points[1]) + np.abs(llf1))
        ql, qr = lo_res.quarter_left, lo_res.quarter_right
        th_l, th_r = theta_residual(d_res_left[0], d_res_right[0], ql.h_minus, qr.h_plus,
                                    vel_avg[:-1], vel_avg[1:], ql.alpha, qr.alpha,
                                    scale=np.abs(lo_res.from_left[0]) + np.abs(ho_left[0])
                                    + np.abs(lo_res.from_right[0]) + np.abs(ho_right[0]))
        if options.oscillation_elimination and dt > 0:
            field_g = assemble_global_flux(cells, inc, model)
            H = steady_indicator(field_g.G_nodes[1, :-1], field_g.G_mid[1], field_g.G_nodes[1, 1:],
                                 dx, grid.length)
            sigma = oscillation_sigma(points[0], averages[0], dx, grid.length, periodic)
            alpha_cell = np.maximum.reduce([model.max_wave_speed(cells.left),
                                            model.max_wave_speed(averages),
                                            model.max_wave_speed(cells.right)])
            oe_raw = theta_oscillation(sigma, alpha_cell, dt, dx)
        else:
            H = np.zeros(n)
            oe_raw = np.ones(n)
        blend0 = combine_thetas(th_node, np.ones(n), oe_raw, H, periodic)
        theta_cell, th_ls, th_rs = _cell_side_thetas(th_l, th_r, blend0.theta_oe, periodic)
        blend = BlendFactors(blend0.theta_node, theta_cell, blend0.theta_oe)
        th_ls = np.where(wet, th_ls, 0.0)
        th_rs = np.where(wet, th_rs, 0.0)

    tn = blend.theta_node
    flux_left = lo_flux.left + tn[:-1] * dG_left
    flux_right = lo_flux.right + tn[1:] * dG_right
    d_avg = -(flux_right - flux_left) / dx

    psi_left = lo_res.from_left + th_ls * d_res_left
    psi_right = lo_res.from_right + th_rs * d_res_right
    d_pts = -(2.0 / dx) * (psi_left + psi_right)

    extras = {}
    if want_extras:
        extras = dict(cells=cells, bathy=bathy, sources=sources, increments=inc, local_flux=lf,
                      low_fluxes=lo_flux, low_residuals=lo_res, ho_left=ho_left, ho_right=ho_right,
                      wet=wet, global_flux=assemble_global_flux(cells, inc, model))
    return StageResult(d_pts, d_avg, blend, th_ls, th_rs, extras)


def _model_params(model):
    from .models import RotatingShallowWater
    if isinstance(model, RotatingShallowWater):
        return 1, model.g, 0.0, model.f0, model.beta
    return 0, model.g, getattr(model, "manning", 0.0), 0.0, 0.0


def _bc_arrays(bc: BoundaryCondition, nvars: int):
    lm = np.zeros(3, dtype=np.bool_)
    lv = np.zeros(3)
    rm = np.zeros(3, dtype=np.bool_)
    rv = np.zeros(3)
    for k, val in bc.left_values.items():
        lm[k], lv[k] = True, val
    for k, val in bc.right_values.items():
        rm[k], rv[k] = True, val
    return lm, lv, rm, rv


_ORDER_CODES = {HIGH_BLENDED: 0, LOW_ONLY: 1, HIGH_UNLIMITED: 2}


def evaluate_rhs_fast(state: SolutionState, model, bc: BoundaryCondition, options: SchemeOptions,
                      dt: float):
    """Compiled counterpart of :func:`evaluate_rhs`.

    Returns (d_points, d_averages, theta_node, theta_cell, theta_oe).
    """
    from ._kernel import rhs_kernel
    kind, g, manning, f0, beta = _model_params(model)
    lm, lv, rm, rv = _bc_arrays(bc, state.nvars)
    grid = state.grid
    return rhs_kernel(state.points, state.averages, state.bathy_points, state.bathy_averages,
                      grid.nodes, grid.dx, grid.length, kind, g, manning, f0, beta,
                      bc.periodic, lm, lv, rm, rv, 0 if options.quadrature == SC_LOBATTO_III else 1,
                      _ORDER_CODES[options.order], options.oscillation_elimination, float(dt))
