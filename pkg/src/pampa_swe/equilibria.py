"""Discrete and analytic steady states.

* :func:`newton_recover_h` builds point values and averages whose global
  flux is exactly constant for the chosen source quadrature.
* :func:`analytic_moving_steady` solves the frictionless Bernoulli relation.
* :func:`parabolic_bowl_exact` is the periodic oscillation in a parabolic bowl.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .global_flux import SC_LOBATTO_III, normalize_quadrature, source_increments, CellSources
from .mesh import Grid, SolutionState, simpson_average
from .reconstruction import bathymetry_cells

SUBCRITICAL = "subcritical"
SUPERCRITICAL = "supercritical"


class EquilibriumError(ValueError):
    """No admissible depth for the requested data and branch."""


def critical_depth(q: float, g: float) -> float:
    return (q * q / g) ** (1.0 / 3.0)


def depth_from_momentum_flux(G: float, q: float, g: float, branch: str = SUBCRITICAL,
                             extra: float = 0.0) -> float:
    """Solve q^2/h + g h^2/2 = G + extra for h on the given branch."""
    target = G + extra
    fun = lambda h: q * q / h + 0.5 * g * h * h - target
    if q == 0.0:
        if target <= 0:
            raise EquilibriumError("momentum flux must be positive for a resting state")
        return float(np.sqrt(2.0 * target / g))
    hc = critical_depth(q, g)
    if fun(hc) > 0:
        raise EquilibriumError(f"flux {target} below the critical value {fun(hc) + target}")
    if branch == SUBCRITICAL:
        hi = hc
        while fun(hi) <= 0:
            hi *= 2.0
        return brentq(fun, hc, hi, xtol=1e-15, rtol=1e-15)
    lo = hc
    while fun(lo) <= 0:
        lo *= 0.5
    return brentq(fun, lo, hc, xtol=1e-15, rtol=1e-15)


# -- Bernoulli oracle -----------------------------------------------------

@dataclass(frozen=True)
class BernoulliCase:
    q: float
    energy: float
    branch: str
    g: float


def bernoulli_case(q: float, h_ref: float, B_ref: float, branch: str, g: float) -> BernoulliCase:
    """Energy E = q^2/(2 h^2) + g (h + B) fixed by one reference depth."""
    return BernoulliCase(q, q * q / (2.0 * h_ref * h_ref) + g * (h_ref + B_ref), branch, g)


def bernoulli_depth(B: float, case: BernoulliCase) -> float:
    """Root of g h^3 + (g B - E) h^2 + q^2/2 = 0 on the case's branch."""
    g, q, E = case.g, case.q, case.energy
    cubic = lambda h: g * h ** 3 + (g * B - E) * h * h + 0.5 * q * q
    hc = critical_depth(q, g)
    if cubic(hc) > 0:
        raise EquilibriumError(f"no {case.branch} depth at B={B}: flow would turn critical")
    if case.branch == SUBCRITICAL:
        hi = max(2.0 * hc, E / g)
        h = brentq(cubic, hc, hi, xtol=1e-15, rtol=1e-15)
    else:
        h = brentq(cubic, 1e-12 * hc, hc, xtol=1e-15, rtol=1e-15)
    # Newton polish
    for _ in range(3):
        d = 3.0 * g * h * h + 2.0 * (g * B - E) * h
        if d == 0:
            break
        h -= cubic(h) / d
    return h


def analytic_moving_steady(B_values, case: BernoulliCase):
    """Vectorized Bernoulli depth over bathymetry samples."""
    B_values = np.atleast_1d(np.asarray(B_values, dtype=float))
    return np.array([bernoulli_depth(b, case) for b in B_values])


def example3_case(which: str, g: float = 9.812) -> BernoulliCase:
    if which.upper() == "I":
        return bernoulli_case(24.0, 2.0, 0.0, SUPERCRITICAL, g)
    if which.upper() == "II":
        return bernoulli_case(4.42, 2.0, 0.0, SUBCRITICAL, g)
    raise ValueError(f"unknown case {which!r}")


# -- Newton sweep for discrete equilibria ---------------------------------

@dataclass
class EquilibriumSpec:
    """Data defining a steady state with constant second global flux component.

    ``discharge`` gives hu at any x (a constant for one-dimensional flow or
    zero for geostrophic states); ``transverse_velocity`` gives v(x) for the
    rotating model.
    """

    G2: float
    discharge: Callable | float = 0.0
    transverse_velocity: Callable | None = None
    branch: str = SUBCRITICAL


def _as_fn(value):
    if callable(value):
        return lambda x: np.asarray(value(x), dtype=float) * np.ones_like(np.asarray(x, dtype=float))
    return lambda x: np.full_like(np.asarray(x, dtype=float), float(value))


def _state(h, x, q_fn, v_fn, nvars):
    h = np.atleast_1d(np.asarray(h, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rows = [h, q_fn(x)]
    if nvars == 3:
        rows.append(h * v_fn(x))
    return np.stack(rows)


def newton_recover_h(spec: EquilibriumSpec, grid: Grid, B_fn: Callable, model,
                     quadrature: str = SC_LOBATTO_III, tol: float = 1e-13,
                     max_iter: int = 50) -> SolutionState:
    """Discrete steady state with G^(2) = spec.G2 at every node and midpoint.

    Cells are solved left to right: given h_j (and so R_j), Newton's method
    finds (h_{j+1/2}, h_{j+1}) such that the midpoint and right-node global
    fluxes equal spec.G2 under the chosen quadrature.  Averages follow from
    Simpson's rule, which keeps the midpoint of the quadratic representation
    equal to the solved midpoint value.
    """
    quadrature = normalize_quadrature(quadrature)
    nvars = model.nvars
    q_fn = _as_fn(spec.discharge)
    v_fn = _as_fn(spec.transverse_velocity if spec.transverse_velocity is not None else 0.0)
    if nvars == 2 and spec.transverse_velocity is not None:
        raise ValueError("transverse velocity needs the rotating model")
    g = model.g
    x = grid.nodes
    dx = grid.dx
    Bp = np.asarray(B_fn(x), dtype=float) * np.ones_like(x)
    Ba = simpson_average(lambda s: np.asarray(B_fn(s), dtype=float) * np.ones_like(s), x[:-1], x[1:])
    bathy = bathymetry_cells(Bp, Ba, dx)

    n = grid.n_cells
    h_nodes = np.empty(n + 1)
    h_mid = np.empty(n)
    q0 = float(q_fn(x[:1])[0])
    # R = 0 at the first node, so f2 = G2 there
    h_nodes[0] = depth_from_momentum_flux(spec.G2, q0, g, spec.branch)

    def residual(c, hj, unknowns):
        hm, hr = unknowns
        xl = x[c]
        xs = np.array([xl, xl + 0.25 * dx, xl + 0.5 * dx, xl + dx])
        hq = 0.375 * hj + 0.75 * hm - 0.125 * hr
        U = _state(np.array([hj, hq, hm, hr]), xs, q_fn, v_fn, nvars)
        # quarter point momenta follow the representation, not the pointwise data
        U[1:, 1] = 0.375 * U[1:, 0] + 0.75 * U[1:, 2] - 0.125 * U[1:, 3]
        slopes = np.array([bathy.slope0[c], bathy.slope_q[c], bathy.slope_mid[c], bathy.slope1[c]])
        S = model.source(U, xs, slopes)
        src = CellSources(S[:, 0], S[:, 1], S[:, 2], S[:, 3])
        inc = source_increments(src, dx, quadrature)
        F = model.flux(U)
        f_ref = F[1, 0]
        return np.array([F[1, 2] - inc.dR_half[1] - f_ref, F[1, 3] - inc.dR_full[1] - f_ref])

    for c in range(n):
        hj = h_nodes[c]
        z = np.array([hj, hj])
        scale = max(1.0, abs(spec.G2))
        best, best_r = z, np.inf
        polish = 0
        for _ in range(max_iter):
            r = np.max(np.abs(residual(c, hj, z)))
            if r < best_r:
                best, best_r = z, r
            elif best_r <= tol * scale:
                break
            # a few extra iterations drive the residual down to round-off
            if best_r <= tol * scale:
                polish += 1
                if polish > 3 or r == 0.0:
                    break
            J = np.empty((2, 2))
            for k in range(2):
                step = 1e-7 * max(1e-3, abs(z[k]))
                zp = z.copy()
                zp[k] += step
                zm = z.copy()
                zm[k] -= step
                J[:, k] = (residual(c, hj, zp) - residual(c, hj, zm)) / (2.0 * step)
            dz = np.linalg.solve(J, -residual(c, hj, z))
            # keep iterates positive
            lam = 1.0
            while np.any(z + lam * dz <= 0):
                lam *= 0.5
            z = z + lam * dz
        z = best
        if best_r > tol * scale:
            raise EquilibriumError(
                f"Newton failed in cell {c} (residual {best_r:.2e}); "
                f"check the branch or whether the flow turns critical")
        h_mid[c], h_nodes[c + 1] = z
        hc = critical_depth(float(q_fn(x[c + 1:c + 2])[0]), g)
        if q0 != 0.0 and ((spec.branch == SUBCRITICAL) != (h_nodes[c + 1] > hc)):
            raise EquilibriumError(f"solution crossed the critical depth in cell {c}")

    points = _state(h_nodes, x, q_fn, v_fn, nvars)
    mids = _state(h_mid, grid.centers, q_fn, v_fn, nvars)
    averages = (points[:, :-1] + 4.0 * mids + points[:, 1:]) / 6.0
    return SolutionState(grid, points, averages, Bp, Ba)


# -- parabolic bowl -------------------------------------------------------

@dataclass(frozen=True)
class BowlParams:
    h0: float = 10.0
    a: float = 3000.0
    b: float = 5.0
    g: float = 9.812

    @property
    def omega(self) -> float:
        return float(np.sqrt(2.0 * self.g * self.h0) / self.a)

    def bathymetry(self, x):
        return self.h0 * (np.asarray(x, dtype=float) / self.a) ** 2


def parabolic_bowl_exact(t: float, x, params: BowlParams = BowlParams()):
    """Return (wet, surface, depth) for the oscillating bowl at time t.

    ``surface`` equals h + B inside the wet interval and B outside it.
    """
    p = params
    x = np.asarray(x, dtype=float)
    w = p.omega
    level = (p.h0 - p.b ** 2 / (4.0 * p.g) * np.cos(2.0 * w * t) - p.b ** 2 / (4.0 * p.g)
             - p.b * x / (2.0 * p.a) * np.sqrt(8.0 * p.h0 / p.g) * np.cos(w * t))
    B = p.bathymetry(x)
    lo, hi = bowl_fronts(t, p)
    wet = (x >= lo) & (x <= hi) & (level > B)
    depth = np.where(wet, np.maximum(level - B, 0.0), 0.0)
    return wet, np.where(wet, level, B), depth


def bowl_fronts(t: float, params: BowlParams = BowlParams()):
    p = params
    shift = -p.b * p.omega * p.a ** 2 / (2.0 * p.g * p.h0) * np.cos(p.omega * t)
    return shift - p.a, shift + p.a


def bowl_exact_mass(t: float, params: BowlParams = BowlParams()) -> float:
    """Closed-form integral of the exact depth over the wet interval."""
    p = params
    lo, hi = bowl_fronts(t, p)
    w = p.omega
    c0 = p.h0 - p.b ** 2 / (4.0 * p.g) * np.cos(2.0 * w * t) - p.b ** 2 / (4.0 * p.g)
    c1 = -p.b / (2.0 * p.a) * np.sqrt(8.0 * p.h0 / p.g) * np.cos(w * t)
    c2 = -p.h0 / p.a ** 2
    F = lambda s: c0 * s + 0.5 * c1 * s * s + c2 * s ** 3 / 3.0
    return float(F(hi) - F(lo))


# -- geostrophic checks ---------------------------------------------------

def geostrophic_flat_depth(x, far_field: float = 2.0):
    """Continuous depth for v = 2 g/f x exp(-x^2) over a flat bottom."""
    return far_field - np.exp(-np.asarray(x, dtype=float) ** 2)


def geostrophic_residual(h, B, v, x, f: float, g: float):
    """g (h + B)_x - f v via centered differences (interior samples)."""
    w = np.asarray(h) + np.asarray(B)
    dwdx = np.gradient(w, x)
    return g * dwdx - f * np.asarray(v)


__all__ = ["SUBCRITICAL", "SUPERCRITICAL", "EquilibriumError", "EquilibriumSpec", "BernoulliCase",
           "bernoulli_case", "bernoulli_depth", "analytic_moving_steady", "example3_case",
           "newton_recover_h", "depth_from_momentum_flux", "critical_depth", "BowlParams",
           "parabolic_bowl_exact", "bowl_fronts", "bowl_exact_mass", "geostrophic_flat_depth",
           "geostrophic_residual"]
