"""Explicit time stepping: CFL control, Euler stages and the SSP-RK3 driver."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .global_flux import SC_LOBATTO_III, assemble_global_flux, cell_sources, source_increments
from .mesh import BoundaryCondition, SolutionState
from .reconstruction import bathymetry_cells, reconstruct_cells
from .scheme import HIGH_BLENDED, HIGH_UNLIMITED, SchemeOptions, evaluate_rhs, evaluate_rhs_fast

log = logging.getLogger(__name__)

CFL_MAX = 0.25
NEG_TOL = 1e-14


class SolverError(RuntimeError):
    """Raised on NaN or a genuinely negative depth after a stage."""


@dataclass
class StepControls:
    """Time stepping parameters.

    ``backend`` selects the compiled kernel or the NumPy reference path.
    ``steady_tol``: when positive, stop once the largest relative change of
    any DoF over one step drops below it (the state is then a numerical
    steady state up to round-off).
    ``compensated`` carries the rounding error of each step increment into
    the next step, so long runs toward a steady state do not stall once the
    increments fall below half an ulp of the state.
    """

    cfl: float = 0.2
    t_final: float = 1.0
    max_steps: int = 10_000_000
    quadrature: str = SC_LOBATTO_III
    order: str = HIGH_BLENDED
    oscillation_elimination: bool = True
    steady_tol: float = 0.0
    backend: str = "compiled"
    compensated: bool = True

    def __post_init__(self):
        if self.backend not in ("compiled", "numpy"):
            raise ValueError(f"unknown backend {self.backend!r}")
        self.options = SchemeOptions(self.quadrature, self.order, self.oscillation_elimination)
        self.quadrature, self.order = self.options.quadrature, self.options.order
        if not 0 < self.cfl:
            raise ValueError("cfl must be positive")
        if self.cfl > CFL_MAX and self.order != HIGH_UNLIMITED:
            raise ValueError(f"cfl {self.cfl} exceeds {CFL_MAX}, the positivity bound")
        if self.t_final < 0:
            raise ValueError("t_final must be non-negative")


def max_speed(state: SolutionState, model) -> float:
    return float(max(np.max(model.max_wave_speed(state.points)),
                     np.max(model.max_wave_speed(state.averages))))


def compute_dt(state: SolutionState, model, controls: StepControls) -> float:
    """cfl * dx / alpha_max, clipped so that t_final is hit exactly."""
    alpha = max_speed(state, model)
    dt = controls.cfl * state.grid.dx / (alpha if alpha > 0 else 1.0)
    remaining = controls.t_final - state.time
    return max(0.0, min(dt, remaining))


def _sanitize(points, averages, stage_label):
    """Clip round-off negatives of the depth; abort on NaN or true negatives.

    Returns the smallest depth seen before clipping.
    """
    for name, arr in (("point", points), ("average", averages)):
        bad = ~np.isfinite(arr)
        if np.any(bad):
            idx = int(np.argwhere(bad.any(axis=0))[0, 0])
            raise SolverError(f"non-finite {name} value at index {idx} ({stage_label})")
    scale = max(1.0, float(np.max(averages[0])), float(np.max(points[0])))
    raw_min = float(min(points[0].min(), averages[0].min()))
    for name, arr in (("point", points), ("average", averages)):
        h = arr[0]
        neg = h < 0.0
        if np.any(neg):
            worst = int(np.argmin(h))
            if h[worst] < -NEG_TOL * scale:
                raise SolverError(f"negative depth {h[worst]:.3e} at {name} {worst} ({stage_label})")
            arr[:, neg] = 0.0
    return raw_min


def _derivatives(state: SolutionState, model, bc: BoundaryCondition, controls: StepControls, dt: float):
    if controls.backend == "compiled":
        return evaluate_rhs_fast(state, model, bc, controls.options, dt)[:2]
    rhs = evaluate_rhs(state, model, bc, controls.options, dt)
    return rhs.d_points, rhs.d_averages


def _stage(state, model, bc, controls, dt, stage_label, monitor):
    d_points, d_averages = _derivatives(state, model, bc, controls, dt)
    points = state.points + dt * d_points
    averages = state.averages + dt * d_averages
    bc.enforce(points)
    raw_min = _sanitize(points, averages, stage_label)
    if monitor is not None:
        monitor.append(raw_min)
    return state.with_values(points, averages), d_points, d_averages


def euler_stage(state: SolutionState, model, bc: BoundaryCondition, controls: StepControls,
                dt: float, stage_label: str = "stage", monitor: list | None = None) -> SolutionState:
    """state + dt * L(state), with boundary values re-imposed.

    ``monitor``, if given, receives the unclipped minimum depth of the stage.
    """
    return _stage(state, model, bc, controls, dt, stage_label, monitor)[0]


def _combine(a: SolutionState, b: SolutionState, wa: float, wb: float, bc) -> SolutionState:
    points = wa * a.points + wb * b.points
    averages = wa * a.averages + wb * b.averages
    bc.enforce(points)
    return a.with_values(points, averages)


def _two_sum(a, b):
    """s = fl(a + b) and the exact rounding error e with a + b = s + e."""
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def ssp_rk3_step(state: SolutionState, model, bc: BoundaryCondition, controls: StepControls,
                 dt: float, monitor: list | None = None, carry: list | None = None) -> SolutionState:
    """Three-stage SSP Runge-Kutta step with dt frozen across stages.

    With ``carry`` (a two-item list of low-order parts for points and
    averages, updated in place) the step increment
    dt (L(u) + L(u1) + 4 L(u2)) / 6 is added with compensated summation
    instead of forming the convex combination directly.
    """
    u1, d0p, d0a = _stage(state, model, bc, controls, dt, "stage 1", monitor)
    e1, d1p, d1a = _stage(u1, model, bc, controls, dt, "stage 2", monitor)
    u2 = _combine(state, e1, 0.75, 0.25, bc)
    e2, d2p, d2a = _stage(u2, model, bc, controls, dt, "stage 3", monitor)
    if carry is None:
        u3 = _combine(state, e2, 1.0 / 3.0, 2.0 / 3.0, bc)
        _sanitize(u3.points, u3.averages, "step")
        return u3.with_values(u3.points, u3.averages, time=state.time + dt)
    new = []
    for k, (u, d0, d1, d2) in enumerate(((state.points, d0p, d1p, d2p),
                                         (state.averages, d0a, d1a, d2a))):
        inc = dt * ((d0 + d1 + 4.0 * d2) / 6.0) + carry[k]
        s, carry[k] = _two_sum(u, inc)
        new.append(s)
    points, averages = new
    before = points.copy()
    bc.enforce(points)
    carry[0][points != before] = 0.0
    before_p, before_a = points.copy(), averages.copy()
    _sanitize(points, averages, "step")
    carry[0][points != before_p] = 0.0
    carry[1][averages != before_a] = 0.0
    return state.with_values(points, averages, time=state.time + dt)


def g_spread(state: SolutionState, model, quadrature: str = SC_LOBATTO_III, component: int = 1) -> float:
    """max - min of one global flux component over nodes and midpoints."""
    cells = reconstruct_cells(state.points, state.averages)
    bathy = bathymetry_cells(state.bathy_points, state.bathy_averages, state.grid.dx)
    src = cell_sources(cells, bathy, state.grid.nodes[:-1], state.grid.dx, model)
    inc = source_increments(src, state.grid.dx, quadrature)
    field_g = assemble_global_flux(cells, inc, model)
    vals = np.concatenate([field_g.G_nodes[component], field_g.G_mid[component]])
    return float(vals.max() - vals.min())


def diagnostics(state: SolutionState, model, quadrature: str = SC_LOBATTO_III) -> dict:
    return {
        "min_h": float(min(state.points[0].min(), state.averages[0].min())),
        "mass": state.mass(),
        "g_spread": g_spread(state, model, quadrature),
    }


Observer = Callable[[float, SolutionState, dict], None]


@dataclass
class RunResult:
    state: SolutionState
    steps: int
    times: list = field(default_factory=list)
    min_h: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    stopped_steady: bool = False
    stage_min_h: float = np.inf


def run(state: SolutionState, model, bc: BoundaryCondition, controls: StepControls,
        observers: Sequence[Observer] = (), snapshot_times: Iterable[float] = (),
        record_every: int = 1) -> RunResult:
    """Advance ``state`` to ``controls.t_final``.

    Steps are shortened to land exactly on each requested snapshot time.
    Observers are called after every ``record_every`` steps and at the end
    with (time, state, diagnostics).
    """
    bc.validate(state.nvars)
    state = state.copy()
    bc.enforce(state.points)
    targets = sorted(t for t in snapshot_times if state.time <= t <= controls.t_final)
    result = RunResult(state=state, steps=0)
    if targets and targets[0] == state.time:
        result.snapshots[targets.pop(0)] = state.copy()

    def notify(s):
        if observers:
            diag = diagnostics(s, model, controls.quadrature)
            for obs in observers:
                obs(s.time, s, diag)

    carry = [np.zeros_like(state.points), np.zeros_like(state.averages)] if controls.compensated else None
    steps = 0
    while state.time < controls.t_final:
        if steps >= controls.max_steps:
            raise SolverError(f"max_steps={controls.max_steps} reached at t={state.time}")
        dt = compute_dt(state, model, controls)
        if targets:
            dt = min(dt, targets[0] - state.time)
        if dt <= 0:
            break
        monitor: list = []
        new = ssp_rk3_step(state, model, bc, controls, dt, monitor, carry)
        result.stage_min_h = min(result.stage_min_h, min(monitor))
        steps += 1
        if targets and np.isclose(new.time, targets[0], rtol=0, atol=1e-12 * max(1.0, targets[0])):
            new.time = targets[0]
            result.snapshots[targets.pop(0)] = new.copy()
        change = 0.0
        if controls.steady_tol > 0:
            scale = max(1.0, float(np.max(np.abs(state.averages))))
            change = max(float(np.max(np.abs(new.points - state.points))),
                         float(np.max(np.abs(new.averages - state.averages)))) / scale
        state = new
        result.times.append(state.time)
        result.min_h.append(float(min(state.points[0].min(), state.averages[0].min())))
        result.mass.append(state.mass())
        if steps % record_every == 0:
            notify(state)
        if controls.steady_tol > 0 and change < controls.steady_tol:
            result.stopped_steady = True
            log.info("steady state reached at t=%g after %d steps", state.time, steps)
            break
    if steps % record_every != 0 or steps == 0:
        notify(state)
    result.state = state
    result.steps = steps
    return result
