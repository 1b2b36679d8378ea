"""Run configured experiments and mesh-refinement studies."""

from __future__ import annotations

import logging
import time as _time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..equilibria import analytic_moving_steady, example3_case, parabolic_bowl_exact
from ..mesh import SolutionState, simpson_average
from ..time_integration import RunResult, SolverError, run
from .config import ExperimentConfig
from .norms import ErrorReport, error_norms, restrict
from .output import write_diagnostics_csv, write_manifest, write_profile_svg, write_snapshot_csv

log = logging.getLogger(__name__)

GAUSS_POINTS = 8


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    initial: SolutionState
    run: RunResult
    errors: dict | None = None
    files: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def state(self) -> SolutionState:
        return self.run.state


def _cell_gauss_average(fn, grid):
    """Cell averages of fn by Gauss-Legendre quadrature."""
    xi, w = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    left = grid.nodes[:-1, None]
    x = left + 0.5 * grid.dx * (xi[None, :] + 1.0)
    return 0.5 * np.sum(w[None, :] * fn(x), axis=1)


def reference_values(cfg: ExperimentConfig, state: SolutionState, initial: SolutionState):
    """(points, averages) of the reference solution at state.time, or None.

    The rows compared depend on the reference: all fields for a prepared
    initial state, h and hu for the Bernoulli oracle, and h alone for the
    parabolic bowl.
    """
    kind = cfg.reference()
    if kind is None:
        return None
    grid = state.grid
    if kind == "initial":
        return initial.points, initial.averages
    if kind.startswith("bernoulli-"):
        case = example3_case(kind.split("-", 1)[1], cfg.g)
        B_fn = cfg.bathymetry_fn()
        h_fn = lambda x: analytic_moving_steady(B_fn(x.ravel()), case).reshape(x.shape)
        pts = np.stack([h_fn(grid.nodes), np.full(grid.n_cells + 1, case.q)])
        avg = np.stack([_cell_gauss_average(h_fn, grid), np.full(grid.n_cells, case.q)])
        return pts, avg
    if kind == "bowl":
        t = state.time
        h_fn = lambda x: parabolic_bowl_exact(t, x)[2]
        return h_fn(grid.nodes)[None, :], _cell_gauss_average(h_fn, grid)[None, :]
    raise ValueError(f"unknown reference {kind!r}")


def state_errors(cfg, state, initial):
    ref = reference_values(cfg, state, initial)
    if ref is None:
        return None
    rp, ra = ref
    k = rp.shape[0]
    return error_norms(state.points[:k], state.averages[:k], rp, ra, state.grid.dx)


def prolong(coarse: SolutionState, cfg: ExperimentConfig) -> SolutionState:
    """Coarse quadratic representation transferred onto the 2x finer mesh.

    Fine nodes take the coarse node and midpoint values; fine averages are
    exact half-cell averages of the coarse parabola.  Bathymetry is sampled
    afresh on the fine mesh.
    """
    grid = cfg.grid(2 * coarse.grid.n_cells)
    uL, uR, ub = coarse.points[:, :-1], coarse.points[:, 1:], coarse.averages
    mid = 1.5 * ub - 0.25 * (uL + uR)
    nv, n = ub.shape
    points = np.empty((nv, 2 * n + 1))
    points[:, 0::2] = coarse.points
    points[:, 1::2] = mid
    averages = np.empty((nv, 2 * n))
    averages[:, 0::2] = 0.25 * uL + ub - 0.25 * uR
    averages[:, 1::2] = -0.25 * uL + ub + 0.25 * uR
    B_fn = cfg.bathymetry_fn()
    x = grid.nodes
    return SolutionState(grid, points, averages, B_fn(x), simpson_average(B_fn, x[:-1], x[1:]),
                         time=coarse.time)


def run_experiment(cfg: ExperimentConfig, out_dir=None, cells: int | None = None,
                   initial: SolutionState | None = None) -> ExperimentResult:
    """Run one configuration; write artifacts when ``out_dir`` is given.

    Artifacts: one snapshot CSV per requested time plus the final state, a
    diagnostics CSV, an SVG of the surface (if requested) and a manifest.
    An empty snapshot list writes the manifest alone.
    """
    model = cfg.model()
    bc = cfg.boundary()
    controls = cfg.controls()
    out = cfg.data["output"]
    if initial is None:
        initial = cfg.initial_state(cells)
    diag_rows = []

    def observer(t, s, d):
        diag_rows.append((t, d["mass"], d["min_h"], d["g_spread"]))

    t0 = _time.perf_counter()
    try:
        result = run(initial, model, bc, controls, observers=[observer] if out_dir else (),
                     snapshot_times=cfg.snapshot_times(), record_every=int(out["record_every"]))
    except SolverError as exc:
        raise SolverError(f"{cfg.name} on {initial.grid.n_cells} cells: {exc}") from exc
    runtime = _time.perf_counter() - t0
    errors = state_errors(cfg, result.state, initial)
    res = ExperimentResult(cfg, initial, result, errors, runtime=runtime)
    if out_dir is not None:
        _write_artifacts(res, Path(out_dir), model, controls.quadrature, diag_rows)
    return res


def _write_artifacts(res: ExperimentResult, out_dir: Path, model, quadrature, diag_rows):
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = res.config
    n = res.state.grid.n_cells
    stem = f"{cfg.name}_n{n}"
    files = []
    snaps = dict(res.run.snapshots)
    if cfg.snapshot_times():
        snaps[res.state.time] = res.state
    for t, s in sorted(snaps.items()):
        files.append(write_snapshot_csv(out_dir / f"{stem}_t{t:g}.csv", s, model, quadrature))
    if snaps:
        files.append(write_diagnostics_csv(out_dir / f"{stem}_diagnostics.csv", diag_rows))
    if snaps and cfg.data["output"].get("svg"):
        svg = write_profile_svg(out_dir / f"{stem}.svg", snaps, title=f"{cfg.name}, {n} cells")
        if svg is not None:
            files.append(svg)
    manifest = {
        "name": cfg.name, "cells": n, "config": cfg.data, "steps": res.run.steps,
        "final_time": res.state.time, "runtime_s": round(res.runtime, 3),
        "min_h_stages": res.run.stage_min_h, "mass_initial": res.initial.mass(),
        "mass_final": res.state.mass(), "stopped_steady": res.run.stopped_steady,
        "g_spread_final": diag_rows[-1][3] if diag_rows else None,
        "errors": res.errors, "files": [p.name for p in files],
    }
    files.append(write_manifest(out_dir / f"{stem}_manifest.json", manifest))
    res.files = files


def convergence_study(cfg: ExperimentConfig, meshes, out_dir=None,
                      continuation: bool = False) -> ErrorReport:
    """Errors and rates on a sequence of 2x refined meshes.

    With an exact reference (Bernoulli, bowl) each mesh is compared to it
    directly.  Otherwise the Runge estimate ||u_dx - R u_{dx/2}|| is used,
    so the finest mesh only serves as reference for the one before it.
    ``continuation`` starts every mesh after the first from the prolonged
    final state of the previous one (useful for long steady-state runs).
    """
    meshes = [int(m) for m in meshes]
    if len(meshes) < 3:
        raise ValueError("need at least 3 meshes")
    if any(b != 2 * a for a, b in zip(meshes[:-1], meshes[1:])):
        raise ValueError(f"meshes must be successive 2x refinements, got {meshes}")
    direct = cfg.reference() is not None and cfg.reference() != "initial"
    finals = []
    norms = []
    prev = None
    for n in meshes:
        initial = prolong(prev, cfg) if (continuation and prev is not None) else None
        if initial is not None:
            initial.time = 0.0
        res = run_experiment(cfg, out_dir, cells=n, initial=initial)
        log.info("%s: %d cells, %d steps, %.1fs", cfg.name, n, res.run.steps, res.runtime)
        prev = res.state
        finals.append(res.state)
        if direct:
            norms.append(res.errors)
    if direct:
        return ErrorReport(meshes, [cfg.grid(n).dx for n in meshes], norms, method="exact")
    for coarse, fine in zip(finals[:-1], finals[1:]):
        rp, ra = restrict(fine.points, fine.averages)
        norms.append(error_norms(coarse.points, coarse.averages, rp, ra, coarse.grid.dx))
    return ErrorReport(meshes[:-1], [cfg.grid(n).dx for n in meshes[:-1]], norms, method="runge")
