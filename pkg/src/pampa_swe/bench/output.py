"""CSV, manifest and SVG writers for experiment artifacts.

Snapshot CSV columns: ``x, dof, h, hu, [hv], B, h+B, G1, G2, [G3]``.
``dof`` is ``point`` for node values and ``average`` for cell averages
(listed at the cell center); the G columns hold the global flux at the
node or at the cell midpoint.  Floats use the shortest round-trip repr, so
identical runs produce identical files.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import numpy as np

from ..global_flux import assemble_global_flux, cell_sources, source_increments
from ..mesh import SolutionState
from ..reconstruction import bathymetry_cells, reconstruct_cells

log = logging.getLogger(__name__)

FIELDS = ("h", "hu", "hv")


def _fmt(v) -> str:
    return repr(float(v))


def global_flux_samples(state: SolutionState, model, quadrature: str):
    cells = reconstruct_cells(state.points, state.averages)
    bathy = bathymetry_cells(state.bathy_points, state.bathy_averages, state.grid.dx)
    src = cell_sources(cells, bathy, state.grid.nodes[:-1], state.grid.dx, model)
    inc = source_increments(src, state.grid.dx, quadrature)
    field_g = assemble_global_flux(cells, inc, model)
    return field_g.G_nodes, field_g.G_mid


def snapshot_header(nvars: int) -> list:
    return (["x", "dof"] + list(FIELDS[:nvars]) + ["B", "h+B"]
            + [f"G{k + 1}" for k in range(nvars)])


def write_snapshot_csv(path, state: SolutionState, model, quadrature: str) -> Path:
    path = Path(path)
    G_nodes, G_mid = global_flux_samples(state, model, quadrature)
    grid = state.grid
    nv = state.nvars
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(snapshot_header(nv))
        for j in range(grid.n_cells + 1):
            rows = [("point", grid.nodes[j], state.points[:, j], state.bathy_points[j], G_nodes[:, j])]
            if j < grid.n_cells:
                rows.append(("average", grid.centers[j], state.averages[:, j],
                             state.bathy_averages[j], G_mid[:, j]))
            for dof, x, u, b, G in rows:
                w.writerow([_fmt(x), dof] + [_fmt(v) for v in u] + [_fmt(b), _fmt(u[0] + b)]
                           + [_fmt(v) for v in G])
    return path


def write_diagnostics_csv(path, rows) -> Path:
    """rows: iterable of (t, mass, min_h, g_spread)."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "mass", "min_h", "g_spread"])
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not serializable: {type(obj)}")


def write_profile_svg(path, snapshots: dict, title: str = "") -> Path | None:
    """Line plot of the averaged surface h+B (and B) for each snapshot.

    Needs matplotlib; returns None (with a warning) when it is missing.
    """
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        log.warning("matplotlib not installed; skipping %s", path)
        return None
    fig, ax = plt.subplots(figsize=(7, 4))
    bottom = None
    for t, state in sorted(snapshots.items()):
        x = state.grid.centers
        ax.plot(x, state.averages[0] + state.bathy_averages, lw=1.0, label=f"t = {t:g}")
        bottom = (x, state.bathy_averages)
    if bottom is not None and np.any(bottom[1] != 0):
        ax.plot(*bottom, "k-", lw=1.0, label="B")
    ax.set_xlabel("x")
    ax.set_ylabel("h + B")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
