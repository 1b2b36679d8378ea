"""Source primitive increments and the global flux G = f(u) - R.

Only per-cell differences of R are ever consumed by the scheme, so the
global field (with R_0 = 0) is needed for diagnostics and the steady-state
indicator only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reconstruction import BathymetryCell, CellValues

SC_LOBATTO_III = "sc_lobattoIII"
LOBATTO_IIIA = "lobattoIIIA"
QUADRATURES = (SC_LOBATTO_III, LOBATTO_IIIA)

_ALIASES = {"sciii": SC_LOBATTO_III, "sc_lobattoiii": SC_LOBATTO_III, "sc-lobattoiii": SC_LOBATTO_III,
            "iiia": LOBATTO_IIIA, "lobattoiiia": LOBATTO_IIIA}


def normalize_quadrature(name: str) -> str:
    key = str(name).lower()
    if key not in _ALIASES:
        raise ValueError(f"unknown quadrature {name!r}")
    return _ALIASES[key]


@dataclass
class SourceIncrements:
    """Per-cell R_{mid} - R_left and R_right - R_left."""

    dR_half: np.ndarray
    dR_full: np.ndarray


@dataclass
class CellSources:
    """Pointwise sources at xi = 0, 1/4, 1/2, 1 of each cell."""

    s0: np.ndarray
    sq: np.ndarray
    smid: np.ndarray
    s1: np.ndarray


def increments_lobattoIIIA(s0, smid, s1, dx: float) -> SourceIncrements:
    half = dx * (5.0 / 24.0 * s0 + 1.0 / 3.0 * smid - 1.0 / 24.0 * s1)
    full = dx * (s0 + 4.0 * smid + s1) / 6.0
    return SourceIncrements(half, full)


def increments_sc_lobattoIII(s0, sq, smid, s1, dx: float) -> SourceIncrements:
    half = dx * (s0 + 4.0 * sq + smid) / 12.0
    full = dx * (s0 + 4.0 * smid + s1) / 6.0
    return SourceIncrements(half, full)


def cell_sources(cells: CellValues, bathy: BathymetryCell, x_left, dx: float, model) -> CellSources:
    """Evaluate S at the four quadrature abscissae using each cell's own B_x."""
    return CellSources(
        s0=model.source(cells.left, x_left, bathy.slope0),
        sq=model.source(cells.quarter, x_left + 0.25 * dx, bathy.slope_q),
        smid=model.source(cells.mid, x_left + 0.5 * dx, bathy.slope_mid),
        s1=model.source(cells.right, x_left + dx, bathy.slope1),
    )


def source_increments(sources: CellSources, dx: float, quadrature: str = SC_LOBATTO_III):
    if quadrature == SC_LOBATTO_III:
        return increments_sc_lobattoIII(sources.s0, sources.sq, sources.smid, sources.s1, dx)
    if quadrature == LOBATTO_IIIA:
        return increments_lobattoIIIA(sources.s0, sources.smid, sources.s1, dx)
    raise ValueError(f"unknown quadrature {quadrature!r}")


@dataclass
class LocalFlux:
    """Offset-free global flux samples per cell, relative to R at the left node."""

    g0: np.ndarray
    gm: np.ndarray
    g1: np.ndarray


def local_flux(cells: CellValues, inc: SourceIncrements, model) -> LocalFlux:
    return LocalFlux(model.flux(cells.left),
                     model.flux(cells.mid) - inc.dR_half,
                     model.flux(cells.right) - inc.dR_full)


@dataclass
class GlobalFluxField:
    G_nodes: np.ndarray
    G_mid: np.ndarray
    R_nodes: np.ndarray
    R_mid: np.ndarray


def assemble_global_flux(cells: CellValues, inc: SourceIncrements, model) -> GlobalFluxField:
    """Prefix-sum R from R_0 = 0 and form G at nodes and midpoints."""
    nv, n = inc.dR_full.shape
    R_nodes = np.zeros((nv, n + 1))
    np.cumsum(inc.dR_full, axis=1, out=R_nodes[:, 1:])
    R_mid = R_nodes[:, :-1] + inc.dR_half
    f_nodes = np.concatenate([model.flux(cells.left), model.flux(cells.right[:, -1:])], axis=1)
    return GlobalFluxField(f_nodes - R_nodes, model.flux(cells.mid) - R_mid, R_nodes, R_mid)


def g_spread(field: GlobalFluxField, component: int = 1) -> float:
    """max - min of one G component over nodes and midpoints."""
    vals = np.concatenate([field.G_nodes[component], field.G_mid[component]])
    return float(vals.max() - vals.min())
