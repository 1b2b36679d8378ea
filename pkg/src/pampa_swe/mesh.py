"""Uniform 1-D grid, point/average storage and ghost-layer population."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform grid with nodes ``x_j = x_min + j*dx``, j = 0..n_cells."""

    x_min: float
    x_max: float
    n_cells: int

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def nodes(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_cells + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + self.dx * (np.arange(self.n_cells) + 0.5)

    def local_points(self, xi: float) -> np.ndarray:
        """Coordinates of the point at local coordinate ``xi`` in every cell."""
        return self.x_min + self.dx * (np.arange(self.n_cells) + xi)


def make_grid(x_min: float, x_max: float, n_cells: int) -> Grid:
    if int(n_cells) != n_cells or n_cells < 2:
        raise ValueError(f"need at least 2 cells, got {n_cells!r}")
    if not x_max > x_min:
        raise ValueError(f"x_max ({x_max}) must exceed x_min ({x_min})")
    return Grid(float(x_min), float(x_max), int(n_cells))


@dataclass
class SolutionState:
    """Point values and cell averages, component-first.

    ``points`` has shape (nvars, n_cells + 1) and ``averages`` has shape
    (nvars, n_cells).  Bathymetry is stored with the same two kinds of DoFs.
    """

    grid: Grid
    points: np.ndarray
    averages: np.ndarray
    bathy_points: np.ndarray
    bathy_averages: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        n = self.grid.n_cells
        self.points = np.asarray(self.points, dtype=float)
        self.averages = np.asarray(self.averages, dtype=float)
        self.bathy_points = np.asarray(self.bathy_points, dtype=float)
        self.bathy_averages = np.asarray(self.bathy_averages, dtype=float)
        if self.points.ndim != 2 or self.points.shape[1] != n + 1:
            raise ValueError(f"points must have shape (nvars, {n + 1}), got {self.points.shape}")
        if self.averages.shape != (self.points.shape[0], n):
            raise ValueError(f"averages must have shape ({self.points.shape[0]}, {n})")
        if self.bathy_points.shape != (n + 1,) or self.bathy_averages.shape != (n,):
            raise ValueError("bathymetry arrays inconsistent with grid")

    @property
    def nvars(self) -> int:
        return self.points.shape[0]

    def copy(self) -> "SolutionState":
        return replace(self, points=self.points.copy(), averages=self.averages.copy())

    def with_values(self, points: np.ndarray, averages: np.ndarray, time: float | None = None):
        return replace(self, points=points, averages=averages,
                       time=self.time if time is None else time)

    def mass(self) -> float:
        return float(self.grid.dx * np.sum(self.averages[0]))


def simpson_average(fn: Callable, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    mid = 0.5 * (left + right)
    return (np.asarray(fn(left)) + 4.0 * np.asarray(fn(mid)) + np.asarray(fn(right))) / 6.0


def _vectorize(fn: Callable) -> Callable:
    def wrapped(x):
        out = np.asarray(fn(x), dtype=float)
        return np.broadcast_to(out, np.shape(x)).copy() if out.shape != np.shape(x) else out
    return wrapped


def project_initial_data(grid: Grid, h_fn: Callable, hu_fn: Callable,
                         hv_fn: Callable | None = None,
                         B_fn: Callable | None = None) -> SolutionState:
    """Sample point values at nodes and Simpson-average each cell.

    Simpson's rule reproduces the average of any quadratic exactly, which is
    the in-cell representation space of the scheme.
    """
    x = grid.nodes
    fns = [h_fn, hu_fn] + ([hv_fn] if hv_fn is not None else [])
    fns = [_vectorize(f) for f in fns]
    B_fn = _vectorize(B_fn if B_fn is not None else (lambda s: np.zeros_like(s)))
    left, right = x[:-1], x[1:]
    points = np.array([f(x) for f in fns])
    averages = np.array([simpson_average(f, left, right) for f in fns])
    return SolutionState(grid, points, averages, B_fn(x), simpson_average(B_fn, left, right))


PERIODIC = "periodic"
EXTRAPOLATION = "extrapolation"
DIRICHLET = "dirichlet"
_KINDS = (PERIODIC, EXTRAPOLATION, DIRICHLET)


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary kinds per end.

    ``left_values`` / ``right_values`` map a field index (0 = h, 1 = hu,
    2 = hv) to the prescribed value; fields not listed are extrapolated.
    """

    left: str = EXTRAPOLATION
    right: str = EXTRAPOLATION
    left_values: Mapping[int, float] = field(default_factory=dict)
    right_values: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for kind in (self.left, self.right):
            if kind not in _KINDS:
                raise ValueError(f"unknown boundary kind {kind!r}")
        if (self.left == PERIODIC) != (self.right == PERIODIC):
            raise ValueError("periodic must be set on both ends or neither")

    @property
    def periodic(self) -> bool:
        return self.left == PERIODIC

    @classmethod
    def make_periodic(cls) -> "BoundaryCondition":
        return cls(PERIODIC, PERIODIC)

    def validate(self, nvars: int) -> None:
        for kind, values in ((self.left, self.left_values), (self.right, self.right_values)):
            if kind != DIRICHLET and values:
                raise ValueError("boundary values given for a non-dirichlet end")
            for k in values:
                if not 0 <= k < nvars:
                    raise ValueError(f"dirichlet field {k} not in a {nvars}-field model")

    def enforce(self, points: np.ndarray) -> None:
        """Overwrite prescribed fields at the boundary nodes in place."""
        if self.periodic:
            points[:, -1] = points[:, 0]
            return
        for k, val in self.left_values.items():
            points[k, 0] = val
        for k, val in self.right_values.items():
            points[k, -1] = val


@dataclass
class ExtendedState:
    """Arrays padded with one ghost node and one ghost cell per side.

    Node j of the grid lives at index j + 1 of ``points``; cell c at index
    c + 1 of ``averages``.
    """

    points: np.ndarray
    averages: np.ndarray
    bathy_points: np.ndarray
    bathy_averages: np.ndarray


def _pad(a: np.ndarray, left, right) -> np.ndarray:
    return np.concatenate([np.asarray(left)[..., None], a, np.asarray(right)[..., None]], axis=-1)


def extend(points, averages, bc: BoundaryCondition, bathy_points=None, bathy_averages=None):
    """Ghost-padded copies of point values and averages (one layer)."""
    if bc.periodic:
        pts = _pad(points, points[..., -2], points[..., 1])
        avg = _pad(averages, averages[..., -1], averages[..., 0])
    else:
        pts = _pad(points, points[..., 0], points[..., -1])
        avg = _pad(averages, averages[..., 0], averages[..., -1])
        if points.ndim == 2:
            for k, val in bc.left_values.items():
                pts[k, :2] = val
                avg[k, 0] = val
            for k, val in bc.right_values.items():
                pts[k, -2:] = val
                avg[k, -1] = val
    return pts, avg


def apply_boundary(state: SolutionState, bc: BoundaryCondition) -> ExtendedState:
    """Populate one ghost cell and ghost node per side.

    Periodic copies the opposite end, zero-order extrapolation copies the
    nearest interior DoF, and dirichlet overrides the listed fields at the
    boundary node and in the ghost DoFs.
    """
    bc.validate(state.nvars)
    pts, avg = extend(state.points, state.averages, bc)
    bp, ba = extend(state.bathy_points, state.bathy_averages,
                    BoundaryCondition.make_periodic() if bc.periodic else BoundaryCondition())
    return ExtendedState(pts, avg, bp, ba)
