"""Positivity-preserving, fully well-balanced PAMPA scheme for 1-D shallow water."""

from .mesh import (BoundaryCondition, Grid, SolutionState, apply_boundary, make_grid,
                   project_initial_data)
from .models import RotatingShallowWater, SaintVenant
from .time_integration import StepControls, compute_dt, euler_stage, run, ssp_rk3_step

__all__ = ["BoundaryCondition", "Grid", "SolutionState", "apply_boundary", "make_grid",
           "project_initial_data", "RotatingShallowWater", "SaintVenant", "StepControls",
           "compute_dt", "euler_stage", "run", "ssp_rk3_step"]

__version__ = "0.1.0"
