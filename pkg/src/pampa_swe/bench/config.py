"""Experiment configuration: TOML schema, expression data and state building.

A config is a nested table::

    example = "ex3-II"            # optional preset to start from
    [model]    kind = "saint_venant" | "rotating", g, manning, f0, beta
    [grid]     x_min, x_max, cells
    [initial]  h, hu, hv, B, perturbation    (numpy expressions in x)
    [equilibrium]  G2, discharge, v, branch  (replaces h by a discrete steady state)
    [boundary] left, right, left_values = {hu = 24.0}, right_values = {...}
    [controls] cfl, t_final, quadrature, order, steady_tol, oscillation_elimination, backend,
               compensated
    [output]   snapshots = [...], svg, record_every, reference

Output: snapshots omitted means the final time only; an explicit empty list
writes the summary manifest alone.

Expressions may use ``x``, ``g``, ``B`` (bathymetry at x, except inside B
itself), ``pi`` and the functions listed in ``EXPRESSION_FUNCTIONS``.
"""

from __future__ import annotations

import copy
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..equilibria import EquilibriumSpec, newton_recover_h, parabolic_bowl_exact
from ..mesh import BoundaryCondition, SolutionState, make_grid, project_initial_data, simpson_average
from ..models import RotatingShallowWater, SaintVenant
from ..time_integration import StepControls

FIELD_INDEX = {"h": 0, "hu": 1, "hv": 2}

QUADRATURE_ALIASES = {"sciii": "sc_lobattoIII", "sc_lobattoiii": "sc_lobattoIII",
                      "iiia": "lobattoIIIA", "lobattoiiia": "lobattoIIIA"}


def bowl_depth(t, x):
    return parabolic_bowl_exact(t, x)[2]


EXPRESSION_FUNCTIONS = {
    "exp": np.exp, "sin": np.sin, "cos": np.cos, "tanh": np.tanh, "sqrt": np.sqrt,
    "abs": np.abs, "where": np.where, "maximum": np.maximum, "minimum": np.minimum,
    "bowl_depth": bowl_depth,
}

DEFAULTS = {
    "name": "custom",
    "model": {"kind": "saint_venant", "g": 9.812, "manning": 0.0, "f0": 0.0, "beta": 0.0},
    "grid": {"x_min": 0.0, "x_max": 1.0, "cells": 100},
    "initial": {"h": "1", "hu": "0", "hv": "0", "B": "0", "perturbation": None},
    "equilibrium": None,
    "boundary": {"left": "extrapolation", "right": "extrapolation",
                 "left_values": {}, "right_values": {}},
    "controls": {"cfl": 0.2, "t_final": 1.0, "quadrature": "sc_lobattoIII", "order": "high",
                 "steady_tol": 0.0, "oscillation_elimination": True, "backend": "compiled",
                 "compensated": True},
    "output": {"snapshots": None, "svg": False, "record_every": 100, "reference": None},
}


class ConfigError(ValueError):
    pass


def deep_merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in over.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = deep_merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def evaluate_expression(expr, x, g: float, B=None):
    """Evaluate a numpy expression string (or a number) on the array x."""
    x = np.asarray(x, dtype=float)
    if expr is None:
        return np.zeros_like(x)
    if isinstance(expr, (int, float)):
        return np.full_like(x, float(expr))
    names = dict(EXPRESSION_FUNCTIONS, x=x, g=g, pi=np.pi)
    if B is not None:
        names["B"] = B
    try:
        val = eval(compile(str(expr), "<config>", "eval"), {"__builtins__": {}}, names)
    except Exception as exc:  # report the offending expression
        raise ConfigError(f"cannot evaluate {expr!r}: {exc}") from exc
    return np.broadcast_to(np.asarray(val, dtype=float), x.shape).copy()


@dataclass
class ExperimentConfig:
    """Validated experiment description (see module docstring for the schema)."""

    data: dict

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        from .presets import PRESETS
        raw = dict(raw)
        base = DEFAULTS
        example = raw.pop("example", None)
        if example is not None:
            if example not in PRESETS:
                raise ConfigError(f"unknown example {example!r}; see list-examples")
            base = deep_merge(DEFAULTS, PRESETS[example])
        data = deep_merge(base, raw)
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        cfg = cls(data)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
        raw.setdefault("name", Path(path).stem)
        return cls.from_dict(raw)

    def with_overrides(self, **sections) -> "ExperimentConfig":
        return ExperimentConfig.from_dict(deep_merge(self.data, sections))

    # -- accessors --------------------------------------------------------

    @property
    def name(self) -> str:
        return str(self.data["name"])

    @property
    def cells(self) -> int:
        return int(self.data["grid"]["cells"])

    @property
    def g(self) -> float:
        return float(self.data["model"]["g"])

    def validate(self) -> None:
        m = self.data["model"]
        if m["kind"] not in ("saint_venant", "rotating"):
            raise ConfigError(f"model kind must be saint_venant or rotating, got {m['kind']!r}")
        grid = self.data["grid"]
        if int(grid["cells"]) < 2 or not grid["x_max"] > grid["x_min"]:
            raise ConfigError("grid needs x_max > x_min and at least 2 cells")
        for side in ("left_values", "right_values"):
            for key in self.data["boundary"][side]:
                if key not in FIELD_INDEX:
                    raise ConfigError(f"boundary value key {key!r} not one of h, hu, hv")
        self.controls()

    def model(self):
        m = self.data["model"]
        if m["kind"] == "rotating":
            return RotatingShallowWater(float(m["g"]), float(m["f0"]), float(m["beta"]))
        return SaintVenant(float(m["g"]), float(m["manning"]))

    def grid(self, cells: int | None = None):
        gd = self.data["grid"]
        return make_grid(float(gd["x_min"]), float(gd["x_max"]), int(cells or gd["cells"]))

    def boundary(self) -> BoundaryCondition:
        b = self.data["boundary"]
        lv = {FIELD_INDEX[k]: float(v) for k, v in b["left_values"].items()}
        rv = {FIELD_INDEX[k]: float(v) for k, v in b["right_values"].items()}
        return BoundaryCondition(b["left"], b["right"], lv, rv)

    def controls(self) -> StepControls:
        c = dict(self.data["controls"])
        quad = str(c.pop("quadrature"))
        quad = QUADRATURE_ALIASES.get(quad.lower(), quad)
        return StepControls(quadrature=quad, **c)

    def bathymetry_fn(self):
        expr = self.data["initial"]["B"]
        g = self.g
        return lambda x: evaluate_expression(expr, x, g)

    def initial_state(self, cells: int | None = None) -> SolutionState:
        """Project the initial data (or solve for the equilibrium) on the grid."""
        grid = self.grid(cells)
        model = self.model()
        ini = self.data["initial"]
        g = self.g
        B_fn = self.bathymetry_fn()
        eq = self.data["equilibrium"]
        if eq:
            v_expr = eq.get("v")
            spec = EquilibriumSpec(
                G2=float(eq["G2"]),
                discharge=float(eq.get("discharge", 0.0)),
                transverse_velocity=(lambda x: evaluate_expression(v_expr, x, g)) if v_expr else None,
                branch=eq.get("branch", "subcritical"))
            state = newton_recover_h(spec, grid, B_fn, model, self.controls().quadrature)
        else:
            fns = [lambda x, e=ini[k]: evaluate_expression(e, x, g, B_fn(x)) for k in ("h", "hu")]
            hv = None
            if model.nvars == 3:
                hv = lambda x, e=ini["hv"]: evaluate_expression(e, x, g, B_fn(x))
            state = project_initial_data(grid, fns[0], fns[1], hv, B_fn)
        pert = ini.get("perturbation")
        if pert:
            p_fn = lambda x: evaluate_expression(pert, x, g)
            x = grid.nodes
            state.points[0] += p_fn(x)
            state.averages[0] += simpson_average(p_fn, x[:-1], x[1:])
        return state

    def snapshot_times(self) -> list:
        snaps = self.data["output"]["snapshots"]
        if snaps is None:
            return [float(self.data["controls"]["t_final"])]
        return [float(t) for t in snaps]

    def reference(self):
        return self.data["output"].get("reference")
