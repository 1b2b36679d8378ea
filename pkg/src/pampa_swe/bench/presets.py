"""Built-in experiment presets for the benchmark suite.

Each entry is a partial config merged over ``config.DEFAULTS``.
"""

from __future__ import annotations

import copy

BUMP_3 = "where((x >= 8) & (x <= 12), 0.2 - 0.05*(x - 10)**2, 0)"
BUMPS_2 = ("where((x >= -0.4) & (x <= -0.2), 2*(cos(10*pi*(x + 0.3)) + 1), 0)"
           " + where((x >= 0.2) & (x <= 0.4), 0.5*(cos(10*pi*(x - 0.3)) + 1), 0)")
BUMP_10 = "where((x >= 0.7) & (x <= 0.9), 0.25*(cos(10*pi*(x - 0.8)) + 1), 0)"
N2 = "(1 + tanh(2*x + 2))*(1 - tanh(2*x - 2))/(1 + tanh(2))**2"
INERTIAL_PERIOD = 6.283185307179586  # 2 pi / f with f = 1

# discrete G^(2) of the frictionless Case (I) inflow state h = 2, hu = 24
G2_CASE_I = 24.0 ** 2 / 2.0 + 9.812 * 2.0 ** 2 / 2.0
# frictional Case (II) steady global flux reported for 100 cells
G2_CASE_II_FRICTION = 31.700836562966

_EX3 = {
    "grid": {"x_min": 0.0, "x_max": 25.0, "cells": 100},
    "initial": {"h": "2 - B", "hu": "0", "B": BUMP_3},
    "controls": {"t_final": 500.0},
    "output": {"record_every": 2000},
}
_CASE_I_BC = {"left": "dirichlet", "right": "extrapolation",
              "left_values": {"h": 2.0, "hu": 24.0}, "right_values": {}}
_CASE_II_BC = {"left": "dirichlet", "right": "dirichlet",
               "left_values": {"hu": 4.42}, "right_values": {"h": 2.0}}


def _merge(*parts):
    from .config import deep_merge
    out: dict = {}
    for p in parts:
        out = deep_merge(out, p)
    return out


PRESETS = {
    "ex1": {
        "model": {"manning": 0.05},
        "grid": {"x_min": 0.0, "x_max": 1.0, "cells": 256},
        "initial": {"h": "0.3*(1 + exp(-(x - 0.5)**2/0.05**2)) - 0.2*cos(6*pi*x)", "hu": "0",
                    "B": "0.2*(1 + cos(6*pi*x))"},
        "boundary": {"left": "periodic", "right": "periodic"},
        "controls": {"t_final": 0.03},
    },
    "ex2": {
        "grid": {"x_min": -1.0, "x_max": 1.0, "cells": 50},
        "initial": {"h": "4.000001 - B", "hu": "0", "B": BUMPS_2},
        "controls": {"t_final": 10.0},
        "output": {"record_every": 1000, "reference": "initial"},
    },
    "ex2-perturbed": {
        "grid": {"x_min": -1.0, "x_max": 1.0, "cells": 100},
        "initial": {"h": "4.000001 - B", "hu": "0", "B": BUMPS_2,
                    "perturbation": "1e-6*exp(-200*x**2)"},
        "controls": {"t_final": 0.06},
        "output": {"snapshots": [0.02, 0.04, 0.06]},
    },
    "ex3-I": _merge(_EX3, {"boundary": _CASE_I_BC, "output": {"reference": "bernoulli-I"}}),
    "ex3-II": _merge(_EX3, {"boundary": _CASE_II_BC, "output": {"reference": "bernoulli-II"}}),
    "ex4-I": _merge(_EX3, {"model": {"manning": 0.05}, "boundary": _CASE_I_BC}),
    "ex4-II": _merge(_EX3, {"model": {"manning": 0.05}, "boundary": _CASE_II_BC}),
    "ex4-prepared-I": _merge(_EX3, {
        "model": {"manning": 0.05}, "boundary": _CASE_I_BC, "controls": {"t_final": 1000.0},
        "equilibrium": {"G2": G2_CASE_I, "discharge": 24.0, "branch": "supercritical"},
        "output": {"reference": "initial"}}),
    "ex4-prepared-II": _merge(_EX3, {
        "model": {"manning": 0.05}, "boundary": _CASE_II_BC, "controls": {"t_final": 1000.0},
        "equilibrium": {"G2": G2_CASE_II_FRICTION, "discharge": 4.42, "branch": "subcritical"},
        "output": {"reference": "initial"}}),
    "ex4-perturbed-I": _merge(_EX3, {
        "model": {"manning": 0.05}, "boundary": _CASE_I_BC, "controls": {"t_final": 1.0},
        "equilibrium": {"G2": G2_CASE_I, "discharge": 24.0, "branch": "supercritical"},
        "initial": {"perturbation": "1e-3*exp(-80*(x - 6)**2)"},
        "output": {"snapshots": [1.0], "record_every": 100}}),
    "ex4-perturbed-II": _merge(_EX3, {
        "model": {"manning": 0.05}, "boundary": _CASE_II_BC, "controls": {"t_final": 1.5},
        "equilibrium": {"G2": G2_CASE_II_FRICTION, "discharge": 4.42, "branch": "subcritical"},
        "initial": {"perturbation": "1e-3*exp(-80*(x - 6)**2)"},
        "output": {"snapshots": [1.5], "record_every": 100}}),
    "ex5-1": {
        "grid": {"x_min": -300.0, "x_max": 300.0, "cells": 250},
        "initial": {"h": "where(x <= 0, 10, 0)", "hu": "0"},
        "controls": {"t_final": 12.0},
        "output": {"snapshots": [4.0, 8.0, 12.0]},
    },
    "ex5-2": {
        "grid": {"x_min": -200.0, "x_max": 400.0, "cells": 250},
        "initial": {"h": "where(x <= 0, 5, 10)", "hu": "where(x <= 0, 0, 400)"},
        "controls": {"t_final": 12.0},
        "output": {"snapshots": [4.0, 8.0, 12.0]},
    },
    "ex6": {
        "model": {"g": 1.0},
        "grid": {"x_min": -1.0, "x_max": 1.0, "cells": 300},
        "initial": {"h": "where(x < 0, 5 - B, 1)", "hu": "0", "B": BUMPS_2},
        "controls": {"t_final": 0.3},
        "output": {"snapshots": [0.1, 0.2, 0.3]},
    },
    "ex7": {
        "grid": {"x_min": -5000.0, "x_max": 5000.0, "cells": 250},
        "initial": {"h": "bowl_depth(0, x)", "hu": "0", "B": "10*(x/3000)**2"},
        "controls": {"t_final": 6000.0},
        "output": {"snapshots": [1000.0, 2000.0, 3000.0, 4000.0, 5000.0, 6000.0],
                   "reference": "bowl"},
    },
    "ex8": {
        "model": {"kind": "rotating", "f0": 0.12566370614359174, "beta": 4e-4},
        "grid": {"x_min": 0.0, "x_max": 25.0, "cells": 100},
        "initial": {"h": "0.33", "hu": "0", "hv": "0", "B": BUMP_3},
        "boundary": {"left": "dirichlet", "right": "dirichlet",
                     "left_values": {"hu": 0.18, "hv": 0.0}, "right_values": {"h": 0.33}},
        "controls": {"t_final": 1000.0},
        "output": {"record_every": 5000},
    },
    "ex9": {
        "model": {"kind": "rotating", "g": 1.0, "f0": 10.0},
        "grid": {"x_min": -10.0, "x_max": 10.0, "cells": 50},
        "equilibrium": {"G2": 2.0, "discharge": 0.0, "v": "2*g/10*x*exp(-x**2)"},
        "controls": {"t_final": 100.0},
        "output": {"reference": "initial", "record_every": 1000},
    },
    "ex10": {
        "model": {"kind": "rotating", "g": 1.0, "f0": 10.0},
        "grid": {"x_min": 0.0, "x_max": 1.0, "cells": 20},
        "initial": {"B": BUMP_10},
        "equilibrium": {"G2": 2.0, "discharge": 0.0, "v": "0.05*sin(2*pi*x)"},
        "controls": {"t_final": 20.0},
        "output": {"reference": "initial", "record_every": 1000},
    },
    "ex10-perturbed": {
        "model": {"kind": "rotating", "g": 1.0, "f0": 10.0},
        "grid": {"x_min": 0.0, "x_max": 1.0, "cells": 20},
        "initial": {"B": BUMP_10, "perturbation": "1e-3*exp(-200*(x - 0.55)**2)"},
        "equilibrium": {"G2": 2.0, "discharge": 0.0, "v": "0.05*sin(2*pi*x)"},
        "controls": {"t_final": 0.2},
        "output": {"snapshots": [0.1, 0.2]},
    },
    "ex11": {
        "model": {"kind": "rotating", "g": 1.0, "f0": 1.0},
        "grid": {"x_min": -10.0, "x_max": 10.0, "cells": 4000},
        "initial": {"h": "1", "hu": "0", "hv": f"2*{N2}"},
        "controls": {"t_final": INERTIAL_PERIOD},
        "output": {"snapshots": [k * INERTIAL_PERIOD / 5 for k in range(1, 6)],
                   "record_every": 1000},
    },
}

for _name, _p in PRESETS.items():
    _p["name"] = _name

DESCRIPTIONS = {
    "ex1": "smooth periodic flow with Manning friction (accuracy test)",
    "ex2": "still water over two bumps",
    "ex2-perturbed": "still water with a 1e-6 depth perturbation",
    "ex3-I": "supercritical flow over a bump, converging to a moving steady state",
    "ex3-II": "subcritical flow over a bump, converging to a moving steady state",
    "ex4-I": "supercritical flow over a bump with Manning friction",
    "ex4-II": "subcritical flow over a bump with Manning friction",
    "ex4-prepared-I": "prepared discrete frictional equilibrium, supercritical",
    "ex4-prepared-II": "prepared discrete frictional equilibrium, subcritical",
    "ex4-perturbed-I": "perturbed frictional equilibrium, supercritical",
    "ex4-perturbed-II": "perturbed frictional equilibrium, subcritical",
    "ex5-1": "dam break onto a dry bed",
    "ex5-2": "Riemann problem producing a dry zone",
    "ex6": "dam break over two bumps (g = 1)",
    "ex7": "oscillation in a parabolic bowl",
    "ex8": "moving-water equilibrium with Coriolis forces",
    "ex9": "geostrophic equilibrium over a flat bottom",
    "ex10": "geostrophic equilibrium over a bump",
    "ex10-perturbed": "perturbed geostrophic equilibrium over a bump",
    "ex11": "Rossby adjustment of a jet (one inertial period)",
}

# long-cell variant of the Rossby test
PRESETS["ex11-fine"] = dict(PRESETS["ex11"], name="ex11-fine",
                            grid={"x_min": -10.0, "x_max": 10.0, "cells": 20000})
DESCRIPTIONS["ex11-fine"] = "Rossby adjustment on 20000 cells"

# same flow with the steeper beta-plane f = 2 pi / 50 + 0.01 x
PRESETS["ex8-steep"] = copy.deepcopy(PRESETS["ex8"])
PRESETS["ex8-steep"]["name"] = "ex8-steep"
PRESETS["ex8-steep"]["model"]["beta"] = 0.01
DESCRIPTIONS["ex8-steep"] = "Coriolis moving-water equilibrium with beta = 0.01"
