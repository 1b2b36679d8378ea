"""Command line entry point: ``pampa-bench``.

Subcommands::

    pampa-bench list-examples
    pampa-bench example ex3-II --cells 200 --tfinal 50 --out results/
    pampa-bench run my_case.toml --out results/
    pampa-bench converge ex1.toml --meshes 64,128,256,512
"""

from __future__ import annotations

import argparse
import logging
import sys

from ..time_integration import SolverError
from .config import ConfigError, ExperimentConfig
from .presets import DESCRIPTIONS, PRESETS
from .runner import convergence_study, run_experiment

log = logging.getLogger("pampa_swe.bench")


def _summary(res) -> str:
    s = res.state
    lines = [f"{res.config.name}: {s.grid.n_cells} cells, t = {s.time:g}, {res.run.steps} steps, "
             f"{res.runtime:.2f} s",
             f"  min h over all stages = {res.run.stage_min_h:.3e}, "
             f"mass {res.initial.mass():.15g} -> {s.mass():.15g}"]
    if res.errors:
        for kind, per_field in res.errors.items():
            for name, nrm in per_field.items():
                lines.append(f"  {kind:7s} {name:3s} L1 {nrm['L1']:.3e}  L2 {nrm['L2']:.3e}  "
                             f"Linf {nrm['Linf']:.3e}")
    for p in res.files:
        lines.append(f"  wrote {p}")
    return "\n".join(lines)


def _controls_overrides(args) -> dict:
    c = {}
    if getattr(args, "tfinal", None) is not None:
        c["t_final"] = args.tfinal
    if getattr(args, "quadrature", None):
        c["quadrature"] = args.quadrature
    if getattr(args, "order", None):
        c["order"] = args.order
    if getattr(args, "cfl", None) is not None:
        c["cfl"] = args.cfl
    if getattr(args, "backend", None):
        c["backend"] = args.backend
    return c


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    over = {}
    ctrl = _controls_overrides(args)
    if ctrl:
        over["controls"] = ctrl
    if getattr(args, "cells", None):
        over["grid"] = {"cells": args.cells}
    if getattr(args, "svg", False):
        over["output"] = {"svg": True}
    snaps = cfg.data["output"]["snapshots"]
    if ctrl.get("t_final") is not None and snaps:
        over.setdefault("output", {})["snapshots"] = [t for t in snaps if t <= ctrl["t_final"]]
    return cfg.with_overrides(**over) if over else cfg


def cmd_list(args) -> int:
    width = max(len(k) for k in PRESETS)
    for name in PRESETS:
        p = PRESETS[name]
        grid = p.get("grid", {})
        print(f"{name:{width}s}  {DESCRIPTIONS.get(name, '')} "
              f"[{grid.get('cells', '?')} cells, t = {p.get('controls', {}).get('t_final', '?'):g}]")
    return 0


def cmd_example(args) -> int:
    cfg = _apply_overrides(ExperimentConfig.from_dict({"example": args.name}), args)
    print(_summary(run_experiment(cfg, args.out)))
    return 0


def cmd_run(args) -> int:
    cfg = _apply_overrides(ExperimentConfig.from_file(args.config), args)
    print(_summary(run_experiment(cfg, args.out)))
    return 0


def cmd_converge(args) -> int:
    if args.config in PRESETS:
        cfg = ExperimentConfig.from_dict({"example": args.config})
    else:
        cfg = ExperimentConfig.from_file(args.config)
    cfg = _apply_overrides(cfg, args)
    meshes = [int(m) for m in args.meshes.split(",") if m.strip()]
    report = convergence_study(cfg, meshes, args.out, continuation=args.continuation)
    print(f"{cfg.name}: {report.method} errors")
    print(report.table(args.norm))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pampa-bench", description="Shallow water benchmark runner")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--cells", type=int)
        sp.add_argument("--tfinal", type=float)
        sp.add_argument("--quadrature", choices=["scIII", "IIIA", "sc_lobattoIII", "lobattoIIIA"])
        sp.add_argument("--order", choices=["high", "low", "unlimited"])
        sp.add_argument("--cfl", type=float)
        sp.add_argument("--backend", choices=["compiled", "numpy"])
        sp.add_argument("--out", help="directory for CSV/SVG/manifest output")
        sp.add_argument("--svg", action="store_true", help="also write an SVG surface plot")

    sp = sub.add_parser("list-examples", help="list built-in presets")
    sp.set_defaults(func=cmd_list)

    sp = sub.add_parser("example", help="run a built-in preset")
    sp.add_argument("name", choices=sorted(PRESETS))
    common(sp)
    sp.set_defaults(func=cmd_example)

    sp = sub.add_parser("run", help="run a TOML config file")
    sp.add_argument("config")
    common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("converge", help="mesh refinement study")
    sp.add_argument("config", help="TOML config file or preset name")
    sp.add_argument("--meshes", required=True, help="comma separated cell counts, each 2x the previous")
    sp.add_argument("--norm", default="L1", choices=["L1", "L2", "Linf"])
    sp.add_argument("--continuation", action="store_true",
                    help="start each mesh from the prolonged previous result")
    common(sp)
    sp.set_defaults(func=cmd_converge)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, SolverError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
