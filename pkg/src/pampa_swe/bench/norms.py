"""Discrete error norms, Runge restriction and convergence rates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FIELD_NAMES = ("h", "hu", "hv")


def _weights(n_points: int, dx: float, kind: str) -> np.ndarray:
    if kind == "average":
        return np.full(n_points, dx)
    w = np.full(n_points, dx)
    w[0] = w[-1] = 0.5 * dx
    return w


def norms_1d(err, dx: float, kind: str) -> dict:
    """L1, L2 and Linf of one error field.

    Averages use dx per cell; point values use trapezoid weights, halving
    the two end nodes.
    """
    err = np.abs(np.asarray(err, dtype=float))
    w = _weights(err.shape[-1], dx, kind)
    return {"L1": float(np.sum(w * err)), "L2": float(np.sqrt(np.sum(w * err * err))),
            "Linf": float(err.max()) if err.size else 0.0}


def error_norms(points, averages, ref_points, ref_averages, dx: float) -> dict:
    """Per-field norms for point values and cell averages.

    Returns ``{"point": {"h": {...}, ...}, "average": {...}}``.
    """
    points, averages = np.atleast_2d(points), np.atleast_2d(averages)
    ref_points, ref_averages = np.atleast_2d(ref_points), np.atleast_2d(ref_averages)
    if points.shape != ref_points.shape or averages.shape != ref_averages.shape:
        raise ValueError(f"shape mismatch: {points.shape}/{ref_points.shape}, "
                         f"{averages.shape}/{ref_averages.shape}")
    out = {"point": {}, "average": {}}
    for k in range(points.shape[0]):
        out["point"][FIELD_NAMES[k]] = norms_1d(points[k] - ref_points[k], dx, "point")
        out["average"][FIELD_NAMES[k]] = norms_1d(averages[k] - ref_averages[k], dx, "average")
    return out


def restrict(fine_points, fine_averages):
    """Fine-mesh data on the next coarser mesh.

    Coarse nodes coincide with every second fine node; a coarse average is
    the mean of its two fine averages, which is exact aggregation.
    """
    fine_points = np.atleast_2d(fine_points)
    fine_averages = np.atleast_2d(fine_averages)
    if fine_averages.shape[-1] % 2:
        raise ValueError("fine mesh must have an even number of cells")
    return fine_points[:, ::2], 0.5 * (fine_averages[:, 0::2] + fine_averages[:, 1::2])


def rates(errors) -> list:
    """log2(E(dx) / E(dx/2)) for consecutive entries; None where undefined."""
    out = [None]
    for a, b in zip(errors[:-1], errors[1:]):
        out.append(float(np.log2(a / b)) if a > 0 and b > 0 else None)
    return out


@dataclass
class ErrorReport:
    """Errors on a mesh sequence, one entry per mesh.

    ``norms[i]`` is the output of :func:`error_norms` for ``cells[i]``.
    """

    cells: list
    dx: list
    norms: list = field(default_factory=list)
    method: str = "runge"

    def series(self, kind: str, name: str, norm: str = "L1") -> list:
        return [n[kind][name][norm] for n in self.norms]

    def rate_series(self, kind: str, name: str, norm: str = "L1") -> list:
        return rates(self.series(kind, name, norm))

    def table(self, norm: str = "L1") -> str:
        names = list(self.norms[0]["point"]) if self.norms else []
        lines = []
        for kind in ("point", "average"):
            head = ["cells", "dx"] + [f"{norm}({name})  rate" for name in names]
            lines.append(f"# {kind} values")
            lines.append(" | ".join(head))
            cols = [(self.series(kind, nm, norm), self.rate_series(kind, nm, norm)) for nm in names]
            for i, n in enumerate(self.cells):
                row = [str(n), f"{self.dx[i]:.6g}"]
                for err, rt in cols:
                    row.append(f"{err[i]:.3e}  " + ("-" if rt[i] is None else f"{rt[i]:.2f}"))
                lines.append(" | ".join(row))
        return "\n".join(lines)
