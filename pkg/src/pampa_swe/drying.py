"""Velocity desingularization for nearly dry states."""

import numpy as np

DRY_H = 1e-14
H0 = 1e-4
EPS_VEL = 5e-9


def dry_velocity(h, hu):
    """Velocity from (h, hu) with a smooth regularization below ``H0``.

    h <= 1e-14 gives u = 0; h >= 1e-4 gives hu / h; in between
    u = hu * h / (h^2 + f(h) * 5e-9) with f(h) = 2 s^3 - 3 s^2 + 1, s = h / 1e-4.
    """
    h = np.asarray(h, dtype=float)
    hu = np.asarray(hu, dtype=float)
    s = np.clip(h / H0, 0.0, 1.0)
    blend = (2.0 * s - 3.0) * s * s + 1.0
    blend = np.where(h >= H0, 0.0, blend)
    denom = h * h + blend * EPS_VEL
    safe = np.where(h > DRY_H, denom, 1.0)
    return np.where(h > DRY_H, hu * h / safe, 0.0)
