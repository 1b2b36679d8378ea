"""Saint-Venant (with Manning friction) and rotating shallow water models.

All functions take component-first arrays: ``u[0]`` is h, ``u[1]`` is hu and,
for the rotating system, ``u[2]`` is hv.  Trailing axes are arbitrary.
"""

from __future__ import annotations

import numpy as np

from .drying import dry_velocity, DRY_H

G_DEFAULT = 9.812
CRITICAL_KAPPA = 8.0 / 27.0


class EigenstructureUndefined(ValueError):
    """Raised when the Jacobian eigenbasis is requested at a dry state."""


class ShallowWaterModel:
    """Common part of both shallow water systems."""

    nvars = 2
    name = "base"

    def __init__(self, g: float = G_DEFAULT):
        if not g > 0:
            raise ValueError("g must be positive")
        self.g = float(g)

    def velocity(self, u):
        return dry_velocity(u[0], u[1])

    def velocities(self, u):
        return tuple(dry_velocity(u[0], u[k]) for k in range(1, self.nvars))

    def flux(self, u):
        h, hu = u[0], u[1]
        vel = dry_velocity(h, hu)
        out = [hu, hu * vel + 0.5 * self.g * h * h]
        for k in range(2, self.nvars):
            out.append(hu * dry_velocity(h, u[k]))
        return np.stack(out)

    def max_wave_speed(self, u):
        h = np.maximum(u[0], 0.0)
        return np.abs(dry_velocity(h, u[1])) + np.sqrt(self.g * h)

    def extra_source(self, u, x):
        """Pointwise source without the bathymetry term."""
        return np.zeros_like(u)

    def source(self, u, x, B_x):
        s = self.extra_source(u, x)
        s[1] = s[1] - self.g * u[0] * B_x
        return s

    def jacobian(self, u):
        """Analytic flux Jacobian, shape (..., nvars, nvars)."""
        raise NotImplementedError

    def eigenstructure(self, u):
        """Eigenvalues (nvars, ...) and right/left eigenvector matrices (..., n, n)."""
        raise NotImplementedError

    def _check_wet(self, h):
        if np.any(np.asarray(h) <= DRY_H):
            raise EigenstructureUndefined("eigenstructure undefined at a dry state")


class SaintVenant(ShallowWaterModel):
    """h_t + (hu)_x = 0, (hu)_t + (hu^2 + g h^2/2)_x = -g h B_x - g n^2 |hu| hu / h^(7/3)."""

    nvars = 2
    name = "saint_venant"

    def __init__(self, g: float = G_DEFAULT, manning: float = 0.0):
        super().__init__(g)
        if manning < 0:
            raise ValueError("Manning coefficient must be non-negative")
        self.manning = float(manning)

    def friction(self, u):
        """-g n^2 |hu| hu / h^(7/3), evaluated as -g n^2 |u| u h^(-1/3) with filtered u."""
        h = u[0]
        if self.manning == 0.0:
            return np.zeros_like(h)
        vel = dry_velocity(h, u[1])
        wet = h > DRY_H
        inv_cbrt = np.where(wet, np.exp(-np.log(np.where(wet, h, 1.0)) / 3.0), 0.0)
        return -self.g * self.manning ** 2 * np.abs(vel) * vel * inv_cbrt

    def extra_source(self, u, x):
        s = np.zeros_like(u)
        s[1] = self.friction(u)
        return s

    def jacobian(self, u):
        h, vel = u[0], self.velocity(u)
        J = np.zeros(np.shape(h) + (2, 2))
        J[..., 0, 1] = 1.0
        J[..., 1, 0] = self.g * h - vel ** 2
        J[..., 1, 1] = 2.0 * vel
        return J

    def eigenstructure(self, u):
        h = u[0]
        self._check_wet(h)
        vel = self.velocity(u)
        c = np.sqrt(self.g * h)
        lam = np.stack([vel - c, vel + c])
        R = np.empty(np.shape(h) + (2, 2))
        R[..., 0, 0] = 1.0
        R[..., 0, 1] = 1.0
        R[..., 1, 0] = vel - c
        R[..., 1, 1] = vel + c
        inv2c = 0.5 / c
        Rinv = np.empty_like(R)
        Rinv[..., 0, 0] = (vel + c) * inv2c
        Rinv[..., 0, 1] = -inv2c
        Rinv[..., 1, 0] = -(vel - c) * inv2c
        Rinv[..., 1, 1] = inv2c
        return lam, R, Rinv


class RotatingShallowWater(ShallowWaterModel):
    """Shallow water with Coriolis parameter f(x) = f0 + beta x."""

    nvars = 3
    name = "rotating"

    def __init__(self, g: float = G_DEFAULT, f0: float = 0.0, beta: float = 0.0):
        super().__init__(g)
        self.f0 = float(f0)
        self.beta = float(beta)

    def coriolis(self, x):
        return self.f0 + self.beta * np.asarray(x, dtype=float)

    def extra_source(self, u, x):
        f = self.coriolis(x)
        s = np.zeros_like(u)
        s[1] = f * u[2]
        s[2] = -f * u[1]
        return s

    def jacobian(self, u):
        h = u[0]
        vel = dry_velocity(h, u[1])
        v = dry_velocity(h, u[2])
        J = np.zeros(np.shape(h) + (3, 3))
        J[..., 0, 1] = 1.0
        J[..., 1, 0] = self.g * h - vel ** 2
        J[..., 1, 1] = 2.0 * vel
        J[..., 2, 0] = -vel * v
        J[..., 2, 1] = v
        J[..., 2, 2] = vel
        return J

    def eigenstructure(self, u):
        h = u[0]
        self._check_wet(h)
        vel = dry_velocity(h, u[1])
        v = dry_velocity(h, u[2])
        c = np.sqrt(self.g * h)
        lam = np.stack([vel - c, vel, vel + c])
        shape = np.shape(h)
        R = np.zeros(shape + (3, 3))
        R[..., 0, 0] = 1.0
        R[..., 1, 0] = vel - c
        R[..., 2, 0] = v
        R[..., 2, 1] = 1.0
        R[..., 0, 2] = 1.0
        R[..., 1, 2] = vel + c
        R[..., 2, 2] = v
        inv2c = 0.5 / c
        Rinv = np.zeros_like(R)
        Rinv[..., 0, 0] = (vel + c) * inv2c
        Rinv[..., 0, 1] = -inv2c
        Rinv[..., 1, 0] = -v
        Rinv[..., 1, 2] = 1.0
        Rinv[..., 2, 0] = -(vel - c) * inv2c
        Rinv[..., 2, 1] = inv2c
        return lam, R, Rinv


def physical_flux(u, model: ShallowWaterModel):
    return model.flux(np.asarray(u, dtype=float))


def pointwise_source(u, x, B_x, model: ShallowWaterModel):
    return model.source(np.asarray(u, dtype=float), x, B_x)


def eigenstructure(u, model: ShallowWaterModel):
    return model.eigenstructure(np.asarray(u, dtype=float))


def max_wave_speed(u, model: ShallowWaterModel):
    return model.max_wave_speed(np.asarray(u, dtype=float))


def critical_ratio(flux_vector, g: float = G_DEFAULT, state=None):
    """Return ``(kappa, regime)`` with kappa = g f1^4 / f2^3.

    With the state (h, hu) supplied, the regime is read off the sign of
    Fr - 1.  From the flux alone kappa < 8/27 is met by one subcritical and
    one supercritical depth, so the regime is then "either"; kappa > 8/27
    admits no depth and gives "none".
    """
    f1, f2 = float(flux_vector[0]), float(flux_vector[1])
    if not f2 > 0:
        raise ValueError("critical ratio needs a positive momentum flux")
    kappa = g * f1 ** 4 / f2 ** 3
    if state is not None:
        h, hu = float(state[0]), float(state[1])
        froude = abs(hu / h) / np.sqrt(g * h)
        if np.isclose(froude, 1.0, rtol=0, atol=1e-12):
            return kappa, "critical"
        return kappa, "subcritical" if froude < 1.0 else "supercritical"
    if np.isclose(kappa, CRITICAL_KAPPA, rtol=0, atol=1e-12):
        return kappa, "critical"
    return kappa, "either" if kappa < CRITICAL_KAPPA else "none"


def kappa_from_froude(froude):
    fr2 = np.asarray(froude, dtype=float) ** 2
    return 8.0 * fr2 ** 2 / (2.0 * fr2 + 1.0) ** 3
