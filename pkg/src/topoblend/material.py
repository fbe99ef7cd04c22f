"""SIMP material interpolation for plane-stress isotropic elasticity.

The void tensor is a fixed fraction of the solid one (C0 = rho0 * C1), so
the interpolated tensor factors into a scalar stiffness multiplier times a
single reference tensor. Assembly then only ever scales one 8x8 element
matrix, which is where essentially all the speed of this package comes from.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MaterialModel:
    """Solid material constants plus the SIMP exponent and void stiffness ratio."""

    E: float          # Young's modulus, Pa
    nu: float         # Poisson ratio
    q: float = 3.0    # SIMP power
    rho0: float = 1e-3  # void-to-solid stiffness ratio

    def __post_init__(self):
        if self.E <= 0:
            raise ValueError(f"E must be > 0, got {self.E}")
        if not (0.0 <= self.nu < 0.5):
            raise ValueError(f"nu must be in [0, 0.5) for plane stress, got {self.nu}")
        if self.q < 1:
            raise ValueError(f"SIMP exponent must be >= 1, got {self.q}")
        if not (0.0 < self.rho0 < 1.0):
            raise ValueError(f"void ratio must be in (0, 1), got {self.rho0}")

    def solid_tensor(self) -> np.ndarray:
        return plane_stress_tensor(self.E, self.nu)

    def scale(self, m):
        """Stiffness multiplier rho0 + m^q (1 - rho0); callers clamp m to [0,1]."""
        return self.rho0 + np.asarray(m) ** self.q * (1.0 - self.rho0)

    def d_scale(self, m):
        """Derivative of scale: q m^(q-1) (1 - rho0)."""
        return self.q * np.asarray(m) ** (self.q - 1.0) * (1.0 - self.rho0)


def plane_stress_tensor(E: float, nu: float) -> np.ndarray:
    """Plane-stress constitutive matrix in Voigt order (exx, eyy, gxy).

    Built as the trace part E*nu/(1-nu^2) plus the identity part E/(1+nu);
    the shear entry carries the usual 1/2 of the engineering-shear convention.
    """
    if not (0.0 <= nu < 0.5):
        raise ValueError(f"nu must be in [0, 0.5) for plane stress, got {nu}")
    if E <= 0:
        raise ValueError(f"E must be > 0, got {E}")
    lam = E * nu / (1.0 - nu * nu)
    mu = E / (1.0 + nu)
    C = np.array([
        [lam + mu, lam, 0.0],
        [lam, lam + mu, 0.0],
        [0.0, 0.0, 0.5 * mu],
    ])
    return C
