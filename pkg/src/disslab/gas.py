"""Equation of state and energy densities for the polytropic gas p(rho) = rho**gamma."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class GasLaw:
    """Polytropic pressure law p(rho) = rho**gamma, gamma >= 1.

    gamma == 1 (isothermal) is handled by an explicit logarithmic branch
    of the internal energy rather than a limit.
    """

    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma >= 1.0):
            raise DomainError(f"gamma must be a finite number >= 1, got {self.gamma!r}")


def _check_density(rho: float) -> None:
    if not (rho > 0.0):
        raise DomainError(f"density must be positive, got {rho!r}")


def pressure(law: GasLaw, rho: float) -> float:
    """Pressure p(rho) = rho**gamma."""
    _check_density(rho)
    return rho ** law.gamma


def sound_speed_sq(law: GasLaw, rho: float) -> float:
    """Squared sound speed p'(rho) = gamma * rho**(gamma - 1)."""
    _check_density(rho)
    return law.gamma * rho ** (law.gamma - 1.0)


def internal_energy(law: GasLaw, rho: float) -> float:
    """Specific internal energy eps(rho) satisfying rho**2 * eps'(rho) = p(rho).

    The closure integrates to rho**(gamma-1)/(gamma-1) for gamma > 1 and
    log(rho) for gamma == 1; the integration constant is fixed to zero.
    """
    _check_density(rho)
    g = law.gamma
    if g == 1.0:
        return math.log(rho)
    return rho ** (g - 1.0) / (g - 1.0)


def energy_density(law: GasLaw, rho: float, speed_sq: float) -> float:
    """Energy per unit area, rho*eps(rho) + rho*speed_sq/2."""
    if speed_sq < 0.0:
        raise DomainError(f"squared speed must be nonnegative, got {speed_sq!r}")
    return rho * internal_energy(law, rho) + 0.5 * rho * speed_sq
