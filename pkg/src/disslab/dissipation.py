"""Box-restricted total energy and energy dissipation rates of fan configurations.

All rates refer to the square box (-L, L)^2 at the initial instant and are
exactly linear in L.  The sign convention is fixed by the closed forms

    rate_self_similar = -2L ( nu1 (E- - Em) + nu2 (Em - E+) )
    rate_subsolution  = -2L ( nu- (E- - E1) + nu+ (E1 - E+) )

which equal the negative right time derivative of the boxed energy
integral; more negative means more dissipative.  Verdicts only ever
compare rates of configurations sharing the same outer states, so the
common boundary-flux contribution drops out of every comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gas
from .errors import DomainError
from .gas import GasLaw
from .riemann import RiemannData, SelfSimilarTwoShock
from .subsolution import FanSubsolution


@dataclass(frozen=True)
class BoxEnergy:
    """Total energy of a fan profile restricted to (-L, L)^2."""

    L: float
    value: float


@dataclass(frozen=True)
class DissipationReport:
    """Rates of both solution families on the same box, and their comparison."""

    L: float
    D_self: float
    D_sub: float
    gap: float
    rel_gap: float
    verdict: bool


def energy_levels(
    data: RiemannData, law: GasLaw, self_sim: SelfSimilarTwoShock
) -> tuple[float, float, float]:
    """Energy densities (E_minus, E_m, E_plus) of the three two-shock sectors.

    Outer sectors use the full squared speed of the data; the middle sector
    carries velocity (v_t, v_bar) where v_t is the common tangential
    component (zero in the standard frame).
    """
    vt = data.tangential
    e_minus = gas.energy_density(
        law, data.rho_minus, data.v_minus[0] ** 2 + data.v_minus[1] ** 2
    )
    e_mid = gas.energy_density(law, self_sim.rho_m, vt ** 2 + self_sim.v_bar ** 2)
    e_plus = gas.energy_density(
        law, data.rho_plus, data.v_plus[0] ** 2 + data.v_plus[1] ** 2
    )
    return (e_minus, e_mid, e_plus)


def rate_self_similar(
    levels: tuple[float, float, float], nu1: float, nu2: float, L: float
) -> float:
    """Dissipation rate -2L(nu1(E- - Em) + nu2(Em - E+)) of the two-shock fan."""
    if not L > 0.0:
        raise DomainError(f"box half-width must be positive, got {L!r}")
    e_minus, e_mid, e_plus = levels
    return -2.0 * L * (nu1 * (e_minus - e_mid) + nu2 * (e_mid - e_plus))


def subsolution_energy_level(law: GasLaw, sub: FanSubsolution) -> float:
    """Middle-wedge energy density rho1*eps(rho1) + rho1*C/2.

    The induced velocity fields all satisfy |v|^2 = C in the middle wedge,
    so this level is shared by every solution built on the subsolution.
    """
    return gas.energy_density(law, sub.rho1, sub.C)


def rate_subsolution(
    data: RiemannData, law: GasLaw, sub: FanSubsolution, L: float
) -> float:
    """Dissipation rate -2L(nu-(E- - E1) + nu+(E1 - E+)) of a fan subsolution."""
    if not L > 0.0:
        raise DomainError(f"box half-width must be positive, got {L!r}")
    e_minus = gas.energy_density(
        law, data.rho_minus, data.v_minus[0] ** 2 + data.v_minus[1] ** 2
    )
    e_plus = gas.energy_density(
        law, data.rho_plus, data.v_plus[0] ** 2 + data.v_plus[1] ** 2
    )
    e_1 = subsolution_energy_level(law, sub)
    num, nup = sub.partition.nu_minus, sub.partition.nu_plus
    return -2.0 * L * (num * (e_minus - e_1) + nup * (e_1 - e_plus))


def compare(
    data: RiemannData,
    law: GasLaw,
    self_sim: SelfSimilarTwoShock,
    sub: FanSubsolution,
    L: float,
    *,
    rel_tol: float = 0.0,
) -> DissipationReport:
    """Compare the two families' rates on the same box.

    The verdict is True when the subsolution rate undercuts the two-shock
    rate strictly beyond rel_tol (relative to the two-shock rate).  Both
    rates scale linearly in L, so the verdict is L-independent.
    """
    d_self = rate_self_similar(
        energy_levels(data, law, self_sim), self_sim.nu1, self_sim.nu2, L
    )
    d_sub = rate_subsolution(data, law, sub, L)
    gap = d_sub - d_self
    denom = abs(d_self) if d_self != 0.0 else 1.0
    rel_gap = -gap / denom
    return DissipationReport(
        L=L,
        D_self=d_self,
        D_sub=d_sub,
        gap=gap,
        rel_gap=rel_gap,
        verdict=gap < -rel_tol * denom,
    )


def box_energy(
    levels: tuple[float, ...], speeds: tuple[float, ...], L: float, t: float
) -> BoxEnergy:
    """Boxed energy integral of a fan profile at time t by explicit geometry.

    levels are the sector energy densities bottom to top and speeds the
    interface speeds between them (ascending).  Valid while every
    interface stays inside the box, i.e. max|speed| * t <= L.
    """
    if not L > 0.0:
        raise DomainError(f"box half-width must be positive, got {L!r}")
    if t < 0.0:
        raise DomainError(f"time must be nonnegative, got {t!r}")
    if len(levels) != len(speeds) + 1:
        raise DomainError("need exactly one more level than interface speeds")
    if any(s2 <= s1 for s1, s2 in zip(speeds, speeds[1:])):
        raise DomainError(f"interface speeds must be ascending, got {speeds!r}")
    if speeds and max(abs(s) for s in speeds) * t > L:
        raise DomainError(
            f"an interface left the box: max|speed|*t = "
            f"{max(abs(s) for s in speeds) * t!r} > L = {L!r}"
        )
    cuts = [-L] + [s * t for s in speeds] + [L]
    total = sum(
        (hi - lo) * level for lo, hi, level in zip(cuts, cuts[1:], levels)
    )
    return BoxEnergy(L=L, value=2.0 * L * total)
