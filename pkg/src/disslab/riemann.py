"""Classification of planar Riemann data and the self-similar two-shock solution.

Data consist of two constant states (rho, v) separated by the line x2 = 0.
When the normal velocities approach fast enough, the solution is a pair of
compressive shocks enclosing a middle state; this module decides the regime,
builds the middle state by intersecting the two admissible shock curves, and
checks the Lax inequalities and jump conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import gas
from .errors import DomainError, NumericalError, TwoShockRegimeError
from .gas import GasLaw
from .rootfind import bracketed_newton, expand_upper


@dataclass(frozen=True)
class RiemannData:
    """Constant states (rho_minus, v_minus) for x2 < 0 and (rho_plus, v_plus) for x2 > 0.

    Velocities are (v1, v2) pairs; v1 is tangential to the initial
    discontinuity and must agree on both sides (data with a tangential
    jump never produce a pure two-shock solution and are rejected here).
    """

    rho_minus: float
    v_minus: tuple[float, float]
    rho_plus: float
    v_plus: tuple[float, float]

    def __post_init__(self):
        if not (self.rho_minus > 0.0 and self.rho_plus > 0.0):
            raise DomainError(
                f"densities must be positive, got {self.rho_minus!r}, {self.rho_plus!r}"
            )
        if self.v_minus[0] != self.v_plus[0]:
            raise DomainError(
                "tangential velocity components must be equal, got "
                f"{self.v_minus[0]!r} and {self.v_plus[0]!r}"
            )

    @property
    def tangential(self) -> float:
        return self.v_minus[0]


@dataclass(frozen=True)
class SelfSimilarTwoShock:
    """Middle state and shock speeds of the double-shock Riemann solution."""

    rho_m: float
    v_bar: float
    nu1: float
    nu2: float
    lax_ok_1: bool
    lax_ok_3: bool


class TwoShockCheck(NamedTuple):
    satisfied: bool
    margin: float


def shock_velocity_jump(law: GasLaw, a: float, b: float) -> float:
    """Magnitude of the normal-velocity jump across the shock joining densities b and a.

    Equals sqrt((a - b) * (p(a) - p(b)) / (a * b)); the radicand is
    nonnegative for every positive pair because p is increasing.
    """
    return math.sqrt(
        (a - b) * (gas.pressure(law, a) - gas.pressure(law, b)) / (a * b)
    )


def _shock_velocity_jump_deriv(law: GasLaw, a: float, b: float) -> float:
    # d/da of shock_velocity_jump; requires a != b
    pa, pb = gas.pressure(law, a), gas.pressure(law, b)
    r = (a - b) * (pa - pb) / (a * b)
    dr = ((pa - pb) + (a - b) * gas.sound_speed_sq(law, a)) / (a * b) - (
        a - b
    ) * (pa - pb) / (a * a * b)
    return dr / (2.0 * math.sqrt(r))


def two_shock_condition(data: RiemannData, law: GasLaw) -> TwoShockCheck:
    """Decide whether the data produce two compressive shocks.

    The criterion is the strict inequality
    v_plus2 - v_minus2 < -sqrt((rho- - rho+)(p(rho-) - p(rho+)) / (rho- rho+)),
    i.e. the normal approach speed exceeds the velocity jump of the single
    shock connecting the two outer densities.  The returned margin is
    (right side) - (left side), positive exactly when satisfied.
    """
    lhs = data.v_plus[1] - data.v_minus[1]
    rhs = -shock_velocity_jump(law, data.rho_minus, data.rho_plus)
    margin = rhs - lhs
    return TwoShockCheck(margin > 0.0, margin)


def solve_middle_state(
    data: RiemannData,
    law: GasLaw,
    *,
    gap_tol: float = 1e-12,
    residual_rtol: float = 1e-10,
) -> SelfSimilarTwoShock:
    """Intersect the two admissible shock curves and return the middle state.

    The middle density rho_m > max(rho-, rho+) solves
        v_minus2 - S(rho_m; rho-) = v_plus2 + S(rho_m; rho+)
    with S the shock velocity jump; the common value is the middle normal
    velocity v_bar, and the shock speeds follow from the mass jump
    conditions.  The gap function is strictly decreasing in rho_m, so a
    doubling bracket plus safeguarded Newton iteration is robust.
    """
    ok, margin = two_shock_condition(data, law)
    if not ok:
        raise TwoShockRegimeError(
            f"not in two-shock regime (condition margin {margin!r})"
        )
    rm, rp = data.rho_minus, data.rho_plus
    vm2, vp2 = data.v_minus[1], data.v_plus[1]
    approach = vm2 - vp2

    def gap(rho: float) -> float:
        return (
            approach
            - shock_velocity_jump(law, rho, rm)
            - shock_velocity_jump(law, rho, rp)
        )

    def dgap(rho: float) -> float:
        return -_shock_velocity_jump_deriv(law, rho, rm) - _shock_velocity_jump_deriv(
            law, rho, rp
        )

    lo = max(rm, rp)
    scale = 1.0 + abs(approach)
    try:
        hi = expand_upper(gap, lo)
        rho_m = bracketed_newton(
            gap, lo, hi, dgap, ftol=gap_tol * scale, xtol=1e-15
        )
    except NumericalError as exc:
        raise NumericalError(
            f"middle-state bracketing failed for data={data!r}: {exc}"
        ) from exc

    v_bar = 0.5 * (
        (vm2 - shock_velocity_jump(law, rho_m, rm))
        + (vp2 + shock_velocity_jump(law, rho_m, rp))
    )
    nu1 = (rm * vm2 - rho_m * v_bar) / (rm - rho_m)
    nu2 = (rho_m * v_bar - rp * vp2) / (rho_m - rp)

    vt = data.tangential
    res1 = rh_residual((rm, vm2, vt), (rho_m, v_bar, vt), nu1, law)
    res3 = rh_residual((rho_m, v_bar, vt), (rp, vp2, vt), nu2, law)
    res_scale = residual_rtol * (
        1.0 + max(rho_m, abs(vm2), abs(vp2), gas.pressure(law, rho_m))
    )
    worst = max(max(abs(r) for r in res1), max(abs(r) for r in res3))
    if worst > res_scale or not (nu1 < nu2) or not (rho_m > lo):
        raise NumericalError(
            "middle-state solve left inconsistent output: "
            f"rho_m={rho_m!r}, nu=({nu1!r}, {nu2!r}), max residual {worst!r}"
        )

    state = SelfSimilarTwoShock(
        rho_m=rho_m,
        v_bar=v_bar,
        nu1=nu1,
        nu2=nu2,
        lax_ok_1=check_lax((rm, vm2), (rho_m, v_bar), nu1, 1, law),
        lax_ok_3=check_lax((rho_m, v_bar), (rp, vp2), nu2, 3, law),
    )
    return state


def check_lax(
    state_l: tuple[float, float],
    state_r: tuple[float, float],
    sigma: float,
    family: int,
    law: GasLaw,
) -> bool:
    """Lax inequalities lambda_k(right) < sigma < lambda_k(left) for family k in {1, 3}.

    States are (density, normal velocity) pairs; the characteristic speeds
    are u -/+ sqrt(p'(rho)) for the first/third family.
    """
    if family not in (1, 3):
        raise DomainError(f"family must be 1 or 3, got {family!r}")
    sign = -1.0 if family == 1 else 1.0
    lam_l = state_l[1] + sign * math.sqrt(gas.sound_speed_sq(law, state_l[0]))
    lam_r = state_r[1] + sign * math.sqrt(gas.sound_speed_sq(law, state_r[0]))
    return lam_r < sigma < lam_l


def rh_residual(
    state_l: tuple[float, float, float],
    state_r: tuple[float, float, float],
    sigma: float,
    law: GasLaw,
) -> tuple[float, float, float]:
    """Jump-condition residuals across a planar shock of speed sigma.

    States are (density, normal velocity, tangential velocity) triples and
    [q] denotes the jump q_right - q_left.  Returns
    (sigma*[rho] - [rho u_n], sigma*[rho u_t] - [rho u_t u_n],
     sigma*[rho u_n] - [rho u_n^2 + p]); all three vanish on exact shocks.
    """
    rho_l, un_l, ut_l = state_l
    rho_r, un_r, ut_r = state_r
    p_l, p_r = gas.pressure(law, rho_l), gas.pressure(law, rho_r)
    r_mass = sigma * (rho_r - rho_l) - (rho_r * un_r - rho_l * un_l)
    r_tan = sigma * (rho_r * ut_r - rho_l * ut_l) - (
        rho_r * ut_r * un_r - rho_l * ut_l * un_l
    )
    r_norm = sigma * (rho_r * un_r - rho_l * un_l) - (
        (rho_r * un_r ** 2 + p_r) - (rho_l * un_l ** 2 + p_l)
    )
    return (r_mass, r_tan, r_norm)
