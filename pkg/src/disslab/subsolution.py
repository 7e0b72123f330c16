"""Fan partitions, fan subsolutions, and their algebraic feasibility system.

A fan subsolution is a piecewise-constant triple (density, velocity,
traceless symmetric tensor) on three wedges of space-time separated by the
lines x2 = nu_minus*t and x2 = nu_plus*t.  The outer wedges carry the
Riemann states; the middle wedge carries the unknowns
(rho1, v1 = (alpha, beta), u1 = [[gamma1, gamma2], [gamma2, -gamma1]])
together with a kinetic-energy bound C.  This module evaluates the six
interface jump conditions as residuals and the four feasibility margins
(two strict matrix-positivity conditions and two interface energy-flux
inequalities).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import gas
from .errors import DomainError, ReductionError
from .gas import GasLaw
from .riemann import RiemannData


@dataclass(frozen=True)
class FanPartition:
    """Wedge interface speeds nu_minus < nu_plus."""

    nu_minus: float
    nu_plus: float

    def __post_init__(self):
        if not (self.nu_minus < self.nu_plus):
            raise DomainError(
                f"fan partition needs nu_minus < nu_plus, got "
                f"{self.nu_minus!r} >= {self.nu_plus!r}"
            )


@dataclass(frozen=True)
class FanSubsolution:
    """Middle-wedge unknowns of a fan subsolution.

    C bounds the middle-wedge kinetic energy (|v|^2 <= C for the induced
    velocity fields).  C == 0 is admitted so that classical two-shock
    solutions embed (with v1 = 0 there); strict positivity is part of the
    feasibility margins, not of the container.
    """

    partition: FanPartition
    rho1: float
    alpha: float
    beta: float
    gamma1: float
    gamma2: float
    C: float

    def __post_init__(self):
        if not (self.rho1 > 0.0):
            raise DomainError(f"rho1 must be positive, got {self.rho1!r}")
        if self.C < 0.0:
            raise DomainError(f"C must be nonnegative, got {self.C!r}")


@dataclass(frozen=True)
class SystemResiduals:
    """Signed residuals (left side minus right side) of the six jump conditions."""

    cont_left: float
    mom_1_left: float
    mom_2_left: float
    cont_right: float
    mom_1_right: float
    mom_2_right: float

    def as_tuple(self) -> tuple[float, ...]:
        return (
            self.cont_left,
            self.mom_1_left,
            self.mom_2_left,
            self.cont_right,
            self.mom_1_right,
            self.mom_2_right,
        )

    @property
    def max_abs(self) -> float:
        return max(abs(r) for r in self.as_tuple())


@dataclass(frozen=True)
class FeasibilityMargins:
    """Margins of the strict subsolution and interface admissibility conditions.

    m_trace and m_det are the trace and determinant margins of the matrix
    bound (C/2)Id - v1 (x) v1 + u1 > 0; m_adm_left / m_adm_right are
    (right side) - (left side) of the interface energy-flux inequalities.
    A subsolution is feasible when the first two are strictly positive and
    the last two nonnegative.
    """

    m_trace: float
    m_det: float
    m_adm_left: float
    m_adm_right: float

    def feasible(self, floor: float = 0.0) -> bool:
        return (
            self.m_trace > floor
            and self.m_det > floor
            and self.m_adm_left >= floor
            and self.m_adm_right >= floor
        )

    @property
    def smallest(self) -> float:
        return min(self.m_trace, self.m_det, self.m_adm_left, self.m_adm_right)


def rh_residuals(
    sub: FanSubsolution, data: RiemannData, law: GasLaw
) -> SystemResiduals:
    """Evaluate the six interface jump conditions of the fan system.

    The normal momentum balances carry the relaxed pressure, i.e. the
    middle-wedge flux includes +/- rho1*C/2 alongside the tensor entry
    gamma1.  Residuals are exactly linear in nu_minus, nu_plus, gamma1
    and gamma2.
    """
    rm, rp = data.rho_minus, data.rho_plus
    vm1, vm2 = data.v_minus
    vp1, vp2 = data.v_plus
    r1, a, b = sub.rho1, sub.alpha, sub.beta
    g1, g2, C = sub.gamma1, sub.gamma2, sub.C
    num, nup = sub.partition.nu_minus, sub.partition.nu_plus
    pm = gas.pressure(law, rm)
    pp = gas.pressure(law, rp)
    p1 = gas.pressure(law, r1)

    cont_left = num * (rm - r1) - (rm * vm2 - r1 * b)
    mom_1_left = num * (rm * vm1 - r1 * a) - (rm * vm1 * vm2 - r1 * g2)
    mom_2_left = num * (rm * vm2 - r1 * b) - (
        rm * vm2 ** 2 + r1 * g1 + pm - p1 - r1 * C / 2.0
    )
    cont_right = nup * (r1 - rp) - (r1 * b - rp * vp2)
    mom_1_right = nup * (r1 * a - rp * vp1) - (r1 * g2 - rp * vp1 * vp2)
    mom_2_right = nup * (r1 * b - rp * vp2) - (
        -r1 * g1 - rp * vp2 ** 2 + p1 - pp + r1 * C / 2.0
    )
    return SystemResiduals(
        cont_left, mom_1_left, mom_2_left, cont_right, mom_1_right, mom_2_right
    )


def margins(
    sub: FanSubsolution, data: RiemannData, law: GasLaw
) -> FeasibilityMargins:
    """Evaluate the four feasibility margins of a fan subsolution."""
    rm, rp = data.rho_minus, data.rho_plus
    vm1, vm2 = data.v_minus
    vp1, vp2 = data.v_plus
    r1, a, b = sub.rho1, sub.alpha, sub.beta
    g1, g2, C = sub.gamma1, sub.gamma2, sub.C
    num, nup = sub.partition.nu_minus, sub.partition.nu_plus

    m_trace = C - a ** 2 - b ** 2
    m_det = (C / 2.0 - a ** 2 + g1) * (C / 2.0 - b ** 2 - g1) - (g2 - a * b) ** 2

    pm = gas.pressure(law, rm)
    pp = gas.pressure(law, rp)
    p1 = gas.pressure(law, r1)
    em = gas.internal_energy(law, rm)
    ep = gas.internal_energy(law, rp)
    e1 = gas.internal_energy(law, r1)
    sm = vm1 ** 2 + vm2 ** 2
    sp = vp1 ** 2 + vp2 ** 2

    lhs_left = num * (rm * em - r1 * e1) + num * (rm * sm / 2.0 - r1 * C / 2.0)
    rhs_left = (
        (rm * em + pm) * vm2
        - (r1 * e1 + p1) * b
        + (rm * vm2 * sm / 2.0 - r1 * b * C / 2.0)
    )
    lhs_right = nup * (r1 * e1 - rp * ep) + nup * (r1 * C / 2.0 - rp * sp / 2.0)
    rhs_right = (
        (r1 * e1 + p1) * b
        - (rp * ep + pp) * vp2
        + (r1 * b * C / 2.0 - rp * vp2 * sp / 2.0)
    )
    return FeasibilityMargins(
        m_trace=m_trace,
        m_det=m_det,
        m_adm_left=rhs_left - lhs_left,
        m_adm_right=rhs_right - lhs_right,
    )


def reduce_tangential(
    data: RiemannData, sub: FanSubsolution, *, tol: float = 0.0
) -> FanSubsolution:
    """Enforce alpha = gamma2 = 0 for data with zero tangential velocity.

    With v_minus1 = v_plus1 = 0 the two tangential momentum balances read
    gamma2 = nu_minus*alpha and gamma2 = nu_plus*alpha; since the interface
    speeds differ, the only consistent values are alpha = gamma2 = 0.
    Inputs violating this (beyond tol) are rejected.
    """
    if data.tangential != 0.0:
        raise ReductionError(
            f"reduction requires zero tangential data, got {data.tangential!r}"
        )
    if abs(sub.alpha) > tol or abs(sub.gamma2) > tol:
        raise ReductionError(
            "tangential unknowns cannot satisfy both interface balances: "
            f"alpha={sub.alpha!r}, gamma2={sub.gamma2!r} "
            f"(speeds {sub.partition.nu_minus!r} != {sub.partition.nu_plus!r})"
        )
    if sub.alpha == 0.0 and sub.gamma2 == 0.0:
        return sub
    return replace(sub, alpha=0.0, gamma2=0.0)


def embed_two_shock(data: RiemannData, law: GasLaw, self_sim) -> FanSubsolution:
    """Map a self-similar two-shock solution into subsolution variables.

    The middle state becomes the middle wedge with v1 = (v_t, v_bar),
    u1 = v1 (x) v1 - |v1|^2/2 * Id and C = |v1|^2; with these values the
    six jump conditions reduce to the classical ones and the matrix-bound
    margins sit exactly on zero.
    """
    vt = data.tangential
    b = self_sim.v_bar
    c = vt ** 2 + b ** 2
    return FanSubsolution(
        partition=FanPartition(self_sim.nu1, self_sim.nu2),
        rho1=self_sim.rho_m,
        alpha=vt,
        beta=b,
        gamma1=vt ** 2 - c / 2.0,
        gamma2=vt * b,
        C=c,
    )
