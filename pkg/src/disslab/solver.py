"""Subsolution solving for fixed free parameters and the (rho1, C) plane scan.

With zero-tangential data and alpha = gamma2 = 0, fixing (rho1, C) leaves
four unknowns (nu_minus, nu_plus, beta, gamma1) in four equations.  The
continuity balances give both interface speeds as functions of beta, and
each normal momentum balance gives gamma1; equating the two gamma1
expressions yields one scalar equation in beta, solved by bracketed
bisection plus Newton polish in the kernel backend.  The scan sweeps a
rectangular (rho1, C) grid, filters by the feasibility margins, verifies
every surviving point independently through :mod:`disslab.subsolution`,
and ranks by the subsolution dissipation rate.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _core, dissipation, gas, subsolution
from .errors import (
    CertificateError,
    InfeasibleParametersError,
    NumericalError,
    PartitionViolationError,
    SingularEliminationError,
    TwoShockRegimeError,
)
from .gas import GasLaw
from .riemann import (
    RiemannData,
    SelfSimilarTwoShock,
    solve_middle_state,
    two_shock_condition,
)
from .subsolution import FanPartition, FanSubsolution, FeasibilityMargins

THREADS_ENV = "DISSLAB_THREADS"
_MIN_POINTS_PER_THREAD = 64


@dataclass(frozen=True)
class SolveOptions:
    """Tolerances and limits shared by solve_for and scan."""

    margin_floor: float = 1e-6
    residual_tol: float = 1e-10

    def __post_init__(self):
        if not (self.margin_floor > 0.0):
            raise ValueError(f"margin floor must be positive, got {self.margin_floor!r}")


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid lo..hi with n points (n >= 1; lo == hi allowed for n == 1)."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.n < 1 or self.hi < self.lo:
            raise ValueError(f"invalid grid spec {self!r}")

    def values(self) -> np.ndarray:
        if self.n == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.n)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse the CLI form 'lo:hi:n'."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec must be lo:hi:n, got {text!r}")
        return cls(lo=float(parts[0]), hi=float(parts[1]), n=int(parts[2]))


@dataclass(frozen=True)
class SearchPoint:
    """One scanned grid point as written to the CSV dump."""

    rho1: float
    C: float
    status: str
    feasible: bool
    beta: float
    nu_minus: float
    nu_plus: float
    gamma1: float
    m_trace: float
    m_det: float
    m_adm_left: float
    m_adm_right: float
    d_sub: float


@dataclass
class SearchReport:
    """Outcome of a (rho1, C) scan in deterministic grid order."""

    data: RiemannData
    law: GasLaw
    options: SolveOptions
    L: float
    self_similar: SelfSimilarTwoShock
    d_self: float
    points: list[SearchPoint]
    best: FanSubsolution | None = None
    best_margins: FeasibilityMargins | None = None
    best_residuals: subsolution.SystemResiduals | None = None
    best_d_sub: float | None = None
    feasible_count: int = 0
    backend: str = field(default_factory=_core.backend_name)


def _boost_to_zero_tangential(data: RiemannData) -> tuple[RiemannData, float]:
    c = data.tangential
    if c == 0.0:
        return data, 0.0
    boosted = RiemannData(
        rho_minus=data.rho_minus,
        v_minus=(0.0, data.v_minus[1]),
        rho_plus=data.rho_plus,
        v_plus=(0.0, data.v_plus[1]),
    )
    return boosted, c


def _boost_back(sub: FanSubsolution, c: float) -> FanSubsolution:
    """Undo the tangential boost: exact at the subsolution level.

    Shifting the frame by c maps (alpha, gamma2, gamma1, C) ->
    (c, c*beta, gamma1 + c^2/2, C + c^2) and leaves every jump residual
    and feasibility margin unchanged.
    """
    if c == 0.0:
        return sub
    return replace(
        sub,
        alpha=c,
        gamma2=c * sub.beta,
        gamma1=sub.gamma1 + 0.5 * c * c,
        C=sub.C + c * c,
    )


def _system_scale(data: RiemannData, law: GasLaw, sub: FanSubsolution) -> float:
    speeds = max(
        abs(data.v_minus[1]),
        abs(data.v_plus[1]),
        abs(sub.beta),
        abs(sub.partition.nu_minus),
        abs(sub.partition.nu_plus),
    )
    return max(
        max(data.rho_minus, data.rho_plus, sub.rho1) * (1.0 + speeds) ** 2,
        gas.pressure(law, data.rho_minus),
        gas.pressure(law, data.rho_plus),
        gas.pressure(law, sub.rho1),
        sub.rho1 * sub.C,
    )


def solve_for(
    fixed: tuple[float, float],
    data: RiemannData,
    law: GasLaw,
    options: SolveOptions | None = None,
) -> FanSubsolution:
    """Solve the interface system for fixed (rho1, C).

    Data with a common nonzero tangential velocity are boosted to the
    zero-tangential frame and the result is boosted back, so the returned
    subsolution satisfies the jump conditions for the original data.  When
    the scalar beta equation has several admissible roots, the one that is
    feasible at the margin floor (preferring the most dissipative, then
    the smaller beta) is returned.
    """
    opts = options or SolveOptions()
    rho1, C = fixed
    if not rho1 > 0.0 or C < 0.0:
        raise ValueError(f"need rho1 > 0 and C >= 0, got {fixed!r}")
    boosted, c = _boost_to_zero_tangential(data)
    out = _core.solve_point(
        law.gamma,
        boosted.rho_minus,
        boosted.v_minus[1],
        boosted.rho_plus,
        boosted.v_plus[1],
        rho1,
        C,
        opts.margin_floor,
    )
    status = out[0]
    if status == _core.STATUS_SINGULAR:
        raise SingularEliminationError(
            f"rho1={rho1!r} coincides with an outer density "
            f"({data.rho_minus!r}, {data.rho_plus!r})"
        )
    if status == _core.STATUS_NO_ROOT:
        raise InfeasibleParametersError(
            f"no root of the interface system for rho1={rho1!r}, C={C!r}"
        )
    if status == _core.STATUS_PARTITION:
        raise PartitionViolationError(
            f"every root gives nu_minus >= nu_plus for rho1={rho1!r}, C={C!r}"
        )
    sub = FanSubsolution(
        partition=FanPartition(out[2], out[3]),
        rho1=rho1,
        alpha=0.0,
        beta=out[1],
        gamma1=out[4],
        gamma2=0.0,
        C=C,
    )
    sub = _boost_back(sub, c)
    res = subsolution.rh_residuals(sub, data, law)
    if res.max_abs > opts.residual_tol * (1.0 + _system_scale(data, law, sub)):
        raise NumericalError(
            f"solve_for left residual {res.max_abs!r} for rho1={rho1!r}, C={C!r}"
        )
    return sub


_UNKNOWNS = ("nu_minus", "nu_plus", "rho1", "alpha", "beta", "gamma1", "gamma2", "C")


def _analytic_jacobian(
    sub: FanSubsolution, data: RiemannData, law: GasLaw
) -> np.ndarray:
    """6x8 Jacobian of the jump residuals w.r.t. the unknowns (documented order)."""
    rm, rp = data.rho_minus, data.rho_plus
    vm1, vm2 = data.v_minus
    vp1, vp2 = data.v_plus
    r1, a, b = sub.rho1, sub.alpha, sub.beta
    g1, g2, C = sub.gamma1, sub.gamma2, sub.C
    num, nup = sub.partition.nu_minus, sub.partition.nu_plus
    dp1 = gas.sound_speed_sq(law, r1)

    J = np.zeros((6, 8))
    # cont_left
    J[0, 0] = rm - r1
    J[0, 2] = -num + b
    J[0, 4] = r1
    # mom_1_left
    J[1, 0] = rm * vm1 - r1 * a
    J[1, 2] = -num * a + g2
    J[1, 3] = -num * r1
    J[1, 6] = r1
    # mom_2_left
    J[2, 0] = rm * vm2 - r1 * b
    J[2, 2] = -num * b - g1 + dp1 + C / 2.0
    J[2, 4] = -num * r1
    J[2, 5] = -r1
    J[2, 7] = r1 / 2.0
    # cont_right
    J[3, 1] = r1 - rp
    J[3, 2] = nup - b
    J[3, 4] = -r1
    # mom_1_right
    J[4, 1] = r1 * a - rp * vp1
    J[4, 2] = nup * a - g2
    J[4, 3] = nup * r1
    J[4, 6] = -r1
    # mom_2_right
    J[5, 1] = r1 * b - rp * vp2
    J[5, 2] = nup * b + g1 - dp1 - C / 2.0
    J[5, 4] = nup * r1
    J[5, 5] = r1
    J[5, 7] = -r1 / 2.0
    return J


def _with_unknown(sub: FanSubsolution, name: str, value: float) -> FanSubsolution:
    if name == "nu_minus":
        return replace(sub, partition=FanPartition(value, sub.partition.nu_plus))
    if name == "nu_plus":
        return replace(sub, partition=FanPartition(sub.partition.nu_minus, value))
    return replace(sub, **{name: value})


def jacobian_check(
    sub: FanSubsolution,
    data: RiemannData,
    law: GasLaw,
    h: float = 1e-6,
) -> float:
    """Max scaled deviation between analytic and finite-difference Jacobians.

    Central differences, one-sided at the domain boundary (rho1 or C too
    small to perturb downward).  The residuals are polynomial of degree
    two in the unknowns, so central differences are exact up to roundoff.
    """
    J = _analytic_jacobian(sub, data, law)
    base = {
        "nu_minus": sub.partition.nu_minus,
        "nu_plus": sub.partition.nu_plus,
        "rho1": sub.rho1,
        "alpha": sub.alpha,
        "beta": sub.beta,
        "gamma1": sub.gamma1,
        "gamma2": sub.gamma2,
        "C": sub.C,
    }
    worst = 0.0
    col_scale = max(1.0, float(np.max(np.abs(J))))
    for j, name in enumerate(_UNKNOWNS):
        x = base[name]
        hj = h * (1.0 + abs(x))
        lo_ok = True
        if name == "rho1" and x - hj <= 0.0:
            lo_ok = False
        if name == "C" and x - hj < 0.0:
            lo_ok = False
        if name == "nu_minus" and x + hj >= base["nu_plus"]:
            hj = 0.25 * (base["nu_plus"] - x)
        if name == "nu_plus" and x - hj <= base["nu_minus"]:
            hj = 0.25 * (x - base["nu_minus"])
        up = subsolution.rh_residuals(_with_unknown(sub, name, x + hj), data, law)
        if lo_ok:
            dn = subsolution.rh_residuals(_with_unknown(sub, name, x - hj), data, law)
            fd = (np.array(up.as_tuple()) - np.array(dn.as_tuple())) / (2.0 * hj)
        else:
            mid = subsolution.rh_residuals(sub, data, law)
            fd = (np.array(up.as_tuple()) - np.array(mid.as_tuple())) / hj
        worst = max(worst, float(np.max(np.abs(fd - J[:, j]))) / col_scale)
    return worst


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "0")
        try:
            threads = int(raw)
        except ValueError:
            threads = 0
    if threads <= 0:
        threads = min(8, os.cpu_count() or 1)
    return threads


def scan(
    data: RiemannData,
    law: GasLaw,
    grid_rho1: GridSpec,
    grid_C: GridSpec,
    *,
    L: float = 1.0,
    options: SolveOptions | None = None,
    threads: int | None = None,
) -> SearchReport:
    """Sweep the (rho1, C) grid and report feasible subsolutions.

    Grid points are visited rho1-major and results merged in that order
    regardless of thread scheduling, so reports are deterministic.  Every
    point the kernel marks feasible is re-verified through the plain
    subsolution module before it can be ranked; ranking is by dissipation
    rate, ties broken by smaller rho1 then smaller C.
    """
    opts = options or SolveOptions()
    rho1_vals = grid_rho1.values()
    C_vals = grid_C.values()
    if rho1_vals.size == 0 or C_vals.size == 0:
        raise ValueError("empty scan grid")
    ok, margin = two_shock_condition(data, law)
    if not ok:
        raise TwoShockRegimeError(
            f"scan requires the two-shock regime (condition margin {margin!r})"
        )

    self_sim = solve_middle_state(data, law)
    d_self = dissipation.rate_self_similar(
        dissipation.energy_levels(data, law, self_sim),
        self_sim.nu1,
        self_sim.nu2,
        L,
    )

    boosted, c = _boost_to_zero_tangential(data)
    rho1_arr = np.repeat(rho1_vals, C_vals.size)
    C_arr = np.tile(C_vals, rho1_vals.size)
    n = rho1_arr.size
    status = np.empty(n, dtype=np.int32)
    values = np.empty((n, 9))

    nthreads = _resolve_threads(threads)
    n_chunks = max(1, min(nthreads * 4, n // _MIN_POINTS_PER_THREAD))
    args = (
        law.gamma,
        boosted.rho_minus,
        boosted.v_minus[1],
        boosted.rho_plus,
        boosted.v_plus[1],
    )
    if n_chunks == 1 or nthreads == 1:
        _core.scan_chunk(
            *args, rho1_arr, C_arr, opts.margin_floor, status, values
        )
    else:
        bounds = np.linspace(0, n, n_chunks + 1, dtype=int)

        def run(k: int) -> None:
            s = slice(bounds[k], bounds[k + 1])
            _core.scan_chunk(
                *args, rho1_arr[s], C_arr[s], opts.margin_floor,
                status[s], values[s],
            )

        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            list(pool.map(run, range(n_chunks)))

    points: list[SearchPoint] = []
    candidates: list[tuple[float, float, float, int]] = []
    for i in range(n):
        st = int(status[i])
        beta, num, nup, g1, mt, md, mal, mar, d_sub_unit = (
            float(values[i, j]) for j in range(9)
        )
        kernel_feasible = st == _core.STATUS_OK and (
            mt > opts.margin_floor
            and md > opts.margin_floor
            and mal >= opts.margin_floor
            and mar >= opts.margin_floor
        )
        points.append(
            SearchPoint(
                rho1=float(rho1_arr[i]),
                C=float(C_arr[i]),
                status=_core.STATUS_NAMES[st],
                feasible=kernel_feasible,
                beta=beta,
                nu_minus=num,
                nu_plus=nup,
                gamma1=g1,
                m_trace=mt,
                m_det=md,
                m_adm_left=mal,
                m_adm_right=mar,
                d_sub=d_sub_unit * L,
            )
        )
        if kernel_feasible:
            candidates.append(
                (d_sub_unit, float(rho1_arr[i]), float(C_arr[i]), i)
            )

    report = SearchReport(
        data=data,
        law=law,
        options=opts,
        L=L,
        self_similar=self_sim,
        d_self=d_self,
        points=points,
        feasible_count=len(candidates),
    )
    candidates.sort()
    for _, rho1, C, i in candidates:
        sub = _boost_back(
            FanSubsolution(
                partition=FanPartition(float(values[i, 1]), float(values[i, 2])),
                rho1=rho1,
                alpha=0.0,
                beta=float(values[i, 0]),
                gamma1=float(values[i, 3]),
                gamma2=0.0,
                C=C,
            ),
            c,
        )
        res = subsolution.rh_residuals(sub, data, law)
        mg = subsolution.margins(sub, data, law)
        if res.max_abs > opts.residual_tol * (
            1.0 + _system_scale(data, law, sub)
        ) or not mg.feasible(opts.margin_floor):
            # kernel and reference evaluation disagree: drop the point
            points[i] = replace(points[i], feasible=False)
            report.feasible_count -= 1
            continue
        report.best = sub
        report.best_margins = mg
        report.best_residuals = res
        report.best_d_sub = dissipation.rate_subsolution(data, law, sub, L)
        break
    return report


def certify(
    data: RiemannData,
    law: GasLaw,
    sub: FanSubsolution,
    *,
    scenario=None,
):
    """Bundle a feasible subsolution into a re-checkable certificate.

    The candidate must solve the interface system and clear the margin
    floor, otherwise it is rejected; a candidate that is feasible but does
    not out-dissipate the two-shock solution is certified with the
    dissipation_dominant flag set to False.
    """
    from . import scenario as scn  # deferred: scenario.py imports this module
    from . import weakform

    if scenario is None:
        scenario = scn.Scenario(name="adhoc", law=law, data=data)
    if scenario.law != law or scenario.data != data:
        raise ValueError("scenario echo disagrees with the supplied data/law")
    opts = scenario.options
    res = subsolution.rh_residuals(sub, data, law)
    mg = subsolution.margins(sub, data, law)
    if res.max_abs > opts.residual_tol * (1.0 + _system_scale(data, law, sub)):
        raise CertificateError(
            f"candidate does not solve the interface system "
            f"(max residual {res.max_abs!r})"
        )
    if not mg.feasible(opts.margin_floor):
        raise CertificateError(
            f"candidate rejected: margins {mg!r} miss the floor "
            f"{opts.margin_floor!r}"
        )
    self_sim = solve_middle_state(data, law)
    diss = dissipation.compare(data, law, self_sim, sub, scenario.L)
    weak = weakform.report(
        data,
        law,
        self_sim=self_sim,
        sub=sub,
        n_tf=scenario.n_test_functions,
        seed=scenario.seed,
        level=scenario.quad_level,
    )
    levels = dissipation.energy_levels(data, law, self_sim)
    return scn.Certificate(
        scenario=scenario,
        self_similar=self_sim,
        sub=sub,
        residuals=res,
        margins=mg,
        energy_levels=(
            levels[0],
            levels[1],
            levels[2],
            dissipation.subsolution_energy_level(law, sub),
        ),
        dissipation=diss,
        weak=weak,
    )
