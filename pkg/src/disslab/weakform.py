"""Independent verification of fan states against the distributional identities.

Piecewise-constant fan configurations are tested against smooth compactly
supported functions by space-time quadrature: the integrand is constant in
each wedge, so composite Gauss rules on a partition split along the
interface lines x2 = nu*t are accurate to machine precision once the
support is resolved.  The same machinery evaluates the balance laws, the
relaxed middle-wedge system, and the energy-flux admissibility functional
(whose quadrature value is nonnegative for every nonnegative test function
exactly when the configuration is admissible).

Residuals are normalized by (max derivative of the test function on the
nodes) times the volume of its support box, which makes the reported
numbers scale-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gas
from .errors import DomainError
from .gas import GasLaw
from .riemann import RiemannData, SelfSimilarTwoShock
from .subsolution import FanSubsolution

_GAUSS_ORDER = 16
_BASE_SUBPANELS = 2


@lru_cache(maxsize=8)
def _gauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _composite_nodes(cuts: list[float], subpanels: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes/weights on [cuts0, cuts1, ...] with subpanels per segment."""
    xg, wg = _gauss(_GAUSS_ORDER)
    nodes, weights = [], []
    for lo, hi in zip(cuts, cuts[1:]):
        if hi <= lo:
            continue
        edges = np.linspace(lo, hi, subpanels + 1)
        for a, b in zip(edges, edges[1:]):
            half = 0.5 * (b - a)
            nodes.append(0.5 * (a + b) + half * xg)
            weights.append(half * wg)
    if not nodes:
        return np.empty(0), np.empty(0)
    return np.concatenate(nodes), np.concatenate(weights)


def _bump(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """exp(1/(s^2-1)) on |s| < 1 (zero outside) and its derivative in s."""
    s = np.asarray(s, dtype=float)
    inside = np.abs(s) < 1.0
    b = np.zeros_like(s)
    db = np.zeros_like(s)
    q = s[inside] ** 2 - 1.0
    val = np.exp(1.0 / q)
    b[inside] = val
    db[inside] = val * (-2.0 * s[inside] / q ** 2)
    return b, db


@dataclass(frozen=True)
class TestFunction:
    """Bump-times-polynomial test function with box support.

    psi(x1, x2, t) = P(s1, s2, st) * b(s1) b(s2) b(st) with s = (x - c)/r
    per axis, b the standard smooth bump, and P a polynomial of total
    degree <= 2 in the scaled coordinates (P = 1 when poly is None, which
    also marks the function as nonnegative).  The support may straddle
    t = 0; only the t >= 0 part is ever integrated.
    """

    center: tuple[float, float, float]
    radii: tuple[float, float, float]
    poly: tuple[float, ...] | None = None

    def __post_init__(self):
        if any(r <= 0.0 for r in self.radii):
            raise DomainError(f"radii must be positive, got {self.radii!r}")
        if self.poly is not None and len(self.poly) != 10:
            raise DomainError("poly needs 10 coefficients (total degree <= 2)")

    @property
    def nonneg(self) -> bool:
        return self.poly is None

    def support(self) -> tuple[tuple[float, float], ...]:
        """((x1lo, x1hi), (x2lo, x2hi), (tlo, thi)) with t clipped to >= 0."""
        (c1, c2, ct), (r1, r2, rt) = self.center, self.radii
        return (
            (c1 - r1, c1 + r1),
            (c2 - r2, c2 + r2),
            (max(0.0, ct - rt), ct + rt),
        )

    def _scaled(self, x1, x2, t):
        (c1, c2, ct), (r1, r2, rt) = self.center, self.radii
        return (
            (np.asarray(x1, dtype=float) - c1) / r1,
            (np.asarray(x2, dtype=float) - c2) / r2,
            (np.asarray(t, dtype=float) - ct) / rt,
        )

    def _assemble(self, S1, S2, ST, b1, db1, b2, db2, bt, dbt):
        r1, r2, rt = self.radii
        B = bt * b2 * b1
        B_d1 = bt * b2 * db1
        B_d2 = bt * db2 * b1
        B_dt = dbt * b2 * b1
        if self.poly is None:
            return B, B_dt / rt, B_d1 / r1, B_d2 / r2
        c = self.poly
        P = (
            c[0]
            + c[1] * S1
            + c[2] * S2
            + c[3] * ST
            + c[4] * S1 ** 2
            + c[5] * S2 ** 2
            + c[6] * ST ** 2
            + c[7] * S1 * S2
            + c[8] * S1 * ST
            + c[9] * S2 * ST
        )
        dP1 = c[1] + 2.0 * c[4] * S1 + c[7] * S2 + c[8] * ST
        dP2 = c[2] + 2.0 * c[5] * S2 + c[7] * S1 + c[9] * ST
        dPt = c[3] + 2.0 * c[6] * ST + c[8] * S1 + c[9] * S2
        psi = P * B
        return (
            psi,
            (dPt * B + P * B_dt) / rt,
            (dP1 * B + P * B_d1) / r1,
            (dP2 * B + P * B_d2) / r2,
        )

    def evaluate_grid(
        self, x1: np.ndarray, x2: np.ndarray, t: float
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(psi, d_t psi, d_x1 psi, d_x2 psi) on the x2-by-x1 grid at time t."""
        s1, s2, st = self._scaled(x1, x2, float(t))
        b1, db1 = _bump(s1)
        b2, db2 = _bump(s2)
        bt, dbt = _bump(st)
        return self._assemble(
            s1[None, :],
            s2[:, None],
            float(st),
            b1[None, :],
            db1[None, :],
            b2[:, None],
            db2[:, None],
            float(bt),
            float(dbt),
        )

    def evaluate_tensor(
        self, x1: np.ndarray, x2: np.ndarray, t: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Same on a swept block: x1 (n1,), x2 (nt, n2), t (nt,) -> (nt, n2, n1)."""
        s1, s2, st = self._scaled(x1, x2, t)
        b1, db1 = _bump(s1)
        b2, db2 = _bump(s2)
        bt, dbt = _bump(st)
        return self._assemble(
            s1[None, None, :],
            s2[:, :, None],
            st[:, None, None],
            b1[None, None, :],
            db1[None, None, :],
            b2[:, :, None],
            db2[:, :, None],
            bt[:, None, None],
            dbt[:, None, None],
        )


def random_test_functions(
    n: int,
    seed: int,
    *,
    speeds: tuple[float, ...],
    horizon: float = 1.0,
    nonneg: bool = False,
) -> list[TestFunction]:
    """Seeded family of test functions adapted to a fan geometry.

    Roughly 60% of the supports straddle an interface line (where all the
    information sits); the rest are placed uniformly in the window swept
    by the fan up to the time horizon.  Some supports reach t <= 0 so the
    initial-data terms are exercised.
    """
    rng = np.random.default_rng(seed)
    vmax = max(1.0, max(abs(s) for s in speeds) if speeds else 1.0)
    window = 1.5 * vmax * horizon
    out = []
    for _ in range(n):
        rt = horizon * rng.uniform(0.15, 0.35)
        ct = rng.uniform(0.05, 0.75) * horizon
        r1 = rng.uniform(0.3, 0.8)
        c1 = rng.uniform(-0.5, 0.5)
        r2 = rng.uniform(0.25, 0.6) * max(1.0, vmax * horizon)
        if speeds and rng.uniform() < 0.6:
            nu = speeds[rng.integers(0, len(speeds))]
            c2 = nu * ct + rng.uniform(-0.5, 0.5) * r2
        else:
            c2 = rng.uniform(-window, window)
        if nonneg:
            poly = None
        else:
            coeffs = rng.uniform(-1.0, 1.0, size=10)
            coeffs[0] = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.0)
            poly = tuple(float(v) for v in coeffs)
        out.append(
            TestFunction(
                center=(float(c1), float(c2), float(ct)),
                radii=(float(r1), float(r2), float(rt)),
                poly=poly,
            )
        )
    return out


@dataclass(frozen=True)
class FanState:
    """Per-sector quadrature tables of a piecewise-constant fan configuration.

    speeds are the ascending interface speeds; each table holds one entry
    per sector, bottom to top.  Rows: time density, x1 flux, x2 flux for
    the mass, two momentum balances, and the energy functional.
    """

    speeds: tuple[float, ...]
    mass: tuple[tuple[float, float, float], ...]
    mom1: tuple[tuple[float, float, float], ...]
    mom2: tuple[tuple[float, float, float], ...]
    energy: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.speeds, self.speeds[1:])):
            raise DomainError(f"speeds must be ascending, got {self.speeds!r}")
        n = len(self.speeds) + 1
        for name in ("mass", "mom1", "mom2", "energy"):
            if len(getattr(self, name)) != n:
                raise DomainError(f"{name} table needs {n} sector entries")


def _solution_sector(law: GasLaw, rho: float, v1: float, v2: float):
    p = gas.pressure(law, rho)
    a = gas.energy_density(law, rho, v1 ** 2 + v2 ** 2)
    return {
        "mass": (rho, rho * v1, rho * v2),
        "mom1": (rho * v1, rho * v1 ** 2 + p, rho * v1 * v2),
        "mom2": (rho * v2, rho * v1 * v2, rho * v2 ** 2 + p),
        "energy": (a, (a + p) * v1, (a + p) * v2),
    }


def solution_fields(
    law: GasLaw,
    speeds: tuple[float, ...],
    states: list[tuple[float, float, float]],
) -> FanState:
    """Fan tables for an exact-solution candidate with sector states (rho, v1, v2)."""
    sectors = [_solution_sector(law, *state) for state in states]
    return FanState(
        speeds=tuple(speeds),
        mass=tuple(s["mass"] for s in sectors),
        mom1=tuple(s["mom1"] for s in sectors),
        mom2=tuple(s["mom2"] for s in sectors),
        energy=tuple(s["energy"] for s in sectors),
    )


def two_shock_fields(
    data: RiemannData, law: GasLaw, self_sim: SelfSimilarTwoShock
) -> FanState:
    vt = data.tangential
    return solution_fields(
        law,
        (self_sim.nu1, self_sim.nu2),
        [
            (data.rho_minus, data.v_minus[0], data.v_minus[1]),
            (self_sim.rho_m, vt, self_sim.v_bar),
            (data.rho_plus, data.v_plus[0], data.v_plus[1]),
        ],
    )


def subsolution_fields(
    data: RiemannData, law: GasLaw, sub: FanSubsolution
) -> FanState:
    """Fan tables for the relaxed middle-wedge system.

    The outer wedges carry the exact-solution fluxes; the middle wedge
    carries the tensor entries (gamma1, gamma2) and the augmented pressure
    p(rho1) + C*rho1/2, and its energy density uses the kinetic bound C.
    """
    lo = _solution_sector(law, data.rho_minus, data.v_minus[0], data.v_minus[1])
    hi = _solution_sector(law, data.rho_plus, data.v_plus[0], data.v_plus[1])
    r1, a, b = sub.rho1, sub.alpha, sub.beta
    g1, g2, C = sub.gamma1, sub.gamma2, sub.C
    p1 = gas.pressure(law, r1)
    q1 = p1 + 0.5 * C * r1
    e1 = gas.energy_density(law, r1, C)
    return FanState(
        speeds=(sub.partition.nu_minus, sub.partition.nu_plus),
        mass=(lo["mass"], (r1, r1 * a, r1 * b), hi["mass"]),
        mom1=(lo["mom1"], (r1 * a, r1 * g1 + q1, r1 * g2), hi["mom1"]),
        mom2=(lo["mom2"], (r1 * b, r1 * g2, -r1 * g1 + q1), hi["mom2"]),
        energy=(lo["energy"], (e1, (e1 + p1) * a, (e1 + p1) * b), hi["energy"]),
    )


def _initial_tables(data: RiemannData, law: GasLaw) -> dict[str, tuple[float, float]]:
    rm, rp = data.rho_minus, data.rho_plus
    vm1, vm2 = data.v_minus
    vp1, vp2 = data.v_plus
    return {
        "mass": (rm, rp),
        "mom1": (rm * vm1, rp * vp1),
        "mom2": (rm * vm2, rp * vp2),
        "energy": (
            gas.energy_density(law, rm, vm1 ** 2 + vm2 ** 2),
            gas.energy_density(law, rp, vp1 ** 2 + vp2 ** 2),
        ),
    }


def _weak_values(
    fan: FanState,
    data: RiemannData,
    law: GasLaw,
    tf: TestFunction,
    equations: tuple[str, ...],
    level: int,
) -> dict[str, float]:
    """Normalized weak values of the requested equations for one test function.

    Includes the initial-data terms whenever the support reaches t = 0.
    The returned numbers vanish (to quadrature accuracy) for equations the
    configuration satisfies distributionally; for 'energy' the value is
    the admissibility functional (nonnegative when admissible and the test
    function is nonnegative).
    """
    (x1lo, x1hi), (x2lo, x2hi), (tlo, thi) = tf.support()
    if thi <= tlo:
        return {eq: 0.0 for eq in equations}
    sub_t = _BASE_SUBPANELS << level
    sub_x = _BASE_SUBPANELS << level

    # split the time range where an interface enters or leaves the x2 range
    t_cuts = {tlo, thi}
    for nu in fan.speeds:
        if nu != 0.0:
            for edge in (x2lo, x2hi):
                tc = edge / nu
                if tlo < tc < thi:
                    t_cuts.add(tc)
    t_nodes, t_weights = _composite_nodes(sorted(t_cuts), sub_t)
    x1_nodes, x1_weights = _composite_nodes([x1lo, x1hi], sub_x)

    tables = {eq: np.array(getattr(fan, eq)) for eq in equations}
    init = _initial_tables(data, law)
    totals = {eq: 0.0 for eq in equations}
    deriv_max = 0.0

    for t, wt in zip(t_nodes, t_weights):
        cuts = [x2lo]
        positions = [nu * t for nu in fan.speeds]
        cuts.extend(p for p in positions if x2lo < p < x2hi)
        cuts.append(x2hi)
        x2_nodes, x2_weights = _composite_nodes(cuts, sub_x)
        if x2_nodes.size == 0:
            continue
        sector = np.searchsorted(np.array(positions), x2_nodes)
        psi, d_t, d_1, d_2 = tf.evaluate_grid(x1_nodes, x2_nodes, float(t))
        deriv_max = max(
            deriv_max,
            float(np.max(np.abs(d_t))),
            float(np.max(np.abs(d_1))),
            float(np.max(np.abs(d_2))),
        )
        for eq in equations:
            tab = tables[eq][sector]  # (n2, 3)
            integrand = (
                tab[:, 0][:, None] * d_t
                + tab[:, 1][:, None] * d_1
                + tab[:, 2][:, None] * d_2
            )
            totals[eq] += wt * float(x2_weights @ integrand @ x1_weights)

    # initial-data terms when the support touches t = 0
    if tlo == 0.0 and tf.center[2] - tf.radii[2] < 0.0:
        cuts = [x2lo]
        if x2lo < 0.0 < x2hi:
            cuts.append(0.0)
        cuts.append(x2hi)
        x2_nodes, x2_weights = _composite_nodes(cuts, sub_x)
        below = x2_nodes < 0.0
        psi0, _, _, _ = tf.evaluate_grid(x1_nodes, x2_nodes, 0.0)
        for eq in equations:
            lo_val, hi_val = init[eq]
            density = np.where(below, lo_val, hi_val)
            totals[eq] += float(x2_weights @ (density[:, None] * psi0) @ x1_weights)

    vol = (x1hi - x1lo) * (x2hi - x2lo) * (thi - tlo)
    norm = deriv_max * vol
    if norm <= 0.0:
        return {eq: 0.0 for eq in equations}
    return {eq: totals[eq] / norm for eq in equations}


def weak_residual_solution(
    fields: FanState,
    data: RiemannData,
    law: GasLaw,
    tf: TestFunction,
    *,
    level: int = 1,
) -> tuple[float, float, float]:
    """Normalized weak residuals (mass, momentum1, momentum2) of a fan state."""
    vals = _weak_values(fields, data, law, tf, ("mass", "mom1", "mom2"), level)
    return (vals["mass"], vals["mom1"], vals["mom2"])


def weak_residual_subsolution(
    sub: FanSubsolution,
    data: RiemannData,
    law: GasLaw,
    tf: TestFunction,
    *,
    level: int = 1,
) -> tuple[float, float, float]:
    """Normalized weak residuals of the relaxed middle-wedge system."""
    fields = subsolution_fields(data, law, sub)
    vals = _weak_values(fields, data, law, tf, ("mass", "mom1", "mom2"), level)
    return (vals["mass"], vals["mom1"], vals["mom2"])


def weak_admissibility(
    obj,
    data: RiemannData,
    law: GasLaw,
    tf: TestFunction,
    *,
    level: int = 1,
) -> float:
    """Value of the energy-flux admissibility functional against a nonnegative tf.

    Accepts a FanState, a FanSubsolution, or a SelfSimilarTwoShock.
    Admissible configurations give values >= -(quadrature tolerance) for
    every nonnegative test function.
    """
    if not tf.nonneg:
        raise DomainError("admissibility requires a nonnegative test function")
    if isinstance(obj, FanSubsolution):
        fields = subsolution_fields(data, law, obj)
    elif isinstance(obj, SelfSimilarTwoShock):
        fields = two_shock_fields(data, law, obj)
    elif isinstance(obj, FanState):
        fields = obj
    else:
        raise DomainError(f"cannot evaluate admissibility of {type(obj)!r}")
    return _weak_values(fields, data, law, tf, ("energy",), level)["energy"]


def interface_line_integral(
    tf: TestFunction, nu: float, *, level: int = 2
) -> float:
    """integral over t >= 0 of integral over x1 of psi(x1, nu*t, t).

    Weak values of fan states decompose exactly as
    sum_i (interface defect_i) * interface_line_integral(tf, nu_i),
    which is the independent cross-check used in the tests.
    """
    (x1lo, x1hi), _, (tlo, thi) = tf.support()
    sub = _BASE_SUBPANELS << level
    t_nodes, t_weights = _composite_nodes([tlo, thi], sub)
    x1_nodes, x1_weights = _composite_nodes([x1lo, x1hi], sub)
    total = 0.0
    for t, wt in zip(t_nodes, t_weights):
        psi, _, _, _ = tf.evaluate_grid(x1_nodes, np.array([nu * t]), float(t))
        total += wt * float(psi[0] @ x1_weights)
    return total


@dataclass(frozen=True)
class WeakResidualReport:
    """Aggregate weak-form verification over a seeded test-function family."""

    n_test_functions: int
    seed: int
    level: int
    self_max_mass: float
    self_max_momentum: float
    self_min_admissibility: float
    sub_max_mass: float
    sub_max_momentum: float
    sub_min_admissibility: float
    refinement_levels: tuple[int, ...]
    refinement_max_mass: tuple[float, ...]

    @property
    def max_mass(self) -> float:
        return max(self.self_max_mass, self.sub_max_mass)

    @property
    def max_momentum(self) -> float:
        return max(self.self_max_momentum, self.sub_max_momentum)

    @property
    def min_admissibility(self) -> float:
        return min(self.self_min_admissibility, self.sub_min_admissibility)


def report(
    data: RiemannData,
    law: GasLaw,
    *,
    self_sim: SelfSimilarTwoShock | None = None,
    sub: FanSubsolution | None = None,
    n_tf: int = 50,
    seed: int = 0,
    level: int = 1,
    horizon: float = 1.0,
    trace_levels: tuple[int, ...] = (0, 1, 2),
    trace_tfs: int = 5,
) -> WeakResidualReport:
    """Run the full weak-form battery for a two-shock solution and/or subsolution."""
    speeds: list[float] = []
    if self_sim is not None:
        speeds += [self_sim.nu1, self_sim.nu2]
    if sub is not None:
        speeds += [sub.partition.nu_minus, sub.partition.nu_plus]
    if not speeds:
        raise DomainError("need at least one of self_sim or sub")
    tfs = random_test_functions(
        n_tf, seed, speeds=tuple(speeds), horizon=horizon, nonneg=False
    )
    tfs_pos = random_test_functions(
        n_tf, seed + 1, speeds=tuple(speeds), horizon=horizon, nonneg=True
    )

    def battery(fields: FanState) -> tuple[float, float, float]:
        mx_mass = 0.0
        mx_mom = 0.0
        mn_adm = math.inf
        for tf in tfs:
            vals = _weak_values(fields, data, law, tf, ("mass", "mom1", "mom2"), level)
            mx_mass = max(mx_mass, abs(vals["mass"]))
            mx_mom = max(mx_mom, abs(vals["mom1"]), abs(vals["mom2"]))
        for tf in tfs_pos:
            mn_adm = min(
                mn_adm, _weak_values(fields, data, law, tf, ("energy",), level)["energy"]
            )
        return mx_mass, mx_mom, mn_adm

    self_vals = (0.0, 0.0, math.inf)
    sub_vals = (0.0, 0.0, math.inf)
    trace_fields = None
    if self_sim is not None:
        trace_fields = two_shock_fields(data, law, self_sim)
        self_vals = battery(trace_fields)
    if sub is not None:
        sub_fields = subsolution_fields(data, law, sub)
        sub_vals = battery(sub_fields)
        if trace_fields is None:
            trace_fields = sub_fields

    trace = []
    for lv in trace_levels:
        worst = 0.0
        for tf in tfs[: max(1, trace_tfs)]:
            vals = _weak_values(trace_fields, data, law, tf, ("mass",), lv)
            worst = max(worst, abs(vals["mass"]))
        trace.append(worst)

    return WeakResidualReport(
        n_test_functions=n_tf,
        seed=seed,
        level=level,
        self_max_mass=self_vals[0],
        self_max_momentum=self_vals[1],
        self_min_admissibility=self_vals[2],
        sub_max_mass=sub_vals[0],
        sub_max_momentum=sub_vals[1],
        sub_min_admissibility=sub_vals[2],
        refinement_levels=tuple(trace_levels),
        refinement_max_mass=tuple(trace),
    )
