"""Pure-Python kernel for the per-grid-point subsolution solve.

This is the fallback twin of the compiled module ``disslab._kernels``;
both expose the same two entry points with identical formulas and
iteration order so that results agree across backends.

``solve_point`` fixes the free parameters (rho1, C) for zero-tangential
data, eliminates the interface speeds and gamma1 from the jump system,
and solves the remaining scalar normal-momentum compatibility equation
in beta by a bracket scan plus safeguarded Newton refinement.  Status
codes: 0 solved, 1 no root in bracket, 2 partition violated by every
root, 3 singular elimination (rho1 equals an outer density).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

STATUS_OK = 0
STATUS_NO_ROOT = 1
STATUS_PARTITION = 2
STATUS_SINGULAR = 3

_N_SCAN = 128
_MAX_BISECT = 200
_MAX_NEWTON = 12


def _eps(g: float, rho: float) -> float:
    if g == 1.0:
        return math.log(rho)
    return rho ** (g - 1.0) / (g - 1.0)


def _solve_beta_roots(rm, vm2, rp, vp2, rho1, pm, pp, p1):
    """All roots of the normal-momentum compatibility equation in the bracket."""
    const = -rm * vm2 * vm2 + rp * vp2 * vp2 - pm + pp
    dm = rm - rho1
    dp = rho1 - rp

    def g_val(b):
        mm = rm * vm2 - rho1 * b
        mp = rho1 * b - rp * vp2
        return mm * mm / dm + mp * mp / dp + const

    def g_der(b):
        mm = rm * vm2 - rho1 * b
        mp = rho1 * b - rp * vp2
        return -2.0 * mm * rho1 / dm + 2.0 * mp * rho1 / dp

    gscale = 1.0 + abs(const) + rm * vm2 * vm2 + rp * vp2 * vp2
    ftol = 1e-13 * gscale

    lo = min(vm2, vp2)
    hi = max(vm2, vp2)
    delta = 2.0 * max(abs(vm2) + math.sqrt(pm / rm), abs(vp2) + math.sqrt(pp / rp))

    blo = lo - delta
    bhi = hi + delta
    roots = []
    xprev = blo
    fprev = g_val(blo)
    for i in range(1, _N_SCAN + 1):
        x = blo + (bhi - blo) * i / _N_SCAN
        fx = g_val(x)
        if fprev == 0.0:
            roots.append(xprev)
        elif fprev * fx < 0.0:
            roots.append(_refine(g_val, g_der, xprev, x, fprev, fx, ftol))
        xprev, fprev = x, fx
    if fprev == 0.0:
        roots.append(xprev)
    return roots


def _refine(g_val, g_der, lo, hi, flo, fhi, ftol):
    # bisection down to a decent interval, then Newton to machine precision
    x = 0.5 * (lo + hi)
    for _ in range(_MAX_BISECT):
        fx = g_val(x)
        if fx == 0.0 or (hi - lo) <= 1e-9 * (1.0 + abs(x)):
            break
        if flo * fx < 0.0:
            hi, fhi = x, fx
        else:
            lo, flo = x, fx
        x = 0.5 * (lo + hi)
    for _ in range(_MAX_NEWTON):
        fx = g_val(x)
        if abs(fx) <= ftol:
            break
        d = g_der(x)
        if d == 0.0:
            break
        xn = x - fx / d
        if xn < lo or xn > hi:
            xn = 0.5 * (lo + hi)
            if xn == x:
                break
        x = xn
    return x


def solve_point(g, rm, vm2, rp, vp2, rho1, C, margin_floor):
    """Solve one (rho1, C) grid point; returns a 10-tuple.

    Layout: (status, beta, nu_minus, nu_plus, gamma1, m_trace, m_det,
    m_adm_left, m_adm_right, d_sub_unit) with d_sub_unit the subsolution
    dissipation rate at box half-width 1.  Numeric slots are NaN unless
    status == 0.
    """
    nan = float("nan")
    bad = (nan,) * 9
    sing = 1e-12 * max(1.0, rho1, rm, rp)
    if abs(rho1 - rm) <= sing or abs(rho1 - rp) <= sing:
        return (STATUS_SINGULAR,) + bad
    pm = rm ** g
    pp = rp ** g
    p1 = rho1 ** g
    roots = _solve_beta_roots(rm, vm2, rp, vp2, rho1, pm, pp, p1)
    if not roots:
        return (STATUS_NO_ROOT,) + bad

    em = _eps(g, rm)
    ep = _eps(g, rp)
    e1 = _eps(g, rho1)
    E_minus = rm * em + 0.5 * rm * vm2 * vm2
    E_plus = rp * ep + 0.5 * rp * vp2 * vp2

    best = None
    best_key = None
    any_partition_ok = False
    for b in roots:
        num = (rm * vm2 - rho1 * b) / (rm - rho1)
        nup = (rho1 * b - rp * vp2) / (rho1 - rp)
        if not num < nup:
            continue
        any_partition_ok = True
        k = (num * (rm * vm2 - rho1 * b) - rm * vm2 * vm2 - pm + p1) / rho1
        gamma1 = k + 0.5 * C
        m_trace = C - b * b
        m_det = (0.5 * C + gamma1) * (0.5 * C - b * b - gamma1)
        lhs_l = num * (rm * em - rho1 * e1) + num * (
            0.5 * rm * vm2 * vm2 - 0.5 * rho1 * C
        )
        rhs_l = (
            (rm * em + pm) * vm2
            - (rho1 * e1 + p1) * b
            + (0.5 * rm * vm2 * vm2 * vm2 - 0.5 * rho1 * b * C)
        )
        m_adm_l = rhs_l - lhs_l
        lhs_r = nup * (rho1 * e1 - rp * ep) + nup * (
            0.5 * rho1 * C - 0.5 * rp * vp2 * vp2
        )
        rhs_r = (
            (rho1 * e1 + p1) * b
            - (rp * ep + pp) * vp2
            + (0.5 * rho1 * b * C - 0.5 * rp * vp2 * vp2 * vp2)
        )
        m_adm_r = rhs_r - lhs_r
        E_1 = rho1 * e1 + 0.5 * rho1 * C
        d_sub = -2.0 * (num * (E_minus - E_1) + nup * (E_1 - E_plus))
        feasible = (
            m_trace > margin_floor
            and m_det > margin_floor
            and m_adm_l >= margin_floor
            and m_adm_r >= margin_floor
        )
        key = (0 if feasible else 1, d_sub, b)
        if best_key is None or key < best_key:
            best_key = key
            best = (b, num, nup, gamma1, m_trace, m_det, m_adm_l, m_adm_r, d_sub)
    if not any_partition_ok:
        return (STATUS_PARTITION,) + bad
    return (STATUS_OK,) + best


def scan_chunk(g, rm, vm2, rp, vp2, rho1s, Cs, margin_floor, status_out, values_out):
    """Solve a batch of grid points into preallocated output arrays.

    rho1s / Cs are 1-D float64 arrays of equal length n; status_out is
    int32 (n,), values_out float64 (n, 9) in solve_point slot order.
    """
    n = len(rho1s)
    for i in range(n):
        out = solve_point(
            g, rm, vm2, rp, vp2, float(rho1s[i]), float(Cs[i]), margin_floor
        )
        status_out[i] = out[0]
        values_out[i, :] = out[1:]
    return None


def _self_test() -> bool:
    """Tiny smoke check used by the backend selector."""
    out = solve_point(2.0, 1.0, math.sqrt(1.5), 1.0, -math.sqrt(1.5), 1.9, 0.5, 1e-6)
    return out[0] == STATUS_OK and np.isfinite(out[1])
