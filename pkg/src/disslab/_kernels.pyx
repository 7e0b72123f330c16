# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the per-grid-point subsolution solve.

Twin of ``disslab._kernels_py`` with identical formulas and iteration
order; see that module for the contract.  The chunk loop releases the
GIL so scans can use real thread parallelism.
"""

from libc.math cimport fabs, log, pow, sqrt, NAN, isfinite

import numpy as np

BACKEND = "cython"

cdef enum:
    C_OK = 0
    C_NO_ROOT = 1
    C_PARTITION = 2
    C_SINGULAR = 3

STATUS_OK = C_OK
STATUS_NO_ROOT = C_NO_ROOT
STATUS_PARTITION = C_PARTITION
STATUS_SINGULAR = C_SINGULAR

DEF N_SCAN = 128
DEF MAX_BISECT = 200
DEF MAX_NEWTON = 12
DEF MAX_ROOTS = 8


cdef inline double _eps(double g, double rho) nogil:
    if g == 1.0:
        return log(rho)
    return pow(rho, g - 1.0) / (g - 1.0)


cdef inline double _g_val(double b, double rm, double vm2, double rp,
                          double vp2, double rho1, double dm, double dp,
                          double const) nogil:
    cdef double mm = rm * vm2 - rho1 * b
    cdef double mp = rho1 * b - rp * vp2
    return mm * mm / dm + mp * mp / dp + const


cdef inline double _g_der(double b, double rm, double vm2, double rp,
                          double vp2, double rho1, double dm, double dp) nogil:
    cdef double mm = rm * vm2 - rho1 * b
    cdef double mp = rho1 * b - rp * vp2
    return -2.0 * mm * rho1 / dm + 2.0 * mp * rho1 / dp


cdef double _refine(double lo, double hi, double flo, double fhi, double ftol,
                    double rm, double vm2, double rp, double vp2,
                    double rho1, double dm, double dp, double const) nogil:
    cdef double x = 0.5 * (lo + hi)
    cdef double fx, d, xn
    cdef int i
    for i in range(MAX_BISECT):
        fx = _g_val(x, rm, vm2, rp, vp2, rho1, dm, dp, const)
        if fx == 0.0 or (hi - lo) <= 1e-9 * (1.0 + fabs(x)):
            break
        if flo * fx < 0.0:
            hi = x
            fhi = fx
        else:
            lo = x
            flo = fx
        x = 0.5 * (lo + hi)
    for i in range(MAX_NEWTON):
        fx = _g_val(x, rm, vm2, rp, vp2, rho1, dm, dp, const)
        if fabs(fx) <= ftol:
            break
        d = _g_der(x, rm, vm2, rp, vp2, rho1, dm, dp)
        if d == 0.0:
            break
        xn = x - fx / d
        if xn < lo or xn > hi:
            xn = 0.5 * (lo + hi)
            if xn == x:
                break
        x = xn
    return x


cdef int _solve_point_c(double g, double rm, double vm2, double rp, double vp2,
                        double rho1, double C, double margin_floor,
                        double* out) nogil:
    """Fill out[0..8] = (beta, nu-, nu+, gamma1, m_trace, m_det,
    m_adm_l, m_adm_r, d_sub); return status."""
    cdef double sing = 1e-12 * max(max(1.0, rho1), max(rm, rp))
    cdef int j
    for j in range(9):
        out[j] = NAN
    if fabs(rho1 - rm) <= sing or fabs(rho1 - rp) <= sing:
        return C_SINGULAR

    cdef double pm = pow(rm, g)
    cdef double pp = pow(rp, g)
    cdef double p1 = pow(rho1, g)
    cdef double const = -rm * vm2 * vm2 + rp * vp2 * vp2 - pm + pp
    cdef double dm = rm - rho1
    cdef double dp = rho1 - rp
    cdef double gscale = 1.0 + fabs(const) + rm * vm2 * vm2 + rp * vp2 * vp2
    cdef double ftol = 1e-13 * gscale

    cdef double lo = min(vm2, vp2)
    cdef double hi = max(vm2, vp2)
    cdef double delta = 2.0 * max(fabs(vm2) + sqrt(pm / rm),
                                  fabs(vp2) + sqrt(pp / rp))
    cdef double blo = lo - delta
    cdef double bhi = hi + delta

    cdef double roots[MAX_ROOTS]
    cdef int n_roots = 0
    cdef double xprev = blo
    cdef double fprev = _g_val(blo, rm, vm2, rp, vp2, rho1, dm, dp, const)
    cdef double x, fx
    cdef int i
    for i in range(1, N_SCAN + 1):
        x = blo + (bhi - blo) * i / N_SCAN
        fx = _g_val(x, rm, vm2, rp, vp2, rho1, dm, dp, const)
        if fprev == 0.0:
            if n_roots < MAX_ROOTS:
                roots[n_roots] = xprev
                n_roots += 1
        elif fprev * fx < 0.0:
            if n_roots < MAX_ROOTS:
                roots[n_roots] = _refine(xprev, x, fprev, fx, ftol,
                                         rm, vm2, rp, vp2, rho1, dm, dp, const)
                n_roots += 1
        xprev = x
        fprev = fx
    if fprev == 0.0 and n_roots < MAX_ROOTS:
        roots[n_roots] = xprev
        n_roots += 1
    if n_roots == 0:
        return C_NO_ROOT

    cdef double em = _eps(g, rm)
    cdef double ep = _eps(g, rp)
    cdef double e1 = _eps(g, rho1)
    cdef double E_minus = rm * em + 0.5 * rm * vm2 * vm2
    cdef double E_plus = rp * ep + 0.5 * rp * vp2 * vp2

    cdef bint have_best = False
    cdef bint any_partition_ok = False
    cdef int best_pri = 0
    cdef double best_dsub = 0.0, best_beta = 0.0
    cdef double b, num, nup, k, gamma1, m_trace, m_det
    cdef double lhs_l, rhs_l, m_adm_l, lhs_r, rhs_r, m_adm_r, E_1, d_sub
    cdef bint feasible
    cdef int pri
    for i in range(n_roots):
        b = roots[i]
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
            0.5 * rm * vm2 * vm2 - 0.5 * rho1 * C)
        rhs_l = ((rm * em + pm) * vm2 - (rho1 * e1 + p1) * b
                 + (0.5 * rm * vm2 * vm2 * vm2 - 0.5 * rho1 * b * C))
        m_adm_l = rhs_l - lhs_l
        lhs_r = nup * (rho1 * e1 - rp * ep) + nup * (
            0.5 * rho1 * C - 0.5 * rp * vp2 * vp2)
        rhs_r = ((rho1 * e1 + p1) * b - (rp * ep + pp) * vp2
                 + (0.5 * rho1 * b * C - 0.5 * rp * vp2 * vp2 * vp2))
        m_adm_r = rhs_r - lhs_r
        E_1 = rho1 * e1 + 0.5 * rho1 * C
        d_sub = -2.0 * (num * (E_minus - E_1) + nup * (E_1 - E_plus))
        feasible = (m_trace > margin_floor and m_det > margin_floor
                    and m_adm_l >= margin_floor and m_adm_r >= margin_floor)
        pri = 0 if feasible else 1
        if (not have_best or pri < best_pri
                or (pri == best_pri and (d_sub < best_dsub
                    or (d_sub == best_dsub and b < best_beta)))):
            have_best = True
            best_pri = pri
            best_dsub = d_sub
            best_beta = b
            out[0] = b
            out[1] = num
            out[2] = nup
            out[3] = gamma1
            out[4] = m_trace
            out[5] = m_det
            out[6] = m_adm_l
            out[7] = m_adm_r
            out[8] = d_sub
    if not any_partition_ok:
        return C_PARTITION
    return C_OK


def solve_point(double g, double rm, double vm2, double rp, double vp2,
                double rho1, double C, double margin_floor):
    """Solve one (rho1, C) grid point; same 10-tuple as the Python twin."""
    cdef double out[9]
    cdef int status = _solve_point_c(g, rm, vm2, rp, vp2, rho1, C,
                                     margin_floor, out)
    return (status, out[0], out[1], out[2], out[3], out[4], out[5],
            out[6], out[7], out[8])


def scan_chunk(double g, double rm, double vm2, double rp, double vp2,
               double[:] rho1s, double[:] Cs, double margin_floor,
               int[:] status_out, double[:, :] values_out):
    """Solve a batch of grid points into preallocated output arrays."""
    cdef Py_ssize_t n = rho1s.shape[0]
    cdef Py_ssize_t i
    cdef int j, status
    cdef double out[9]
    if Cs.shape[0] != n or status_out.shape[0] != n or values_out.shape[0] != n:
        raise ValueError("mismatched chunk array lengths")
    if values_out.shape[1] != 9:
        raise ValueError("values_out must have 9 columns")
    with nogil:
        for i in range(n):
            status = _solve_point_c(g, rm, vm2, rp, vp2, rho1s[i], Cs[i],
                                    margin_floor, out)
            status_out[i] = status
            for j in range(9):
                values_out[i, j] = out[j]
    return None


def _self_test():
    out = solve_point(2.0, 1.0, sqrt(1.5), 1.0, -sqrt(1.5), 1.9, 0.5, 1e-6)
    return out[0] == STATUS_OK and isfinite(out[1])
