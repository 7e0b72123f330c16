"""Bracketed scalar root finding: bisection safeguarded by Newton steps."""

from __future__ import annotations

from typing import Callable, Optional

from .errors import NumericalError


def bracketed_newton(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    df: Optional[Callable[[float], float]] = None,
    *,
    ftol: float = 1e-13,
    xtol: float = 1e-14,
    max_iter: int = 200,
) -> float:
    """Find a root of f in [lo, hi] assuming f(lo) and f(hi) differ in sign.

    Newton steps (analytic df when given, secant estimate otherwise) are
    taken whenever they stay inside the current bracket; every iteration
    keeps the sign-change bracket, so convergence is guaranteed.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NumericalError(
            f"root not bracketed: f({lo!r})={flo!r}, f({hi!r})={fhi!r}"
        )
    x = 0.5 * (lo + hi)
    fx = f(x)
    for _ in range(max_iter):
        if abs(fx) <= ftol or (hi - lo) <= xtol * (1.0 + abs(x)):
            return x
        # shrink the bracket around the sign change
        if flo * fx < 0.0:
            hi, fhi = x, fx
        else:
            lo, flo = x, fx
        step_taken = False
        if df is not None:
            d = df(x)
            if d != 0.0:
                xn = x - fx / d
                if lo < xn < hi:
                    x, fx = xn, f(xn)
                    step_taken = True
        if not step_taken:
            x = 0.5 * (lo + hi)
            fx = f(x)
    if abs(fx) <= 1e3 * ftol:
        return x
    raise NumericalError(
        f"no convergence after {max_iter} iterations: "
        f"bracket=[{lo!r}, {hi!r}], |f|={abs(fx)!r}"
    )


def expand_upper(
    f: Callable[[float], float],
    lo: float,
    *,
    factor: float = 2.0,
    max_expansions: int = 200,
) -> float:
    """Return hi > lo with f(hi) <= 0, doubling from lo (f(lo) > 0 assumed)."""
    hi = lo * factor
    for _ in range(max_expansions):
        if f(hi) <= 0.0:
            return hi
        hi *= factor
    raise NumericalError(
        f"no sign change while expanding bracket from {lo!r} up to {hi!r}"
    )


def sign_change_intervals(
    f: Callable[[float], float], lo: float, hi: float, n: int
) -> list[tuple[float, float]]:
    """Scan [lo, hi] with n uniform panels and return all sign-change panels."""
    out = []
    xprev = lo
    fprev = f(lo)
    for i in range(1, n + 1):
        x = lo + (hi - lo) * i / n
        fx = f(x)
        if fprev == 0.0:
            out.append((xprev, xprev))
        elif fprev * fx < 0.0:
            out.append((xprev, x))
        xprev, fprev = x, fx
    if fprev == 0.0:
        out.append((xprev, xprev))
    return out
