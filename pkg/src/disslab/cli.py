"""Command-line interface: classify | selfsimilar | search | verify.

Exit codes are a stable contract: 0 for success (or a true verdict),
2 when a run completes but yields no dissipation-dominant certificate,
1 for every error.  All commands are deterministic functions of the
scenario file, the flags, and the seed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from . import dissipation, scenario as scn, solver, weakform
from .errors import CertificateError, DisslabError
from .riemann import solve_middle_state, two_shock_condition
from .scenario import (
    ADMISSIBILITY_TOL,
    REPLAY_RTOL,
    WEAK_RESIDUAL_TOL,
    Certificate,
    Scenario,
    load_certificate,
    load_scenario,
    save_certificate,
    write_grid_csv,
)
from .solver import GridSpec

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_CERTIFICATE = 2


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", required=True, help="scenario YAML file")
    p.add_argument("--L", type=float, default=None, help="box half-width override")
    p.add_argument("--seed", type=int, default=None, help="seed override")
    p.add_argument("--tol", type=float, default=None, help="residual tolerance override")
    p.add_argument(
        "--margin-floor", type=float, default=None, help="feasibility margin floor override"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disslab",
        description=(
            "Two-shock Riemann solutions vs. fan subsolutions: classify data, "
            "build the self-similar solution, search for lower-dissipation "
            "subsolutions, and verify certificates."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("classify", help="check the two-shock condition")
    _add_common_flags(p)
    p.set_defaults(func=cmd_classify)

    p = subparsers.add_parser("selfsimilar", help="build the two-shock solution")
    _add_common_flags(p)
    p.add_argument("--machine", action="store_true", help="emit a YAML block")
    p.set_defaults(func=cmd_selfsimilar)

    p = subparsers.add_parser("search", help="scan the (rho1, C) plane")
    _add_common_flags(p)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--grid-rho1", default=None, help="rho1 grid as lo:hi:n")
    p.add_argument("--grid-C", default=None, help="C grid as lo:hi:n")
    p.set_defaults(func=cmd_search)

    p = subparsers.add_parser("verify", help="replay a certificate's checks")
    p.add_argument("certificate", help="certificate YAML file")
    p.set_defaults(func=cmd_verify)
    return parser


def _load_with_overrides(args) -> Scenario:
    s = load_scenario(args.scenario)
    overrides = {}
    if args.L is not None:
        overrides["L"] = args.L
    if args.seed is not None:
        overrides["seed"] = args.seed
    opt_overrides = {}
    if args.tol is not None:
        opt_overrides["residual_tol"] = args.tol
    if getattr(args, "margin_floor", None) is not None:
        opt_overrides["margin_floor"] = args.margin_floor
    if opt_overrides:
        overrides["options"] = solver.SolveOptions(
            margin_floor=opt_overrides.get("margin_floor", s.options.margin_floor),
            residual_tol=opt_overrides.get("residual_tol", s.options.residual_tol),
        )
    if getattr(args, "grid_rho1", None):
        overrides["grid_rho1"] = GridSpec.parse(args.grid_rho1)
    if getattr(args, "grid_C", None):
        overrides["grid_C"] = GridSpec.parse(args.grid_C)
    return s.with_overrides(**overrides) if overrides else s


def cmd_classify(args) -> int:
    s = _load_with_overrides(args)
    ok, margin = two_shock_condition(s.data, s.law)
    print(f"two-shock: {'yes' if ok else 'no'}  margin {margin:.12g}")
    return EXIT_OK if ok else EXIT_NO_CERTIFICATE


def cmd_selfsimilar(args) -> int:
    s = _load_with_overrides(args)
    sol = solve_middle_state(s.data, s.law)
    levels = dissipation.energy_levels(s.data, s.law, sol)
    d_self = dissipation.rate_self_similar(levels, sol.nu1, sol.nu2, s.L)
    if args.machine:
        block = {
            "rho_m": sol.rho_m,
            "v_bar": sol.v_bar,
            "nu1": sol.nu1,
            "nu2": sol.nu2,
            "lax_ok_1": sol.lax_ok_1,
            "lax_ok_3": sol.lax_ok_3,
            "E_minus": levels[0],
            "E_m": levels[1],
            "E_plus": levels[2],
            "L": s.L,
            "D_self": d_self,
        }
        sys.stdout.write(scn.dump_yaml(block))
    else:
        print(f"rho_m  = {sol.rho_m:.12g}")
        print(f"v_bar  = {sol.v_bar:.12g}")
        print(f"nu1    = {sol.nu1:.12g}")
        print(f"nu2    = {sol.nu2:.12g}")
        print(f"lax    = ({sol.lax_ok_1}, {sol.lax_ok_3})")
        print(f"E      = ({levels[0]:.12g}, {levels[1]:.12g}, {levels[2]:.12g})")
        print(f"D_self = {d_self:.12g}  (L = {s.L:.12g})")
    return EXIT_OK


def cmd_search(args) -> int:
    s = _load_with_overrides(args)
    if s.grid_rho1 is None or s.grid_C is None:
        raise DisslabError(
            "search needs a grid: set grid.rho1/grid.C in the scenario or pass "
            "--grid-rho1/--grid-C"
        )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = solver.scan(
        s.data,
        s.law,
        s.grid_rho1,
        s.grid_C,
        L=s.L,
        options=s.options,
    )
    csv_path = out_dir / f"{s.name}.grid.csv"
    write_grid_csv(report, csv_path)
    print(
        f"scanned {len(report.points)} points "
        f"({report.feasible_count} feasible, backend {report.backend})"
    )
    print(f"grid dump: {csv_path}")
    if report.best is None:
        print("no feasible subsolution in the grid")
        return EXIT_NO_CERTIFICATE
    cert = solver.certify(s.data, s.law, report.best, scenario=s)
    cert_path = out_dir / f"{s.name}.cert.yaml"
    save_certificate(cert, cert_path)
    d = cert.dissipation
    print(
        f"best point: rho1={cert.sub.rho1:.12g} C={cert.sub.C:.12g} "
        f"D_sub={d.D_sub:.12g} vs D_self={d.D_self:.12g} "
        f"(rel gap {d.rel_gap:.6g})"
    )
    print(f"certificate: {cert_path}")
    if d.verdict:
        print("verdict: dissipation-dominant subsolution found")
        return EXIT_OK
    print("verdict: feasible but not dissipation-dominant")
    return EXIT_NO_CERTIFICATE


def _close(a: float, b: float, rtol: float, scale: float = 1.0) -> bool:
    return abs(a - b) <= rtol * (scale + max(abs(a), abs(b)))


def verify_certificate(cert: Certificate) -> list[tuple[str, bool, str]]:
    """Replay every check of a certificate; returns (name, ok, detail) rows."""
    checks: list[tuple[str, bool, str]] = []
    s = cert.scenario
    data, law = s.data, s.law
    tol = cert.scenario.options.residual_tol
    floor = cert.scenario.options.margin_floor

    ok, margin = two_shock_condition(data, law)
    checks.append(("two-shock-condition", ok, f"margin {margin:.6g}"))
    if not ok:
        return checks

    sol = solve_middle_state(data, law)
    stored = cert.self_similar
    ok = all(
        _close(a, b, REPLAY_RTOL)
        for a, b in (
            (sol.rho_m, stored.rho_m),
            (sol.v_bar, stored.v_bar),
            (sol.nu1, stored.nu1),
            (sol.nu2, stored.nu2),
        )
    )
    checks.append(("middle-state", ok, f"rho_m {sol.rho_m:.12g}"))

    from . import subsolution as subs

    res = subs.rh_residuals(cert.sub, data, law)
    scale = solver._system_scale(data, law, cert.sub)
    ok = res.max_abs <= tol * (1.0 + scale) and _close(
        res.max_abs, cert.residuals.max_abs, REPLAY_RTOL, scale=tol
    )
    checks.append(("rh-residuals", ok, f"max |r| {res.max_abs:.6g}"))

    mg = subs.margins(cert.sub, data, law)
    ok = mg.feasible(floor) and all(
        _close(a, b, REPLAY_RTOL)
        for a, b in (
            (mg.m_trace, cert.margins.m_trace),
            (mg.m_det, cert.margins.m_det),
            (mg.m_adm_left, cert.margins.m_adm_left),
            (mg.m_adm_right, cert.margins.m_adm_right),
        )
    )
    checks.append(("margins", ok, f"smallest {mg.smallest:.6g}"))

    levels = dissipation.energy_levels(data, law, sol)
    e1 = dissipation.subsolution_energy_level(law, cert.sub)
    ok = all(
        _close(a, b, REPLAY_RTOL)
        for a, b in zip(levels + (e1,), cert.energy_levels)
    )
    checks.append(("energy-levels", ok, f"E_1 {e1:.12g}"))

    diss = dissipation.compare(data, law, sol, cert.sub, s.L)
    stored_d = cert.dissipation
    ok = (
        _close(diss.D_self, stored_d.D_self, REPLAY_RTOL)
        and _close(diss.D_sub, stored_d.D_sub, REPLAY_RTOL)
        and _close(diss.gap, stored_d.gap, REPLAY_RTOL)
        and diss.verdict == stored_d.verdict
    )
    checks.append(
        ("dissipation", ok, f"gap {diss.gap:.6g} dominant {diss.verdict}")
    )

    weak = weakform.report(
        data,
        law,
        self_sim=sol,
        sub=cert.sub,
        n_tf=cert.weak.n_test_functions,
        seed=cert.weak.seed,
        level=cert.weak.level,
    )
    ok = (
        weak.max_mass <= WEAK_RESIDUAL_TOL
        and weak.max_momentum <= WEAK_RESIDUAL_TOL
        and weak.min_admissibility >= -ADMISSIBILITY_TOL
        and _close(weak.max_mass, cert.weak.max_mass, 1e-3, scale=1e-13)
        and _close(
            weak.min_admissibility,
            cert.weak.min_admissibility,
            1e-3,
            scale=1e-13,
        )
    )
    checks.append(
        (
            "weakform",
            ok,
            f"max mass {weak.max_mass:.3g} min adm {weak.min_admissibility:.3g}",
        )
    )
    return checks


def cmd_verify(args) -> int:
    cert = load_certificate(args.certificate)
    checks = verify_certificate(cert)
    all_ok = True
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name:<20s} {detail}")
        if not ok:
            all_ok = False
            break
    if all_ok:
        print("certificate: pass")
        return EXIT_OK
    print("certificate: FAIL")
    return EXIT_ERROR


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DisslabError, ValueError, OSError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
