"""Scenario and certificate files (YAML) and the scan grid dump (CSV).

Both file kinds are plain nested key/value documents.  Floats are written
with 17 significant digits so that a reloaded certificate replays
bit-for-bit; CSV cells use the shortest round-trip representation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from .dissipation import DissipationReport
from .errors import DomainError
from .gas import GasLaw
from .riemann import RiemannData, SelfSimilarTwoShock
from .solver import GridSpec, SearchReport, SolveOptions
from .subsolution import FanPartition, FanSubsolution, FeasibilityMargins, SystemResiduals
from .weakform import WeakResidualReport

TOOL_VERSION = "disslab 0.1.0"

WEAK_RESIDUAL_TOL = 1e-8
ADMISSIBILITY_TOL = 1e-8
REPLAY_RTOL = 1e-6

CSV_COLUMNS = (
    "rho1",
    "C",
    "status",
    "feasible",
    "beta",
    "nu_minus",
    "nu_plus",
    "gamma1",
    "m_trace",
    "m_det",
    "m_adm_left",
    "m_adm_right",
    "d_sub",
)


class _Dumper(yaml.SafeDumper):
    pass


def _represent_float(dumper, value):
    if math.isnan(value):
        text = ".nan"
    elif math.isinf(value):
        text = ".inf" if value > 0 else "-.inf"
    else:
        text = format(value, ".17g")
        if not any(ch in text for ch in ".eE"):
            text += ".0"
    return dumper.represent_scalar("tag:yaml.org,2002:float", text)


_Dumper.add_representer(float, _represent_float)


def dump_yaml(payload: dict) -> str:
    return yaml.dump(payload, Dumper=_Dumper, sort_keys=False, default_flow_style=False)


@dataclass(frozen=True)
class Scenario:
    """Validated run configuration: data, box, grid, tolerances, seed."""

    name: str
    law: GasLaw
    data: RiemannData
    L: float = 1.0
    grid_rho1: GridSpec | None = None
    grid_C: GridSpec | None = None
    options: SolveOptions = SolveOptions()
    seed: int = 0
    n_test_functions: int = 50
    quad_level: int = 1

    def __post_init__(self):
        if not (self.L > 0.0):
            raise DomainError(f"L must be positive, got {self.L!r}")
        if self.n_test_functions < 1:
            raise DomainError("n_test_functions must be >= 1")

    def with_overrides(self, **kwargs) -> "Scenario":
        return replace(self, **kwargs)


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise DomainError(f"missing key {key!r} in {context}")
    return mapping[key]


def _grid_from_dict(d: dict, context: str) -> GridSpec:
    try:
        return GridSpec(
            lo=float(_require(d, "lo", context)),
            hi=float(_require(d, "hi", context)),
            n=int(_require(d, "n", context)),
        )
    except ValueError as exc:
        raise DomainError(f"bad grid in {context}: {exc}") from exc


def scenario_from_dict(doc: dict, *, name_hint: str = "scenario") -> Scenario:
    if not isinstance(doc, dict):
        raise DomainError("scenario document must be a mapping")
    law = GasLaw(float(_require(doc, "gamma", "scenario")))
    rd = _require(doc, "riemann", "scenario")
    data = RiemannData(
        rho_minus=float(_require(rd, "rho_minus", "riemann")),
        v_minus=tuple(float(v) for v in _require(rd, "v_minus", "riemann")),
        rho_plus=float(_require(rd, "rho_plus", "riemann")),
        v_plus=tuple(float(v) for v in _require(rd, "v_plus", "riemann")),
    )
    grid = doc.get("grid") or {}
    opts = doc.get("options") or {}
    return Scenario(
        name=str(doc.get("name", name_hint)),
        law=law,
        data=data,
        L=float(doc.get("L", 1.0)),
        grid_rho1=_grid_from_dict(grid["rho1"], "grid.rho1") if "rho1" in grid else None,
        grid_C=_grid_from_dict(grid["C"], "grid.C") if "C" in grid else None,
        options=SolveOptions(
            margin_floor=float(opts.get("margin_floor", 1e-6)),
            residual_tol=float(opts.get("residual_tol", 1e-10)),
        ),
        seed=int(opts.get("seed", 0)),
        n_test_functions=int(opts.get("n_test_functions", 50)),
        quad_level=int(opts.get("quad_level", 1)),
    )


def scenario_to_dict(s: Scenario) -> dict:
    doc: dict = {
        "name": s.name,
        "gamma": s.law.gamma,
        "riemann": {
            "rho_minus": s.data.rho_minus,
            "v_minus": list(s.data.v_minus),
            "rho_plus": s.data.rho_plus,
            "v_plus": list(s.data.v_plus),
        },
        "L": s.L,
    }
    if s.grid_rho1 is not None and s.grid_C is not None:
        doc["grid"] = {
            "rho1": {"lo": s.grid_rho1.lo, "hi": s.grid_rho1.hi, "n": s.grid_rho1.n},
            "C": {"lo": s.grid_C.lo, "hi": s.grid_C.hi, "n": s.grid_C.n},
        }
    doc["options"] = {
        "margin_floor": s.options.margin_floor,
        "residual_tol": s.options.residual_tol,
        "seed": s.seed,
        "n_test_functions": s.n_test_functions,
        "quad_level": s.quad_level,
    }
    return doc


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise DomainError(f"cannot parse scenario {path}: {exc}") from exc
    return scenario_from_dict(doc, name_hint=path.stem)


def save_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(dump_yaml(scenario_to_dict(s)), encoding="utf-8")


@dataclass(frozen=True)
class Certificate:
    """Self-contained witness bundling one scan winner with all its checks."""

    scenario: Scenario
    self_similar: SelfSimilarTwoShock
    sub: FanSubsolution
    residuals: SystemResiduals
    margins: FeasibilityMargins
    energy_levels: tuple[float, float, float, float]  # E-, Em, E+, E1
    dissipation: DissipationReport
    weak: WeakResidualReport
    tool: str = TOOL_VERSION


def certificate_to_dict(cert: Certificate) -> dict:
    s = cert.self_similar
    sub = cert.sub
    res = cert.residuals
    mg = cert.margins
    d = cert.dissipation
    w = cert.weak
    return {
        "certificate": {"tool": cert.tool},
        "scenario": scenario_to_dict(cert.scenario),
        "self_similar": {
            "rho_m": s.rho_m,
            "v_bar": s.v_bar,
            "nu1": s.nu1,
            "nu2": s.nu2,
            "lax_ok_1": s.lax_ok_1,
            "lax_ok_3": s.lax_ok_3,
        },
        "subsolution": {
            "nu_minus": sub.partition.nu_minus,
            "nu_plus": sub.partition.nu_plus,
            "rho1": sub.rho1,
            "alpha": sub.alpha,
            "beta": sub.beta,
            "gamma1": sub.gamma1,
            "gamma2": sub.gamma2,
            "C": sub.C,
        },
        "residuals": {
            "cont_left": res.cont_left,
            "mom_1_left": res.mom_1_left,
            "mom_2_left": res.mom_2_left,
            "cont_right": res.cont_right,
            "mom_1_right": res.mom_1_right,
            "mom_2_right": res.mom_2_right,
            "max_abs": res.max_abs,
        },
        "margins": {
            "m_trace": mg.m_trace,
            "m_det": mg.m_det,
            "m_adm_left": mg.m_adm_left,
            "m_adm_right": mg.m_adm_right,
        },
        "energy_levels": {
            "E_minus": cert.energy_levels[0],
            "E_m": cert.energy_levels[1],
            "E_plus": cert.energy_levels[2],
            "E_1": cert.energy_levels[3],
        },
        "dissipation": {
            "L": d.L,
            "D_self": d.D_self,
            "D_sub": d.D_sub,
            "gap": d.gap,
            "rel_gap": d.rel_gap,
            "dissipation_dominant": d.verdict,
        },
        "weakform": {
            "seed": w.seed,
            "n_test_functions": w.n_test_functions,
            "level": w.level,
            "self_max_mass": w.self_max_mass,
            "self_max_momentum": w.self_max_momentum,
            "self_min_admissibility": w.self_min_admissibility,
            "sub_max_mass": w.sub_max_mass,
            "sub_max_momentum": w.sub_max_momentum,
            "sub_min_admissibility": w.sub_min_admissibility,
            "refinement_levels": list(w.refinement_levels),
            "refinement_max_mass": list(w.refinement_max_mass),
        },
        "tolerances": {
            "residual_tol": cert.scenario.options.residual_tol,
            "margin_floor": cert.scenario.options.margin_floor,
            "weak_residual_tol": WEAK_RESIDUAL_TOL,
            "admissibility_tol": ADMISSIBILITY_TOL,
            "replay_rtol": REPLAY_RTOL,
        },
    }


def certificate_from_dict(doc: dict) -> Certificate:
    scen = scenario_from_dict(_require(doc, "scenario", "certificate"))
    ss = _require(doc, "self_similar", "certificate")
    self_sim = SelfSimilarTwoShock(
        rho_m=float(ss["rho_m"]),
        v_bar=float(ss["v_bar"]),
        nu1=float(ss["nu1"]),
        nu2=float(ss["nu2"]),
        lax_ok_1=bool(ss["lax_ok_1"]),
        lax_ok_3=bool(ss["lax_ok_3"]),
    )
    sb = _require(doc, "subsolution", "certificate")
    sub = FanSubsolution(
        partition=FanPartition(float(sb["nu_minus"]), float(sb["nu_plus"])),
        rho1=float(sb["rho1"]),
        alpha=float(sb["alpha"]),
        beta=float(sb["beta"]),
        gamma1=float(sb["gamma1"]),
        gamma2=float(sb["gamma2"]),
        C=float(sb["C"]),
    )
    rs = _require(doc, "residuals", "certificate")
    residuals = SystemResiduals(
        cont_left=float(rs["cont_left"]),
        mom_1_left=float(rs["mom_1_left"]),
        mom_2_left=float(rs["mom_2_left"]),
        cont_right=float(rs["cont_right"]),
        mom_1_right=float(rs["mom_1_right"]),
        mom_2_right=float(rs["mom_2_right"]),
    )
    mg = _require(doc, "margins", "certificate")
    margins = FeasibilityMargins(
        m_trace=float(mg["m_trace"]),
        m_det=float(mg["m_det"]),
        m_adm_left=float(mg["m_adm_left"]),
        m_adm_right=float(mg["m_adm_right"]),
    )
    el = _require(doc, "energy_levels", "certificate")
    dd = _require(doc, "dissipation", "certificate")
    diss = DissipationReport(
        L=float(dd["L"]),
        D_self=float(dd["D_self"]),
        D_sub=float(dd["D_sub"]),
        gap=float(dd["gap"]),
        rel_gap=float(dd["rel_gap"]),
        verdict=bool(dd["dissipation_dominant"]),
    )
    wf = _require(doc, "weakform", "certificate")
    weak = WeakResidualReport(
        n_test_functions=int(wf["n_test_functions"]),
        seed=int(wf["seed"]),
        level=int(wf["level"]),
        self_max_mass=float(wf["self_max_mass"]),
        self_max_momentum=float(wf["self_max_momentum"]),
        self_min_admissibility=float(wf["self_min_admissibility"]),
        sub_max_mass=float(wf["sub_max_mass"]),
        sub_max_momentum=float(wf["sub_max_momentum"]),
        sub_min_admissibility=float(wf["sub_min_admissibility"]),
        refinement_levels=tuple(int(v) for v in wf["refinement_levels"]),
        refinement_max_mass=tuple(float(v) for v in wf["refinement_max_mass"]),
    )
    return Certificate(
        scenario=scen,
        self_similar=self_sim,
        sub=sub,
        residuals=residuals,
        margins=margins,
        energy_levels=(
            float(el["E_minus"]),
            float(el["E_m"]),
            float(el["E_plus"]),
            float(el["E_1"]),
        ),
        dissipation=diss,
        weak=weak,
        tool=str(_require(doc, "certificate", "certificate").get("tool", "")),
    )


def save_certificate(cert: Certificate, path: str | Path) -> None:
    Path(path).write_text(dump_yaml(certificate_to_dict(cert)), encoding="utf-8")


def load_certificate(path: str | Path) -> Certificate:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise DomainError(f"cannot parse certificate {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise DomainError(f"certificate {path} is not a mapping")
    return certificate_from_dict(doc)


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_grid_csv(report: SearchReport, path: str | Path) -> None:
    """Dump all scanned points, one row per grid point, in scan order."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for pt in report.points:
            writer.writerow(
                [
                    _csv_cell(pt.rho1),
                    _csv_cell(pt.C),
                    pt.status,
                    _csv_cell(pt.feasible),
                    _csv_cell(pt.beta),
                    _csv_cell(pt.nu_minus),
                    _csv_cell(pt.nu_plus),
                    _csv_cell(pt.gamma1),
                    _csv_cell(pt.m_trace),
                    _csv_cell(pt.m_det),
                    _csv_cell(pt.m_adm_left),
                    _csv_cell(pt.m_adm_right),
                    _csv_cell(pt.d_sub),
                ]
            )
