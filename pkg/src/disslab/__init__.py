"""disslab: dissipation-rate comparison of two-shock Riemann solutions vs. fan subsolutions.

For planar Riemann data of the 2-D isentropic Euler system in the
double-shock regime, the package builds the self-similar solution, finds
fan subsolutions of the relaxed interface system, compares energy
dissipation rates on finite boxes, and emits machine-checkable
certificates when a subsolution out-dissipates the self-similar solution.
"""

from ._core import backend_name
from .dissipation import (
    BoxEnergy,
    DissipationReport,
    box_energy,
    compare,
    energy_levels,
    rate_self_similar,
    rate_subsolution,
    subsolution_energy_level,
)
from .errors import (
    CertificateError,
    DisslabError,
    DomainError,
    InfeasibleParametersError,
    NumericalError,
    PartitionViolationError,
    ReductionError,
    SingularEliminationError,
    TwoShockRegimeError,
)
from .gas import GasLaw, energy_density, internal_energy, pressure, sound_speed_sq
from .riemann import (
    RiemannData,
    SelfSimilarTwoShock,
    check_lax,
    rh_residual,
    solve_middle_state,
    two_shock_condition,
)
from .scenario import Certificate, Scenario, load_certificate, load_scenario
from .solver import (
    GridSpec,
    SearchReport,
    SolveOptions,
    certify,
    jacobian_check,
    scan,
    solve_for,
)
from .subsolution import (
    FanPartition,
    FanSubsolution,
    FeasibilityMargins,
    SystemResiduals,
    embed_two_shock,
    margins,
    reduce_tangential,
    rh_residuals,
)
from .weakform import (
    FanState,
    TestFunction,
    WeakResidualReport,
    random_test_functions,
    solution_fields,
    subsolution_fields,
    two_shock_fields,
    weak_admissibility,
    weak_residual_solution,
    weak_residual_subsolution,
)

__version__ = "0.1.0"

__all__ = [
    "BoxEnergy",
    "Certificate",
    "CertificateError",
    "DisslabError",
    "DissipationReport",
    "DomainError",
    "FanPartition",
    "FanState",
    "FanSubsolution",
    "FeasibilityMargins",
    "GasLaw",
    "GridSpec",
    "InfeasibleParametersError",
    "NumericalError",
    "PartitionViolationError",
    "ReductionError",
    "RiemannData",
    "Scenario",
    "SearchReport",
    "SelfSimilarTwoShock",
    "SingularEliminationError",
    "SolveOptions",
    "SystemResiduals",
    "TestFunction",
    "TwoShockRegimeError",
    "WeakResidualReport",
    "backend_name",
    "box_energy",
    "certify",
    "check_lax",
    "compare",
    "embed_two_shock",
    "energy_density",
    "energy_levels",
    "internal_energy",
    "jacobian_check",
    "load_certificate",
    "load_scenario",
    "margins",
    "pressure",
    "random_test_functions",
    "rate_self_similar",
    "rate_subsolution",
    "reduce_tangential",
    "rh_residual",
    "rh_residuals",
    "scan",
    "solution_fields",
    "solve_for",
    "solve_middle_state",
    "sound_speed_sq",
    "subsolution_energy_level",
    "subsolution_fields",
    "two_shock_condition",
    "two_shock_fields",
    "weak_admissibility",
    "weak_residual_solution",
    "weak_residual_subsolution",
]
