"""Structure-preserving integrators for Jacobi dynamical systems.

The toolkit homogenizes a Jacobi system into a Poisson system one
dimension up, integrates the lifted dynamics with generating-function
one-step maps built on symplectic bi-realizations, and projects back.
Typical entry points:

    model = build_model("lotka_volterra")
    traj = integrate(model, "jhi3", t_span=(0.0, 10.0), ds=0.025)
    drift = hamiltonian_drift(traj, model)
"""

from .errors import (
    CapabilityError,
    ConfigError,
    DegenerateStepError,
    DomainViolationError,
    EvaluationError,
    IntegrationFailure,
    JhiError,
    NewtonDivergenceError,
    StepError,
)
from .jacobi import (
    CotangentData,
    ExtendedState,
    HamiltonianField,
    JacobiConditionReport,
    JacobiStructure,
    homogeneity_action,
    jacobi_vector_field,
    lifted_hamiltonian,
    lifted_vector_field,
    verify_jacobi_conditions,
)
from .generating import GeneratingCoefficients, compute_coefficients, homogeneity_defect
from .birealization import (
    BiRealization,
    CoordinateChange,
    canonical_pair_birealization,
    first_order_birealization,
    transported_birealization,
)
from .models import ModelDefinition, build_model, exact_flow, model_names
from .integrator import (
    METHOD_NAMES,
    StepConfig,
    Trajectory,
    integrate,
    jhi_step,
    reference_solution,
)
from .diagnostics import (
    DriftSeries,
    OrderStudyRow,
    StudyProtocol,
    casimir_drift,
    estimate_order,
    hamiltonian_drift,
    run_order_study,
    study_protocol,
    trajectory_error,
)
from .validation import CriterionResult, run_all

__all__ = [
    "BiRealization",
    "CapabilityError",
    "ConfigError",
    "CoordinateChange",
    "CotangentData",
    "CriterionResult",
    "DegenerateStepError",
    "DomainViolationError",
    "DriftSeries",
    "EvaluationError",
    "ExtendedState",
    "GeneratingCoefficients",
    "HamiltonianField",
    "IntegrationFailure",
    "JacobiConditionReport",
    "JacobiStructure",
    "JhiError",
    "METHOD_NAMES",
    "ModelDefinition",
    "NewtonDivergenceError",
    "OrderStudyRow",
    "StepConfig",
    "StepError",
    "StudyProtocol",
    "Trajectory",
    "build_model",
    "canonical_pair_birealization",
    "casimir_drift",
    "compute_coefficients",
    "estimate_order",
    "exact_flow",
    "first_order_birealization",
    "hamiltonian_drift",
    "homogeneity_action",
    "homogeneity_defect",
    "integrate",
    "jacobi_vector_field",
    "jhi_step",
    "lifted_hamiltonian",
    "lifted_vector_field",
    "model_names",
    "reference_solution",
    "run_all",
    "run_order_study",
    "study_protocol",
    "trajectory_error",
    "transported_birealization",
    "verify_jacobi_conditions",
]
