"""Two-qubit swap heat engine with scale-invariant prior ignorance of its level spacings."""

__version__ = "0.1.0"

from .engine import (  # noqa: E402
    BathPair,
    CycleQuantities,
    DomainError,
    EngineConfig,
    cycle,
    is_engine,
    swap_is_optimal,
)
from .priors import JointPriorSpec, Observer, PriorSupport  # noqa: E402
from .quadrature import ConvergenceError, QuadratureSpec  # noqa: E402
from .expectations import ExpectationResult, Route, expected_efficiency  # noqa: E402
from .constrained import (  # noqa: E402
    ConstrainedSpec,
    maximize_expected_work,
    work_ratio,
    zhang_efficiency,
)
from .oracle import MCResult, mc_constrained_work, mc_expectation  # noqa: E402

__all__ = [
    "BathPair",
    "CycleQuantities",
    "DomainError",
    "EngineConfig",
    "cycle",
    "is_engine",
    "swap_is_optimal",
    "JointPriorSpec",
    "Observer",
    "PriorSupport",
    "ConvergenceError",
    "QuadratureSpec",
    "ExpectationResult",
    "Route",
    "expected_efficiency",
    "ConstrainedSpec",
    "maximize_expected_work",
    "work_ratio",
    "zhang_efficiency",
    "MCResult",
    "mc_constrained_work",
    "mc_expectation",
]
