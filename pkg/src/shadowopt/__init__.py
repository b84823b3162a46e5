"""Directional-derivative estimation through inner-product circuits, with a
dense statevector simulator, stochastic shadow descent, and zeroth-order
baselines."""

from .circuits import (
    AnsatzSpec,
    ParamCircuit,
    Slot,
    build_basic_entangler,
    build_strongly_entangling,
    encode,
    eval_f,
)
from .counting import ExecutionCounter
from .deriv import psr_gradient, psr_partial, rsgf_estimate, spsa_estimate
from .ipc import (
    ShadowEstimate,
    build_fused_ipc,
    build_ipc,
    estimate_half_shadow,
    estimate_shadow,
    estimate_shadow_fused,
    gate_listing,
)
from .optim import (
    ConstantStep,
    OptimizerConfig,
    Problem,
    SpsaGains,
    TheoremBudget,
    recommended_alpha,
    required_iterations,
    run_optimizer,
    smoothness_bound,
)
from .sim import ObservableExpr, RegisterLayout, pauli_obs

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "ConstantStep",
    "ExecutionCounter",
    "ObservableExpr",
    "OptimizerConfig",
    "ParamCircuit",
    "Problem",
    "RegisterLayout",
    "ShadowEstimate",
    "Slot",
    "SpsaGains",
    "TheoremBudget",
    "build_basic_entangler",
    "build_fused_ipc",
    "build_ipc",
    "build_strongly_entangling",
    "encode",
    "estimate_half_shadow",
    "estimate_shadow",
    "estimate_shadow_fused",
    "eval_f",
    "gate_listing",
    "pauli_obs",
    "psr_gradient",
    "psr_partial",
    "recommended_alpha",
    "required_iterations",
    "rsgf_estimate",
    "run_optimizer",
    "smoothness_bound",
    "spsa_estimate",
    "__version__",
]
