"""Comparing information structures in finite zero-sum Bayesian games."""

from .blackwell import GarblingResult, blackwell_battery, check_garbling, min_garbled_pairing, pairing
from .core import (
    Channel,
    Game,
    InfoStructure,
    PairMeasure,
    ProbVector,
    ReducedStructure,
    apply_garbling,
    bsc,
    compose,
    garble_pair,
    make_cond_independent,
    marginal,
    projection_kernel,
    quantize_channel,
    reduce_independent,
    refine_signal,
    shared_signal,
)
from .errors import (
    AbsoluteContinuityError,
    ArithmeticFailure,
    DegenerateDensityError,
    DimensionError,
    InfoOrderError,
    NotApplicableError,
    PriorMismatchError,
    ValidationError,
)
from .lp import LinearProgram, LpCertificate, matrix_game
from .lp import solve as solve_lp
from .ordering import OrderResult, SuiteReport, Witness, check_order, monotonicity_suite, refinement_suite, witness_game
from .solver import (
    BehavioralStrategy,
    DecisionValue,
    GameValue,
    best_response_value,
    maximizer_value,
    normal_form_value,
    payoff,
    posterior_functional_check,
    posteriors,
    single_agent_value,
    value,
)

__all__ = [
    "AbsoluteContinuityError",
    "apply_garbling",
    "ArithmeticFailure",
    "BehavioralStrategy",
    "best_response_value",
    "blackwell_battery",
    "bsc",
    "Channel",
    "check_garbling",
    "check_order",
    "compose",
    "DecisionValue",
    "DegenerateDensityError",
    "DimensionError",
    "Game",
    "GameValue",
    "garble_pair",
    "GarblingResult",
    "InfoOrderError",
    "InfoStructure",
    "LinearProgram",
    "LpCertificate",
    "make_cond_independent",
    "marginal",
    "matrix_game",
    "maximizer_value",
    "min_garbled_pairing",
    "monotonicity_suite",
    "normal_form_value",
    "NotApplicableError",
    "OrderResult",
    "pairing",
    "PairMeasure",
    "payoff",
    "posterior_functional_check",
    "posteriors",
    "PriorMismatchError",
    "ProbVector",
    "projection_kernel",
    "quantize_channel",
    "reduce_independent",
    "ReducedStructure",
    "refine_signal",
    "refinement_suite",
    "shared_signal",
    "single_agent_value",
    "solve_lp",
    "SuiteReport",
    "ValidationError",
    "value",
    "Witness",
    "witness_game",
]

__version__ = "0.1.0"
