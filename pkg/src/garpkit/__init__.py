"""Revealed-preference rationality testing for consumer expenditure data.

Test datasets for (efficiency-relaxed) consistency with utility
maximisation, compute the critical cost efficiency index exactly, recover an
explicit utility function from the Afriat inequalities, and verify the
rationalization/cost-rationalization duality by sampling.
"""

from .afriat import (
    AfriatSolution,
    evaluate_utility,
    evaluate_utility_batch,
    solve_afriat,
    worst_residual,
)
from .ccei import CceiResult, ccei_binary_search, ccei_exact
from .datagen import GeneratorSpec, drawn_markets, generate, waste_floor
from .duality import (
    VerificationReport,
    check_duality_garp,
    verify_cost_rationalization,
    verify_rationalization,
)
from .errors import (
    AfriatInfeasibleError,
    AfriatVerificationError,
    DimensionMismatchError,
    GarpkitError,
    InfeasibleWasteError,
    InvalidToleranceError,
    LengthMismatchError,
    NegativeBundleError,
    NonpositivePriceError,
    ParseError,
    ShapeMismatchError,
    TooLargeError,
    ZeroBundleError,
)
from .model import (
    CrossMatrix,
    Dataset,
    EfficiencyVector,
    coerce_efficiency,
    cross_expenditures,
    validate_dataset,
)
from .revpref import (
    CycleWitness,
    GarpVerdict,
    RevealedRelation,
    check_e_garp,
    direct_relations,
    validate_witness,
)

__version__ = "0.1.0"

__all__ = [
    "AfriatInfeasibleError",
    "AfriatSolution",
    "AfriatVerificationError",
    "CceiResult",
    "CrossMatrix",
    "CycleWitness",
    "Dataset",
    "DimensionMismatchError",
    "EfficiencyVector",
    "GarpVerdict",
    "GarpkitError",
    "GeneratorSpec",
    "InfeasibleWasteError",
    "InvalidToleranceError",
    "LengthMismatchError",
    "NegativeBundleError",
    "NonpositivePriceError",
    "ParseError",
    "RevealedRelation",
    "ShapeMismatchError",
    "TooLargeError",
    "VerificationReport",
    "ZeroBundleError",
    "ccei_binary_search",
    "ccei_exact",
    "check_duality_garp",
    "check_e_garp",
    "coerce_efficiency",
    "cross_expenditures",
    "direct_relations",
    "evaluate_utility",
    "evaluate_utility_batch",
    "drawn_markets",
    "generate",
    "solve_afriat",
    "validate_dataset",
    "validate_witness",
    "verify_cost_rationalization",
    "verify_rationalization",
    "waste_floor",
    "worst_residual",
]
