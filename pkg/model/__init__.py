from .distributions import Distribution
from .extents import EventExtents, as_extent
from .functions import ROLE_ORDER, RiskFunctions, canonical_role, required_roles
from .parameters import RiskParameters, RiskPriors, log_prior, sample_priors
from .validation import ValidationReport, validate_model

__all__ = [
    "Distribution",
    "EventExtents",
    "ROLE_ORDER",
    "RiskFunctions",
    "RiskParameters",
    "RiskPriors",
    "ValidationReport",
    "as_extent",
    "canonical_role",
    "log_prior",
    "required_roles",
    "sample_priors",
    "validate_model",
]
