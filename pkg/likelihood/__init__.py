from .compatibility import check_compatibility
from .loglik import (
    ExposureSnapshot,
    LikelihoodConfig,
    LikelihoodResult,
    exposure_snapshots,
    ilm_from_values,
    log_likelihood_ilm,
    log_likelihood_tnilm,
    tnilm_from_values,
)
from .ordering import EventOrder, order_events

__all__ = [
    "EventOrder",
    "ExposureSnapshot",
    "LikelihoodConfig",
    "LikelihoodResult",
    "check_compatibility",
    "exposure_snapshots",
    "ilm_from_values",
    "log_likelihood_ilm",
    "log_likelihood_tnilm",
    "order_events",
    "tnilm_from_values",
]
