from .state import (
    DEFAULT_RESYNC_INTERVAL,
    EventRates,
    RateState,
    TransmissionRates,
    apply_event,
    check_states,
    encode_states,
    initialize_rates,
    rates_from_values,
    recompute_rates,
    total_rate,
)
from .values import RiskValues, compute_risk_values

__all__ = [
    "DEFAULT_RESYNC_INTERVAL",
    "EventRates",
    "RateState",
    "RiskValues",
    "TransmissionRates",
    "apply_event",
    "check_states",
    "compute_risk_values",
    "encode_states",
    "initialize_rates",
    "rates_from_values",
    "recompute_rates",
    "total_rate",
]
