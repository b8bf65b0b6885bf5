from .augmentation import draw_initial_events, event_time_bounds, prestart_events
from .chain import (
    AcceptanceCounter,
    ChainState,
    MarkovChain,
    McmcRun,
    augmented_targets,
    default_start_time,
)
from .covariance import OnlineCovariance
from .initialize import initialize_chain
from .proposals import (
    fixed_kernel_sd,
    log_truncated_mass,
    mh_accept,
    propose_parameters,
    sample_truncated_normal,
)
from .run import advance_chain, audit_chain, audit_state, create_run, iterate, start
from .settings import McmcSettings
from .updates import gibbs_update_network, sample_sources, update_event_times, update_parameters

__all__ = [
    "AcceptanceCounter",
    "ChainState",
    "MarkovChain",
    "McmcRun",
    "McmcSettings",
    "OnlineCovariance",
    "advance_chain",
    "audit_chain",
    "audit_state",
    "augmented_targets",
    "create_run",
    "default_start_time",
    "draw_initial_events",
    "event_time_bounds",
    "fixed_kernel_sd",
    "gibbs_update_network",
    "initialize_chain",
    "iterate",
    "log_truncated_mass",
    "mh_accept",
    "prestart_events",
    "propose_parameters",
    "sample_sources",
    "sample_truncated_normal",
    "start",
    "update_event_times",
    "update_parameters",
]
