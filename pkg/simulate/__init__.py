from .curves import default_grid, state_counts
from .io import (
    read_events_csv,
    read_network_csv,
    read_observations_csv,
    write_events_csv,
    write_frame_csv,
    write_network_csv,
    write_observations_csv,
)
from .observe import observe
from .records import EXTERNAL, NO_SOURCE, EventObservations, Events, TransmissionNetwork
from .replicates import ReplicateResult, SimulationJob, run_replicate, simulate_replicates
from .simulation import (
    SimulationState,
    StopCondition,
    create_simulation,
    next_event,
    run_simulation,
    sample_source,
    simulate,
    starting_codes,
)

__all__ = [
    "EXTERNAL",
    "NO_SOURCE",
    "EventObservations",
    "Events",
    "ReplicateResult",
    "SimulationJob",
    "SimulationState",
    "StopCondition",
    "TransmissionNetwork",
    "create_simulation",
    "default_grid",
    "next_event",
    "observe",
    "read_events_csv",
    "read_network_csv",
    "read_observations_csv",
    "run_replicate",
    "run_simulation",
    "sample_source",
    "simulate",
    "simulate_replicates",
    "starting_codes",
    "state_counts",
    "write_events_csv",
    "write_frame_csv",
    "write_network_csv",
    "write_observations_csv",
]
