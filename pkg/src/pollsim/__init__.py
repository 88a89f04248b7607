"""pollsim: Monte Carlo queue simulation and capacity planning for polling places."""

from .core import (
    ElectionOutcome,
    ScenarioConfig,
    ServiceModel,
    minute_trace,
    replication_rng,
    run_replication,
    sample_arrivals,
    service_start_times,
    simulate_election,
)
from .errors import BudgetError, ValidationError
from .planner import (
    PrecinctRecord,
    QueueStopInputs,
    max_vote_time,
    queue_stop_allocation,
    queue_stop_max_voters,
    registered_per_machine,
    roster_report,
    statutory_allocation,
)
from .profiles import ArrivalProfile, build_profile, named_profile, profile_names
from .stats import (
    CapacityResult,
    ExceedanceTable,
    Histogram,
    ReplicationSummary,
    capacity_threshold,
    exceedance,
    histogram,
    replicate,
)
from .sweep import (
    ExceedanceStatistic,
    QuantileStatistic,
    SweepAxis,
    SweepResult,
    SweepSpec,
    sweep_1d,
    sweep_2d,
)

__version__ = "0.1.0"

__all__ = [
    "ArrivalProfile",
    "BudgetError",
    "CapacityResult",
    "ElectionOutcome",
    "ExceedanceStatistic",
    "ExceedanceTable",
    "Histogram",
    "PrecinctRecord",
    "QuantileStatistic",
    "QueueStopInputs",
    "ReplicationSummary",
    "ScenarioConfig",
    "ServiceModel",
    "SweepAxis",
    "SweepResult",
    "SweepSpec",
    "ValidationError",
    "build_profile",
    "capacity_threshold",
    "exceedance",
    "histogram",
    "max_vote_time",
    "minute_trace",
    "named_profile",
    "profile_names",
    "queue_stop_allocation",
    "queue_stop_max_voters",
    "registered_per_machine",
    "replicate",
    "replication_rng",
    "roster_report",
    "run_replication",
    "sample_arrivals",
    "service_start_times",
    "simulate_election",
    "statutory_allocation",
    "sweep_1d",
    "sweep_2d",
    "__version__",
]
