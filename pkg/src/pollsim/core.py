"""Single-election simulation: arrival sampling and the FIFO queue engine.

One election is a pure function of (profile, head count, service model, seed):
arrivals are drawn from a piecewise-homogeneous Poisson process, each voter
draws one service duration, and a bank of identical servers works the queue
in arrival order. Everyone who arrives before closing is served, even if that
runs past the end of the day.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernel import fifo_start_times
from .errors import ValidationError
from .profiles import ArrivalProfile

SERVICE_KINDS = ("deterministic", "exponential", "lognormal")
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class ServiceModel:
    """Per-voter service-time distribution for one station type.

    ``dispersion`` is the coefficient of variation and only shapes the
    lognormal kind; deterministic and exponential ignore it.
    """

    kind: str
    mean_minutes: float
    dispersion: float = 0.0

    def __post_init__(self):
        if self.kind not in SERVICE_KINDS:
            raise ValidationError(
                f"unknown service kind {self.kind!r}; expected one of {SERVICE_KINDS}"
            )
        if not self.mean_minutes > 0:
            raise ValidationError("mean_minutes must be positive")
        if self.dispersion < 0:
            raise ValidationError("dispersion must be nonnegative")
        if self.kind == "lognormal" and not self.dispersion > 0:
            raise ValidationError("lognormal service requires dispersion > 0")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "deterministic":
            return np.full(n, self.mean_minutes)
        if self.kind == "exponential":
            return rng.exponential(self.mean_minutes, n)
        sigma_sq = math.log1p(self.dispersion**2)
        mu = math.log(self.mean_minutes) - 0.5 * sigma_sq
        return rng.lognormal(mu, math.sqrt(sigma_sq), n)


@dataclass(frozen=True)
class ScenarioConfig:
    """Full parameter set for one precinct's simulated election day."""

    servers: int
    expected_voters: float
    profile: ArrivalProfile
    service: ServiceModel
    seed: int = 12345

    def __post_init__(self):
        if int(self.servers) != self.servers or self.servers < 1:
            raise ValidationError("servers must be an integer >= 1")
        if self.expected_voters < 0:
            raise ValidationError("expected_voters must be nonnegative")
        if not 0 <= self.seed <= MAX_SEED:
            raise ValidationError("seed must fit in an unsigned 64-bit integer")

    @property
    def day_minutes(self) -> float:
        return self.profile.day_minutes

    @property
    def voters_per_server(self) -> float:
        return self.expected_voters / self.servers


@dataclass(frozen=True)
class ElectionOutcome:
    """One replication's result.

    ``wait_minutes[k]`` is service start minus arrival for the k-th arriving
    voter; ``close_delay`` is how long past the end of the day the last voter
    finished (0 when the floor closes on time).
    """

    arrival_times: np.ndarray
    wait_minutes: np.ndarray
    max_wait: float
    close_delay: float
    voter_count: int

    @property
    def start_times(self) -> np.ndarray:
        return self.arrival_times + self.wait_minutes


def replication_rng(base_seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 stream for one replication, keyed by (seed, index).

    Streams are reproducible and order-independent: replication 7 draws the
    same numbers whether it runs first, last, or on another thread.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((base_seed, index))))


def derive_seed(base_seed: int, tag: int) -> int:
    """Deterministic child seed for auxiliary streams (e.g. confirmation runs)."""
    return int(np.random.SeedSequence((base_seed, tag)).generate_state(1, np.uint64)[0])


def sample_arrivals(
    profile: ArrivalProfile, expected_voters: float, rng: np.random.Generator
) -> np.ndarray:
    """Draw one day of arrival times, sorted ascending, all in [0, day).

    Each segment contributes Poisson(expected_voters x hourly_fraction x
    segment hours) arrivals placed uniformly within the segment, so the total
    head count fluctuates around ``expected_voters`` day to day.
    """
    if expected_voters < 0:
        raise ValidationError("expected_voters must be nonnegative")
    parts = []
    for start, end, fraction in profile.segments:
        lam = expected_voters * fraction * (end - start) / 60.0
        count = rng.poisson(lam)
        if count:
            parts.append(rng.uniform(start, end, count))
    if not parts:
        return np.empty(0)
    arrivals = np.concatenate(parts)
    arrivals.sort()
    return arrivals


def service_start_times(
    arrivals: np.ndarray, durations: np.ndarray, servers: int
) -> np.ndarray:
    """FIFO start times for given arrivals and per-voter service durations.

    Exposed separately from :func:`simulate_election` so callers can replay
    identical durations while varying the server count.
    """
    arrivals = np.ascontiguousarray(arrivals, dtype=float)
    durations = np.ascontiguousarray(durations, dtype=float)
    if arrivals.shape != durations.shape:
        raise ValidationError("arrivals and durations must have equal length")
    if arrivals.size and np.any(np.diff(arrivals) < 0):
        raise ValidationError("arrivals must be sorted ascending")
    if int(servers) != servers or servers < 1:
        raise ValidationError("servers must be an integer >= 1")
    return fifo_start_times(arrivals, durations, int(servers))


def simulate_election(
    arrivals,
    servers: int,
    service: ServiceModel,
    rng: np.random.Generator,
    day_minutes: float,
) -> ElectionOutcome:
    """Run one election over a fixed arrival sequence.

    Voters are served first-come-first-served; whoever is in line at closing
    is still served, which is what produces a positive ``close_delay``.
    """
    arrivals = np.ascontiguousarray(arrivals, dtype=float)
    if arrivals.ndim != 1:
        raise ValidationError("arrivals must be a 1-d sequence of minutes")
    if arrivals.size:
        if np.any(np.diff(arrivals) < 0):
            raise ValidationError("arrivals must be sorted ascending")
        if arrivals[0] < 0 or arrivals[-1] >= day_minutes:
            raise ValidationError("arrivals must lie in [0, day_minutes)")
    durations = service.sample(arrivals.size, rng)
    starts = service_start_times(arrivals, durations, servers)
    waits = starts - arrivals
    if arrivals.size:
        max_wait = float(waits.max())
        close_delay = max(0.0, float((starts + durations).max()) - day_minutes)
    else:
        max_wait = 0.0
        close_delay = 0.0
    return ElectionOutcome(
        arrival_times=arrivals,
        wait_minutes=waits,
        max_wait=max_wait,
        close_delay=close_delay,
        voter_count=int(arrivals.size),
    )


def run_replication(config: ScenarioConfig, index: int) -> ElectionOutcome:
    """Sample and simulate replication ``index`` of a scenario."""
    rng = replication_rng(config.seed, index)
    arrivals = sample_arrivals(config.profile, config.expected_voters, rng)
    return simulate_election(
        arrivals, config.servers, config.service, rng, config.day_minutes
    )


def minute_trace(outcome: ElectionOutcome, day_minutes: float):
    """Per-minute view of one election: queue length and arriving-voter waits.

    Returns ``(minutes, queue_length, wait)`` where ``queue_length[m]`` counts
    voters who have arrived by minute m but not yet started service, and
    ``wait[m]`` is the largest wait among voters arriving during [m, m+1)
    (0 when none arrive). The trace extends past closing until the line drains.
    """
    horizon = int(math.ceil(day_minutes + outcome.close_delay))
    minutes = np.arange(horizon + 1)
    starts = outcome.start_times
    queue = np.searchsorted(outcome.arrival_times, minutes, side="right") - np.searchsorted(
        starts, minutes, side="right"
    )
    wait = np.zeros(minutes.size)
    if outcome.voter_count:
        buckets = np.minimum(outcome.arrival_times.astype(int), horizon)
        np.maximum.at(wait, buckets, outcome.wait_minutes)
    return minutes, queue, wait
