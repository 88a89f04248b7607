"""Monte Carlo replication layer: distribution summaries and capacity search.

Replications are independent streams keyed by (base seed, replication index),
so a summary is bit-identical for a given config and n no matter how many
worker threads execute it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .core import ScenarioConfig, ServiceModel, derive_seed, run_replication
from .errors import ValidationError
from .profiles import ArrivalProfile

# Threshold grid used for exceedance tables unless the caller overrides it.
DEFAULT_THRESHOLDS = (15.0, 30.0, 45.0, 60.0, 75.0, 90.0, 105.0, 120.0)

STATISTICS = ("max_wait", "close_delay")

_CONFIRM_TAG = 0x5EED


@dataclass(frozen=True)
class ReplicationSummary:
    """Per-replication maximum waits and closing delays for one scenario."""

    max_waits: np.ndarray
    close_delays: np.ndarray
    replications: int
    config: ScenarioConfig

    def values(self, statistic: str) -> np.ndarray:
        if statistic == "max_wait":
            return self.max_waits
        if statistic == "close_delay":
            return self.close_delays
        raise ValidationError(
            f"unknown statistic {statistic!r}; expected one of {STATISTICS}"
        )


@dataclass(frozen=True)
class ExceedanceTable:
    """Fraction of replications whose statistic strictly exceeds each threshold."""

    statistic: str
    thresholds: tuple[float, ...]
    fractions: tuple[float, ...]
    counts: tuple[int, ...]
    replications: int


@dataclass(frozen=True)
class Histogram:
    """Right-closed bins of width ``bin_edges[1]`` starting at 0.

    ``normalized_peak`` rescales counts so the tallest bin has height 1,
    which makes histograms with different replication counts comparable.
    """

    bin_edges: np.ndarray
    counts: np.ndarray
    normalized_peak: np.ndarray


@dataclass(frozen=True)
class CapacityResult:
    """Outcome of the voters-per-device threshold search."""

    voters_per_device: int
    cycle_minutes: float
    wait_limit: float
    prob_limit: float
    servers: int
    replications_per_probe: int
    probes: tuple[tuple[int, float], ...]
    confirmation_replications: int
    confirmation_fraction: float | None
    capped: bool
    unreachable: bool


def replicate(config: ScenarioConfig, n: int, workers: int = 1) -> ReplicationSummary:
    """Run n independent replications of a scenario.

    Results land in replication-index order; ``workers`` only changes how the
    indices are partitioned across threads, never the numbers.
    """
    if n < 1:
        raise ValidationError("replication count must be >= 1")
    max_waits = np.empty(n)
    close_delays = np.empty(n)

    def fill(span):
        lo, hi = span
        for i in range(lo, hi):
            outcome = run_replication(config, i)
            max_waits[i] = outcome.max_wait
            close_delays[i] = outcome.close_delay

    if workers <= 1:
        fill((0, n))
    else:
        chunk = max(1, math.ceil(n / (workers * 8)))
        spans = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, spans))
    return ReplicationSummary(max_waits, close_delays, n, config)


def exceedance(
    summary: ReplicationSummary,
    statistic: str,
    thresholds=DEFAULT_THRESHOLDS,
) -> ExceedanceTable:
    """Tabulate P(statistic > threshold) across the summary's replications."""
    thresholds = tuple(float(t) for t in thresholds)
    if not thresholds:
        raise ValidationError("thresholds must be nonempty")
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValidationError("thresholds must be strictly ascending")
    if summary.replications < 1:
        raise ValidationError("summary has no replications")
    values = summary.values(statistic)
    counts = tuple(int(np.sum(values > t)) for t in thresholds)
    fractions = tuple(c / summary.replications for c in counts)
    return ExceedanceTable(statistic, thresholds, fractions, counts, summary.replications)


def histogram(values, bin_width: float) -> Histogram:
    """Bin nonnegative minutes into right-closed bins covering [0, max]."""
    if bin_width <= 0:
        raise ValidationError("bin_width must be positive")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValidationError("histogram needs at least one value")
    if np.any(values < 0):
        raise ValidationError("histogram values must be nonnegative")
    top = float(values.max())
    nbins = max(1, int(math.ceil(top / bin_width - 1e-12)))
    # bin i is (i*w, (i+1)*w], except bin 0 which also includes 0 itself
    idx = np.clip(np.ceil(values / bin_width - 1e-12).astype(int) - 1, 0, nbins - 1)
    counts = np.bincount(idx, minlength=nbins)
    edges = np.arange(nbins + 1) * float(bin_width)
    peak = counts.max()
    normalized = counts / peak if peak > 0 else counts.astype(float)
    return Histogram(edges, counts, normalized)


def worst_replication_indices(summary: ReplicationSummary, k: int) -> list[int]:
    """Indices of the k largest maximum waits, worst first (stable on ties)."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    order = np.argsort(-summary.max_waits, kind="stable")
    return [int(i) for i in order[: min(k, summary.replications)]]


def capacity_threshold(
    cycle_minutes: float,
    wait_limit: float,
    prob_limit: float,
    profile: ArrivalProfile,
    servers: int = 1,
    n: int = 10_000,
    *,
    service: ServiceModel | None = None,
    seed: int = 12345,
    search_cap: int = 1_000_000,
    confirm_factor: int = 10,
    workers: int = 1,
) -> CapacityResult:
    """Largest voters-per-device V with estimated P(max_wait > wait_limit) <= prob_limit.

    Doubles V to bracket the limit, then bisects; every probe runs ``n``
    replications. The search leans on the exceedance probability being
    nondecreasing in V, and all probes share the base seed (common random
    numbers), which keeps the probed curve smooth and the search
    deterministic. A confirmation run at ``confirm_factor * n`` replications
    re-estimates the probability at the returned value on a fresh stream.

    Returns 0 (``unreachable``) when even one voter per device misses the
    limit, and ``search_cap`` (``capped``) when the limit is never exceeded
    within the search range.
    """
    if cycle_minutes <= 0:
        raise ValidationError("cycle_minutes must be positive")
    if wait_limit <= 0:
        raise ValidationError("wait_limit must be positive")
    if not 0 < prob_limit < 1:
        raise ValidationError("prob_limit must lie strictly between 0 and 1")
    if servers < 1:
        raise ValidationError("servers must be >= 1")
    if n < 1:
        raise ValidationError("replications per probe must be >= 1")
    if search_cap < 1:
        raise ValidationError("search_cap must be >= 1")
    if service is None:
        service = ServiceModel("exponential", cycle_minutes)

    def probe(voters_per_device: int, reps: int, probe_seed: int) -> float:
        config = ScenarioConfig(
            servers=servers,
            expected_voters=float(voters_per_device) * servers,
            profile=profile,
            service=service,
            seed=probe_seed,
        )
        summary = replicate(config, reps, workers=workers)
        return float(np.mean(summary.max_waits > wait_limit))

    probes: list[tuple[int, float]] = []

    def probed(v: int) -> float:
        p = probe(v, n, seed)
        probes.append((v, p))
        return p

    def finish(answer: int, capped: bool, unreachable: bool) -> CapacityResult:
        confirm_n = confirm_factor * n
        confirm_p = None
        if answer > 0:
            confirm_p = probe(answer, confirm_n, derive_seed(seed, _CONFIRM_TAG))
        return CapacityResult(
            voters_per_device=answer,
            cycle_minutes=cycle_minutes,
            wait_limit=wait_limit,
            prob_limit=prob_limit,
            servers=servers,
            replications_per_probe=n,
            probes=tuple(probes),
            confirmation_replications=confirm_n if answer > 0 else 0,
            confirmation_fraction=confirm_p,
            capped=capped,
            unreachable=unreachable,
        )

    if probed(1) > prob_limit:
        return finish(0, capped=False, unreachable=True)

    lo, hi = 1, None
    while lo < search_cap:
        candidate = min(lo * 2, search_cap)
        if probed(candidate) > prob_limit:
            hi = candidate
            break
        lo = candidate
    if hi is None:
        return finish(search_cap, capped=True, unreachable=False)

    while hi - lo > 1:
        mid = (lo + hi) // 2
        if probed(mid) <= prob_limit:
            lo = mid
        else:
            hi = mid
    return finish(lo, capped=False, unreachable=False)


def with_vote_minutes(config: ScenarioConfig, vote_minutes: float) -> ScenarioConfig:
    """Copy of a scenario with the mean service time replaced."""
    return replace(config, service=replace(config.service, mean_minutes=float(vote_minutes)))


def with_voters_per_server(config: ScenarioConfig, voters_per_server: float) -> ScenarioConfig:
    """Copy of a scenario with expected head count set per server."""
    return replace(config, expected_voters=float(voters_per_server) * config.servers)
