"""Parameter sweeps: sensitivity curves and contour-ready grids.

Every grid point reuses the base scenario's seed, so a sweep point is exactly
reproducible by a direct ``stats.replicate`` call with the same config, and
neighboring points share random numbers (which keeps estimated curves smooth).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ScenarioConfig
from .errors import BudgetError, ValidationError
from .planner import queue_stop_max_voters
from .stats import replicate, with_vote_minutes, with_voters_per_server

AXIS_NAMES = ("vote_minutes", "voters_per_server")

DEFAULT_SWEEP_THRESHOLDS = (15.0, 30.0, 60.0, 120.0)

# Ceiling on points x replications_per_point unless the spec raises it.
DEFAULT_MAX_TOTAL_REPLICATIONS = 20_000_000


@dataclass(frozen=True)
class SweepAxis:
    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValidationError(f"axis name must be one of {AXIS_NAMES}")
        if not self.values:
            raise ValidationError("axis needs at least one grid value")
        if any(v <= 0 for v in self.values):
            raise ValidationError("grid values must be positive")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValidationError("grid values must be strictly ascending")


@dataclass(frozen=True)
class ExceedanceStatistic:
    """P(max_wait > W) for each threshold W, with binomial standard errors."""

    thresholds: tuple[float, ...] = DEFAULT_SWEEP_THRESHOLDS

    def __post_init__(self):
        if not self.thresholds:
            raise ValidationError("exceedance statistic needs thresholds")

    def labels(self) -> list[str]:
        return [f"p_max_wait_gt_{t:g}" for t in self.thresholds]

    def evaluate(self, max_waits: np.ndarray) -> list[tuple[str, float, float]]:
        n = max_waits.size
        out = []
        for label, t in zip(self.labels(), self.thresholds):
            p = float(np.mean(max_waits > t))
            se = math.sqrt(p * (1.0 - p) / n)
            out.append((label, p, se))
        return out


@dataclass(frozen=True)
class QuantileStatistic:
    """A max-wait quantile, with an order-statistic standard error."""

    q: float

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValidationError("quantile must lie strictly between 0 and 1")

    def labels(self) -> list[str]:
        return [f"max_wait_q{self.q:g}"]

    def evaluate(self, max_waits: np.ndarray) -> list[tuple[str, float, float]]:
        n = max_waits.size
        ordered = np.sort(max_waits)
        value = float(np.quantile(ordered, self.q))
        # one-sigma bracket of the order statistic index
        spread = math.sqrt(n * self.q * (1.0 - self.q))
        center = self.q * (n - 1)
        lo = ordered[max(0, int(math.floor(center - spread)))]
        hi = ordered[min(n - 1, int(math.ceil(center + spread)))]
        return [(self.labels()[0], value, float(hi - lo) / 2.0)]


@dataclass(frozen=True)
class SweepSpec:
    base: ScenarioConfig
    axis1: SweepAxis
    axis2: SweepAxis | None = None
    replications_per_point: int = 10_000
    statistic: ExceedanceStatistic | QuantileStatistic = field(
        default_factory=ExceedanceStatistic
    )
    max_total_replications: int = DEFAULT_MAX_TOTAL_REPLICATIONS

    def __post_init__(self):
        if self.replications_per_point < 1:
            raise ValidationError("replications_per_point must be >= 1")
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise ValidationError("the two sweep axes must differ")

    def point_count(self) -> int:
        count = len(self.axis1.values)
        if self.axis2 is not None:
            count *= len(self.axis2.values)
        return count


@dataclass(frozen=True)
class SweepPoint:
    axis1_value: float
    axis2_value: float | None
    # (label, value, standard_error) per statistic component
    values: tuple[tuple[str, float, float], ...]


@dataclass(frozen=True)
class SweepResult:
    axis1_name: str
    axis2_name: str | None
    points: tuple[SweepPoint, ...]
    replications_per_point: int
    # (vote_minutes, voters_per_server) pairs tracing the queue-stop curve
    overlay: tuple[tuple[float, float], ...]


def _apply_axis(config: ScenarioConfig, name: str, value: float) -> ScenarioConfig:
    if name == "vote_minutes":
        return with_vote_minutes(config, value)
    return with_voters_per_server(config, value)


def _check_budget(spec: SweepSpec):
    total = spec.point_count() * spec.replications_per_point
    if total > spec.max_total_replications:
        raise BudgetError(
            f"sweep needs {total} replications ({spec.point_count()} points x "
            f"{spec.replications_per_point}), over the budget of "
            f"{spec.max_total_replications}; shrink the grid or raise the budget"
        )


def _evaluate_point(config: ScenarioConfig, spec: SweepSpec, workers: int):
    summary = replicate(config, spec.replications_per_point, workers=workers)
    return tuple(spec.statistic.evaluate(summary.max_waits))


def queue_stop_overlay(day_minutes: float, vote_values) -> tuple[tuple[float, float], ...]:
    """Queue-stop curve sampled at the given vote times."""
    return tuple((float(v), queue_stop_max_voters(day_minutes, v)) for v in vote_values)


def _overlay_for(spec: SweepSpec) -> tuple[tuple[float, float], ...]:
    for axis in (spec.axis1, spec.axis2):
        if axis is not None and axis.name == "vote_minutes":
            return queue_stop_overlay(spec.base.day_minutes, axis.values)
    return ()


def sweep_1d(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate the statistic along a single axis."""
    if spec.axis2 is not None:
        raise ValidationError("sweep_1d takes a spec without a second axis")
    _check_budget(spec)
    points = []
    for value in spec.axis1.values:
        config = _apply_axis(spec.base, spec.axis1.name, value)
        points.append(SweepPoint(value, None, _evaluate_point(config, spec, workers)))
    return SweepResult(
        axis1_name=spec.axis1.name,
        axis2_name=None,
        points=tuple(points),
        replications_per_point=spec.replications_per_point,
        overlay=_overlay_for(spec),
    )


def sweep_2d(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate the statistic over the full Cartesian grid of both axes.

    The result carries the analytic queue-stop curve sampled on the
    vote-minutes axis so plots can overlay it on the contours.
    """
    if spec.axis2 is None:
        raise ValidationError("sweep_2d needs a second axis")
    _check_budget(spec)
    points = []
    for value1 in spec.axis1.values:
        partial = _apply_axis(spec.base, spec.axis1.name, value1)
        for value2 in spec.axis2.values:
            config = _apply_axis(partial, spec.axis2.name, value2)
            points.append(SweepPoint(value1, value2, _evaluate_point(config, spec, workers)))
    return SweepResult(
        axis1_name=spec.axis1.name,
        axis2_name=spec.axis2.name,
        points=tuple(points),
        replications_per_point=spec.replications_per_point,
        overlay=_overlay_for(spec),
    )
