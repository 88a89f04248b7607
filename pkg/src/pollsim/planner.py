"""Closed-form capacity rules and roster-level allocation reports.

The queue-stop rule caps the queueing product: (actual voters per machine) x
(mean minutes per voter) must not exceed half the day. Everything here is
exact arithmetic; the Monte Carlo machinery lives in stats/sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

DEFAULT_TURNOUT = 0.75
DEFAULT_DAY_MINUTES = 780.0
DEFAULT_VOTE_MINUTES = 5.0
DEFAULT_STATUTORY_QUOTA = 200

# Guards float fuzz in ceilings: 16.999999999999996 rounds up to 17, while a
# true integer boundary like 1.0 never spills to 2.
_CEIL_DECIMALS = 9


def _ceil(x: float) -> int:
    return math.ceil(round(x, _CEIL_DECIMALS))


def queue_stop_max_voters(day_minutes: float, vote_minutes: float) -> float:
    """Most actual voters one machine can take per day under the queue-stop rule."""
    if day_minutes <= 0 or vote_minutes <= 0:
        raise ValidationError("day_minutes and vote_minutes must be positive")
    return day_minutes / (2.0 * vote_minutes)


def registered_per_machine(actual_per_machine: float, turnout: float) -> float:
    """Convert an actual-voters-per-machine limit to registered voters."""
    if not 0 < turnout <= 1:
        raise ValidationError("turnout must lie in (0, 1]")
    if actual_per_machine <= 0:
        raise ValidationError("actual_per_machine must be positive")
    return actual_per_machine / turnout


def max_vote_time(day_minutes: float, actual_per_machine: float) -> float:
    """Longest mean vote time that keeps a given load inside the queue-stop rule."""
    if day_minutes <= 0 or actual_per_machine <= 0:
        raise ValidationError("day_minutes and actual_per_machine must be positive")
    return 0.5 * day_minutes / actual_per_machine


def statutory_allocation(registered: int, voters_per_unit: int = DEFAULT_STATUTORY_QUOTA) -> int:
    """Machines required by a one-per-quota rule, rounding any fraction up."""
    if registered < 0:
        raise ValidationError("registered must be nonnegative")
    if voters_per_unit < 1:
        raise ValidationError("voters_per_unit must be >= 1")
    return -(-int(registered) // int(voters_per_unit))


def queue_stop_allocation(
    registered: int,
    turnout: float = DEFAULT_TURNOUT,
    day_minutes: float = DEFAULT_DAY_MINUTES,
    vote_minutes: float = DEFAULT_VOTE_MINUTES,
) -> int:
    """Machines required so the expected load satisfies the queue-stop rule."""
    if registered < 0:
        raise ValidationError("registered must be nonnegative")
    if not 0 < turnout <= 1:
        raise ValidationError("turnout must lie in (0, 1]")
    if day_minutes <= 0 or vote_minutes <= 0:
        raise ValidationError("day_minutes and vote_minutes must be positive")
    if registered == 0:
        return 0
    return _ceil(registered * turnout * 2.0 * vote_minutes / day_minutes)


@dataclass(frozen=True)
class QueueStopInputs:
    """Parameter bundle for the closed-form rules.

    Supply either voters-per-machine figure; when both are present they must
    agree through the turnout conversion.
    """

    day_minutes: float = DEFAULT_DAY_MINUTES
    vote_minutes: float = DEFAULT_VOTE_MINUTES
    turnout: float = DEFAULT_TURNOUT
    registered_per_machine: float | None = None
    actual_per_machine: float | None = None

    def __post_init__(self):
        if self.day_minutes <= 0 or self.vote_minutes <= 0:
            raise ValidationError("day_minutes and vote_minutes must be positive")
        if not 0 < self.turnout <= 1:
            raise ValidationError("turnout must lie in (0, 1]")
        for value in (self.registered_per_machine, self.actual_per_machine):
            if value is not None and value <= 0:
                raise ValidationError("voters-per-machine figures must be positive")
        if self.registered_per_machine is not None and self.actual_per_machine is not None:
            implied = self.turnout * self.registered_per_machine
            if not math.isclose(implied, self.actual_per_machine, rel_tol=1e-9):
                raise ValidationError(
                    "actual_per_machine must equal turnout x registered_per_machine"
                )

    def actual(self) -> float | None:
        if self.actual_per_machine is not None:
            return self.actual_per_machine
        if self.registered_per_machine is not None:
            return self.turnout * self.registered_per_machine
        return None


@dataclass(frozen=True)
class PrecinctRecord:
    precinct_id: str
    registered: int
    machines: int | None = None


@dataclass(frozen=True)
class PrecinctPlan:
    precinct_id: str
    registered: int
    statutory_machines: int
    queue_stop_machines: int
    shortfall: int
    machines_used: int
    actual_voters_per_machine: float
    queueing_product: float
    half_day_minutes: float
    meets_queue_stop: bool


@dataclass(frozen=True)
class RecordError:
    index: int
    message: str


@dataclass(frozen=True)
class RosterReport:
    plans: tuple[PrecinctPlan, ...]
    errors: tuple[RecordError, ...]
    total_registered: int
    total_statutory: int
    total_queue_stop: int
    total_shortfall: int


def plan_precinct(
    record: PrecinctRecord,
    turnout: float = DEFAULT_TURNOUT,
    day_minutes: float = DEFAULT_DAY_MINUTES,
    vote_minutes: float = DEFAULT_VOTE_MINUTES,
    statutory_quota: int = DEFAULT_STATUTORY_QUOTA,
) -> PrecinctPlan:
    """Both allocations for one precinct, plus its queueing product.

    The product is evaluated at ``record.machines`` when given, otherwise at
    the statutory allocation, so the report shows how the as-deployed (or
    legally mandated) fleet compares with the queue-stop bound.
    """
    if record.registered < 0:
        raise ValidationError("registered must be nonnegative")
    if record.machines is not None and record.machines < 1:
        raise ValidationError("machines must be >= 1 when given")
    statutory = statutory_allocation(record.registered, statutory_quota)
    queue_stop = queue_stop_allocation(record.registered, turnout, day_minutes, vote_minutes)
    shortfall = max(0, queue_stop - statutory)
    machines_used = record.machines if record.machines is not None else statutory
    if machines_used > 0:
        per_machine = record.registered * turnout / machines_used
    else:
        per_machine = 0.0
    product = per_machine * vote_minutes
    half_day = day_minutes / 2.0
    return PrecinctPlan(
        precinct_id=record.precinct_id,
        registered=record.registered,
        statutory_machines=statutory,
        queue_stop_machines=queue_stop,
        shortfall=shortfall,
        machines_used=machines_used,
        actual_voters_per_machine=per_machine,
        queueing_product=product,
        half_day_minutes=half_day,
        meets_queue_stop=product <= half_day + 1e-9,
    )


def roster_report(
    records,
    turnout: float = DEFAULT_TURNOUT,
    day_minutes: float = DEFAULT_DAY_MINUTES,
    vote_minutes: float = DEFAULT_VOTE_MINUTES,
    statutory_quota: int = DEFAULT_STATUTORY_QUOTA,
) -> RosterReport:
    """Apply both allocation rules across a roster.

    A malformed record becomes an error entry and processing continues; the
    totals cover only the records that produced plans.
    """
    plans: list[PrecinctPlan] = []
    errors: list[RecordError] = []
    for index, record in enumerate(records):
        try:
            plans.append(
                plan_precinct(record, turnout, day_minutes, vote_minutes, statutory_quota)
            )
        except ValidationError as exc:
            errors.append(RecordError(index, str(exc)))
    return RosterReport(
        plans=tuple(plans),
        errors=tuple(errors),
        total_registered=sum(p.registered for p in plans),
        total_statutory=sum(p.statutory_machines for p in plans),
        total_queue_stop=sum(p.queue_stop_machines for p in plans),
        total_shortfall=sum(p.shortfall for p in plans),
    )
