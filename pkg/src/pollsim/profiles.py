"""Time-of-day arrival profiles.

A profile is a piecewise-constant intensity over one voting day: during each
segment a fixed fraction of the day's expected voters arrives per hour. The
fractions integrate to one over the day, so a profile together with an
expected head count fully determines the arrival rate at every minute.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class ArrivalProfile:
    """Piecewise-constant hourly arrival fractions covering [0, day_minutes).

    ``segments`` is an ordered tuple of ``(start_minute, end_minute,
    hourly_fraction)`` triples that tile the day with no gaps or overlaps.
    """

    day_minutes: float
    segments: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if self.day_minutes <= 0:
            raise ValidationError("day_minutes must be positive")
        if not self.segments:
            raise ValidationError("profile needs at least one segment")
        cursor = 0.0
        total = 0.0
        for start, end, fraction in self.segments:
            if abs(start - cursor) > 1e-9:
                raise ValidationError(
                    f"segments must tile the day; gap or overlap at minute {start:g}"
                )
            if end <= start:
                raise ValidationError("segment end must exceed segment start")
            if fraction < 0:
                raise ValidationError("hourly fractions must be nonnegative")
            total += fraction * (end - start) / 60.0
            cursor = end
        if abs(cursor - self.day_minutes) > 1e-9:
            raise ValidationError(
                f"segments cover [0, {cursor:g}) but the day is {self.day_minutes:g} minutes"
            )
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(
                f"hourly fractions integrate to {total!r} over the day, expected 1"
            )

    @property
    def hours(self) -> float:
        return self.day_minutes / 60.0

    def hourly_fractions(self) -> list[float]:
        """Per-hour fractions, for profiles built from whole-hour segments."""
        fractions = []
        for start, end, fraction in self.segments:
            span = end - start
            if span % 60 != 0:
                raise ValidationError("profile has segments that are not whole hours")
            fractions.extend([fraction] * int(span // 60))
        return fractions


def build_profile(day_minutes: float, hourly_fractions) -> ArrivalProfile:
    """Build a profile from one arrival fraction per hour of the day.

    ``day_minutes`` must be a positive whole number of hours times 60 and
    ``hourly_fractions`` must have exactly one entry per hour, nonnegative,
    summing to 1 within ``NORMALIZATION_TOL``.
    """
    if day_minutes <= 0 or day_minutes % 60 != 0:
        raise ValidationError("day_minutes must be a positive whole number of hours x 60")
    hours = int(day_minutes // 60)
    fractions = [float(f) for f in hourly_fractions]
    if len(fractions) != hours:
        raise ValidationError(f"{len(fractions)} hourly fractions for {hours} hours")
    for fraction in fractions:
        if fraction < 0:
            raise ValidationError("hourly fractions must be nonnegative")
    total = sum(fractions)
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"hourly fractions sum to {total!r}, expected 1")
    segments = tuple(
        (60.0 * h, 60.0 * (h + 1), fractions[h]) for h in range(hours)
    )
    return ArrivalProfile(float(day_minutes), segments)


# 13-hour day (7 am - 8 pm). Rush hours carry 10% of the day's voters each,
# the remaining hours 5% each.
#
# "maryland": rushes 7-9 am, 12-2 pm, 5-8 pm (the default).
# "maryland-early-lunch": same, with the midday rush shifted to 11 am - 1 pm.
_MARYLAND = (.10, .10, .05, .05, .05, .10, .10, .05, .05, .05, .10, .10, .10)
_MARYLAND_EARLY_LUNCH = (.10, .10, .05, .05, .10, .10, .05, .05, .05, .05, .10, .10, .10)
_UNIFORM_13H = (1.0 / 13,) * 13

_NAMED = {
    "maryland": _MARYLAND,
    "maryland-early-lunch": _MARYLAND_EARLY_LUNCH,
    "uniform-13h": _UNIFORM_13H,
}

DEFAULT_PROFILE_NAME = "maryland"


def profile_names() -> list[str]:
    return sorted(_NAMED)


def named_profile(name: str) -> ArrivalProfile:
    """Look up one of the built-in 13-hour profiles by name."""
    try:
        fractions = _NAMED[name]
    except KeyError:
        raise ValidationError(
            f"unknown profile {name!r}; available: {', '.join(profile_names())}"
        ) from None
    return build_profile(780.0, fractions)
