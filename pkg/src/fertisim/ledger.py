"""Water accounting: pump commands to liters, daily totals, and the savings figure."""

from __future__ import annotations

from dataclasses import dataclass, field

from .control import Action, PumpCommand
from .growth import MINUTES_PER_DAY


class TimeOrderError(ValueError):
    """Commands were fed to the ledger out of time order."""


@dataclass(frozen=True)
class PumpModel:
    """Flow rate of the whole population manifold."""

    flow_l_per_min: float

    def __post_init__(self):
        if self.flow_l_per_min <= 0.0:
            raise ValueError("flow_l_per_min must be > 0")


def calibrate_flow(target_l_per_day: float, activations_per_day: int,
                   on_minutes: float = 3.0) -> PumpModel:
    """Flow rate that makes ``activations_per_day`` activations consume ``target_l_per_day``."""
    if target_l_per_day <= 0.0:
        raise ValueError("target_l_per_day must be > 0")
    if activations_per_day <= 0:
        raise ValueError("activations_per_day must be > 0")
    return PumpModel(flow_l_per_min=target_l_per_day / (activations_per_day * on_minutes))


@dataclass
class DailyUsage:
    day: int
    regime: str
    liters: float = 0.0
    activations: int = 0
    complete: bool = False


@dataclass
class WaterLedger:
    """Per-day irrigation volume accumulator.

    Days must be registered (with their regime) before commands arrive, so
    zero-activation days still count toward the regime mean. A day only
    enters a mean once marked complete; a partial final day is excluded.
    """

    days: dict[int, DailyUsage] = field(default_factory=dict)
    events: list[tuple[float, float]] = field(default_factory=list)  # (time, liters)
    _last_time: float | None = field(default=None, repr=False)

    def register_day(self, day: int, regime: str) -> None:
        if day not in self.days:
            self.days[day] = DailyUsage(day=day, regime=regime)

    def accrue(self, command: PumpCommand, now_min: float, pump: PumpModel,
               regime: str = "timer") -> None:
        if self._last_time is not None and now_min < self._last_time:
            raise TimeOrderError(f"command at minute {now_min} precedes minute {self._last_time}")
        self._last_time = now_min
        day = int(now_min // MINUTES_PER_DAY)
        self.register_day(day, regime)
        if command.action is Action.ON:
            liters = command.duration_min * pump.flow_l_per_min
            row = self.days[day]
            row.liters += liters
            row.activations += 1
            self.events.append((now_min, liters))

    def mark_complete_through(self, end_min: float) -> None:
        """Mark every registered day that ends at or before ``end_min`` complete."""
        for day, row in self.days.items():
            if (day + 1) * MINUTES_PER_DAY <= end_min:
                row.complete = True

    def total_liters(self) -> float:
        return sum(row.liters for row in self.days.values())

    def mean_liters_per_day(self, regime: str) -> float:
        rows = [r for r in self.days.values() if r.regime == regime and r.complete]
        if not rows:
            raise ValueError(f"no complete days for regime {regime!r}")
        return sum(r.liters for r in rows) / len(rows)

    def rows(self) -> list[DailyUsage]:
        return [self.days[d] for d in sorted(self.days)]


def savings(timer_mean_l_per_day: float, auto_mean_l_per_day: float) -> float:
    """Fraction of water saved by the wilt-triggered regime against the timer baseline."""
    if timer_mean_l_per_day <= 0.0:
        raise ValueError("timer mean must be > 0")
    return (timer_mean_l_per_day - auto_mean_l_per_day) / timer_mean_l_per_day
