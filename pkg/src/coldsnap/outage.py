"""Per-building power-availability schedules for the four outage scenarios.

Scenarios: `base` (full service), `co` (controlled outage: selected circuits
switched off for the whole window), `ro-di` / `ro-hi` (rolling outages over
consumption-ranked residential groups, with damaged or hardened feeder
infrastructure). Fault damage isolates a seeded fraction of customers for
the entire window unless the infrastructure is hardened.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum

import numpy as np

from .errors import ConfigurationError
from .population import Population, Sector


class Scenario(str, Enum):
    BASE = "base"
    CO = "co"
    RO_DI = "ro-di"
    RO_HI = "ro-hi"


@dataclass(frozen=True)
class AvailabilitySeries:
    """Fraction of supply available per scheduling slot (default 1 h slots)."""

    fractions: tuple[float, ...]
    slot_s: float = 3600.0

    def __post_init__(self):
        if self.slot_s <= 0:
            raise ConfigurationError("slot length must be positive")
        if any(not 0.0 <= f <= 1.0 for f in self.fractions):
            raise ConfigurationError("availability fractions must lie in [0, 1]")

    @classmethod
    def constant(cls, fraction: float, n_slots: int, slot_s: float = 3600.0):
        return cls(fractions=tuple([float(fraction)] * n_slots), slot_s=slot_s)


@dataclass(frozen=True)
class PowerScheduleSet:
    scenario: Scenario
    window_start: datetime
    window_end: datetime
    dt_s: float
    schedules: dict[int, np.ndarray] = field(repr=False)
    isolated_ids: frozenset[int] = frozenset()

    def __post_init__(self):
        for arr in self.schedules.values():
            arr.flags.writeable = False

    @property
    def n_steps(self) -> int:
        return next(iter(self.schedules.values())).shape[0] if self.schedules else 0

    def unpowered_hours(self, building_id: int) -> float:
        sched = self.schedules[building_id]
        return float((~sched).sum()) * self.dt_s / 3600.0


def _window_steps(start: datetime, end: datetime, dt_s: float) -> int:
    span = (end - start).total_seconds()
    if dt_s <= 0:
        raise ConfigurationError("dt must be positive")
    steps = span / dt_s
    if steps < 1:
        raise ConfigurationError("window must contain at least 1 step")
    if abs(steps - round(steps)) > 1e-9:
        raise ConfigurationError("window length must be a multiple of dt")
    return int(round(steps))


def build_base_schedule(pop: Population, start: datetime, end: datetime,
                        dt_s: float) -> PowerScheduleSet:
    """Normal operation: every building powered for the whole window."""
    n = _window_steps(start, end, dt_s)
    schedules = {b.id: np.ones(n, dtype=bool) for b in pop.buildings}
    return PowerScheduleSet(Scenario.BASE, start, end, dt_s, schedules, frozenset())


def select_isolated(pop: Population, fault_fraction: float, seed: int) -> frozenset[int]:
    """Seeded uniform choice of customers stranded behind damaged equipment."""
    if not 0.0 <= fault_fraction < 1.0:
        raise ConfigurationError(f"fault fraction must be in [0, 1), got {fault_fraction}")
    n_pick = int(round(fault_fraction * len(pop.buildings)))
    if n_pick == 0:
        return frozenset()
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0x150)))
    ids = np.array(sorted(pop.ids))
    picked = rng.choice(ids, size=n_pick, replace=False)
    return frozenset(int(i) for i in picked)


def build_controlled_outage(pop: Population, start: datetime, end: datetime, dt_s: float,
                            shed_ids, fault_fraction: float, seed: int) -> PowerScheduleSet:
    """Switch off the shed set (plus fault-isolated customers) for the window."""
    known = set(pop.ids)
    shed = set(int(i) for i in shed_ids)
    unknown = shed - known
    if unknown:
        raise ConfigurationError(f"shed set contains unknown building ids: {sorted(unknown)[:5]}")
    isolated = select_isolated(pop, fault_fraction, seed)
    dark = shed | isolated
    n = _window_steps(start, end, dt_s)
    schedules = {
        b.id: np.zeros(n, dtype=bool) if b.id in dark else np.ones(n, dtype=bool)
        for b in pop.buildings
    }
    return PowerScheduleSet(Scenario.CO, start, end, dt_s, schedules, isolated)


def assign_rolling_groups(pop: Population, n_groups: int) -> dict[int, int]:
    """Partition residential buildings into consumption tiers of near-equal size.

    Tier 0 holds the heaviest consumers; ties break on ascending id so the
    grouping is reproducible.
    """
    if n_groups < 2:
        raise ConfigurationError(f"need at least 2 rolling groups, got {n_groups}")
    residential = sorted(pop.residential(), key=lambda b: (-b.avg_annual_kwh, b.id))
    groups: dict[int, int] = {}
    size = len(residential) / n_groups
    for rank, b in enumerate(residential):
        groups[b.id] = min(int(rank / size) if size else 0, n_groups - 1)
    return groups


def build_rolling_outage(pop: Population, start: datetime, end: datetime, dt_s: float,
                         n_groups: int, availability: AvailabilitySeries,
                         hardened: bool, fault_fraction: float, seed: int) -> PowerScheduleSet:
    """Rotate service across residential consumption tiers slot by slot.

    Per slot, k = floor(availability * n_groups) tiers are served, the served
    window rotating round-robin so curtailment falls evenly. Commercial and
    industrial customers stay powered. Without hardening, fault-isolated
    customers get no service at all.
    """
    n = _window_steps(start, end, dt_s)
    slot_s = availability.slot_s
    per_slot = slot_s / dt_s
    if abs(per_slot - round(per_slot)) > 1e-9 or per_slot < 1:
        raise ConfigurationError("slot length must be a positive multiple of dt")
    per_slot = int(round(per_slot))
    n_slots = -(-n // per_slot)  # ceil
    if len(availability.fractions) < n_slots:
        raise ConfigurationError(
            f"availability has {len(availability.fractions)} slots, window needs {n_slots}"
        )

    groups = assign_rolling_groups(pop, n_groups)
    isolated = frozenset() if hardened else select_isolated(pop, fault_fraction, seed)

    # Per-slot powered tiers: the k-wide served window starts at slot index
    # mod n_groups and wraps.
    group_on = np.zeros((n_slots, n_groups), dtype=bool)
    for s in range(n_slots):
        k = int(np.floor(availability.fractions[s] * n_groups))
        k = min(k, n_groups)
        for j in range(k):
            group_on[s, (s + j) % n_groups] = True

    step_slot = np.minimum(np.arange(n) // per_slot, n_slots - 1)
    schedules: dict[int, np.ndarray] = {}
    for b in pop.buildings:
        if b.id in isolated:
            schedules[b.id] = np.zeros(n, dtype=bool)
        elif b.sector is not Sector.RESIDENTIAL:
            schedules[b.id] = np.ones(n, dtype=bool)
        else:
            schedules[b.id] = group_on[step_slot, groups[b.id]].copy()
    scenario = Scenario.RO_HI if hardened else Scenario.RO_DI
    return PowerScheduleSet(scenario, start, end, dt_s, schedules, isolated)


def max_contiguous_off(powered, dt_s: float) -> float:
    """Longest unpowered run in a boolean schedule, in hours."""
    arr = np.asarray(powered, dtype=bool)
    longest = 0
    run = 0
    for value in arr:
        if value:
            run = 0
        else:
            run += 1
            longest = max(longest, run)
    return longest * dt_s / 3600.0


def write_schedules_csv(schedule_set: PowerScheduleSet, path) -> None:
    """Export as `building_id,slot_start,powered` rows, one per step."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["building_id", "slot_start", "powered"])
        for bid in sorted(schedule_set.schedules):
            sched = schedule_set.schedules[bid]
            for i in range(len(sched)):
                stamp = schedule_set.window_start + timedelta(seconds=schedule_set.dt_s * i)
                writer.writerow([bid, stamp.isoformat(), "true" if sched[i] else "false"])
