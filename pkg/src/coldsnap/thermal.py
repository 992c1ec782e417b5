"""Single-zone indoor temperature simulation with thermostat control.

The envelope is a lumped conductance/capacitance pair (UA, C). Over one
step with piecewise-constant inputs the balance

    C dT/dt = UA (t_out - T) + Q

has the closed-form solution used here, so the integrator is exact for any
step size: no discretization drift, unconditionally stable. The thermostat
is a hysteresis relay gated by power availability.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta

import numpy as np

from . import defaults
from .errors import ConfigurationError
from .population import Building
from .weather import WeatherSeries


@dataclass(frozen=True)
class ExposureTrace:
    """Per-building simulation record over the event window."""

    building_id: int
    start: datetime
    dt_s: float
    t_in_c: np.ndarray = field(repr=False)
    powered: np.ndarray = field(repr=False)
    hvac_kw: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = len(self.t_in_c)
        if len(self.powered) != n or len(self.hvac_kw) != n:
            raise ConfigurationError("trace arrays must be equally long")
        if not np.all(np.isfinite(self.t_in_c)):
            raise ConfigurationError("trace contains non-finite temperatures")
        for name in ("t_in_c", "powered", "hvac_kw"):
            arr = getattr(self, name)
            arr.flags.writeable = False

    @property
    def n_steps(self) -> int:
        return len(self.t_in_c)


def step_indoor_temp(t_in: float, building: Building, t_out_c: float,
                     hvac_heat_w: float, internal_gain_w: float, dt_s: float) -> float:
    """Advance the indoor temperature one step with constant inputs.

    Exact exponential relaxation toward the equilibrium t_out + Q/UA.
    """
    if dt_s <= 0:
        raise ConfigurationError(f"dt must be positive, got {dt_s}")
    q_w = hvac_heat_w + internal_gain_w
    t_eq = t_out_c + q_w / building.ua_w_per_k
    decay = math.exp(-building.ua_w_per_k * dt_s / building.thermal_mass_j_per_k)
    return t_eq + (t_in - t_eq) * decay


def hvac_thermostat(t_in: float, setpoint_c: float, deadband_c: float,
                    powered: bool, was_on: bool, rated_electric_kw: float) -> tuple[bool, float]:
    """Hysteresis heating control: on below the band, off above it, else hold.

    Power loss forces the unit off regardless of temperature.
    """
    if deadband_c <= 0:
        raise ConfigurationError(f"deadband must be positive, got {deadband_c}")
    if not powered:
        return False, 0.0
    if t_in < setpoint_c - deadband_c / 2.0:
        on = True
    elif t_in > setpoint_c + deadband_c / 2.0:
        on = False
    else:
        on = was_on
    return on, rated_electric_kw if on else 0.0


def simulate_building(building: Building, weather: WeatherSeries,
                      powered, internal_gain_w: float | None = None) -> ExposureTrace:
    """Simulate one building over a weather window under a power schedule.

    `powered` is a boolean array aligned with the weather samples. The
    initial indoor temperature is the thermostat setpoint (business-as-usual
    start). Internal gains default to the package constant for occupied
    buildings and zero otherwise.
    """
    powered = np.asarray(powered, dtype=bool)
    if len(powered) != weather.n_steps:
        raise ConfigurationError(
            f"schedule has {len(powered)} steps, weather has {weather.n_steps}"
        )
    if internal_gain_w is None:
        internal_gain_w = defaults.INTERNAL_GAIN_W if building.n_occupants > 0 else 0.0

    ua = building.ua_w_per_k
    cap = building.thermal_mass_j_per_k
    decay = math.exp(-ua * weather.dt_s / cap)
    rated_kw = building.hvac_electric_kw
    lo = building.setpoint_c - building.deadband_c / 2.0
    hi = building.setpoint_c + building.deadband_c / 2.0

    # Equilibrium temperature per step for heating-on and heating-off, so the
    # relay loop below stays scalar-cheap. Matches hvac_thermostat exactly.
    t_eq_off = (weather.t_out_c + internal_gain_w / ua).tolist()
    t_eq_on = (weather.t_out_c + (building.hvac_heat_w + internal_gain_w) / ua).tolist()
    powered_list = powered.tolist()

    n = weather.n_steps
    t_in = np.empty(n)
    hvac_kw = np.empty(n)
    temp = building.setpoint_c
    on = False
    for i in range(n):
        if not powered_list[i]:
            on = False
        elif temp < lo:
            on = True
        elif temp > hi:
            on = False
        t_in[i] = temp
        hvac_kw[i] = rated_kw if on else 0.0
        t_eq = t_eq_on[i] if on else t_eq_off[i]
        temp = t_eq + (temp - t_eq) * decay
    return ExposureTrace(
        building_id=building.id,
        start=weather.start,
        dt_s=weather.dt_s,
        t_in_c=t_in,
        powered=powered.copy(),
        hvac_kw=hvac_kw,
    )


def free_float_closed_form(building: Building, t_start_c: float, t_out_c: float,
                           internal_gain_w: float, times_s) -> np.ndarray:
    """Analytic unpowered trajectory for constant outdoor temperature."""
    times = np.asarray(times_s, dtype=float)
    t_eq = t_out_c + internal_gain_w / building.ua_w_per_k
    tau = building.thermal_mass_j_per_k / building.ua_w_per_k
    return t_eq + (t_start_c - t_eq) * np.exp(-times / tau)


def write_traces_csv(traces, path) -> None:
    """Export traces as `building_id,timestamp,t_in_c,powered,hvac_kw` rows."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["building_id", "timestamp", "t_in_c", "powered", "hvac_kw"])
        for trace in traces:
            for i in range(trace.n_steps):
                stamp = trace.start + timedelta(seconds=trace.dt_s * i)
                writer.writerow([
                    trace.building_id,
                    stamp.isoformat(),
                    f"{trace.t_in_c[i]:.4f}",
                    "true" if trace.powered[i] else "false",
                    f"{trace.hvac_kw[i]:.3f}",
                ])
