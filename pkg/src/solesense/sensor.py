"""Digital twin of one piezoresistive pressure sensor.

The model has three layers:

1. a static calibration curve fitted to measured (pressure, resistance)
   points -- piecewise-linear in (pressure, ln resistance), which guarantees
   positive, monotone non-increasing resistance over the calibrated range;
2. rate-independent hysteresis, realized as a symmetric play (backlash)
   operator acting on pressure with a fixed half-width;
3. first-order load/recovery dynamics acting on ln(resistance), with separate
   time constants for loading (resistance falling) and recovery (rising).

The dynamics run in log-resistance space because the device spans four
decades of ohms; a linear-space lag would make the relative settling error
after one second larger than the replication tolerance of the bench
comparison data, and log space is the natural companion of the log-linear
static curve.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import datasets
from .units import Pressure, Resistance

# Net transition times of the device, read as 10-90% times of a first-order
# system, which fixes tau = t / ln 9.
RESPONSE_TIME_S = 0.120
RECOVERY_TIME_S = 0.100
_LN9 = math.log(9.0)

# Half-width of the pressure play operator: 3% of the datasheet pressure
# span, so a full loading/unloading loop is 6% of full scale wide.
DEFAULT_HYSTERESIS_HALFWIDTH_PA = 0.03 * (datasets.DATASHEET_MAX_PA - datasets.DATASHEET_ONSET_PA)

# Nominal sensitivity printed on the sensor's datasheet. It does not follow
# from the calibrated end points (which give ~3.67 Pa/ohm); characterize()
# reports the computed figures and flags the mismatch.
NOMINAL_SENSITIVITY_PA_PER_OHM = 0.02


class CalibrationError(ValueError):
    """Raised when calibration data cannot produce a valid profile."""


@dataclass(frozen=True, order=True)
class CalibrationPoint:
    pressure_pa: float
    resistance_ohm: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.pressure_pa) and self.pressure_pa > 0):
            raise ValueError(f"calibration pressure must be > 0, got {self.pressure_pa!r}")
        if not (math.isfinite(self.resistance_ohm) and self.resistance_ohm > 0):
            raise ValueError(f"calibration resistance must be finite positive, got {self.resistance_ohm!r}")


@dataclass(frozen=True)
class CalibrationProfile:
    """Fitted monotone pressure -> resistance map for one sensor.

    ``points`` are strictly increasing in pressure with non-increasing
    resistance (duplicates already averaged). Below ``onset_pressure`` the
    sensor reads as an open circuit; beyond the last point the curve clamps.
    ``fit_r2`` is 1.0 for pure interpolation.
    """

    name: str
    points: tuple[CalibrationPoint, ...]
    onset_pressure: Pressure
    fit_r2: float = 1.0
    _pressures: np.ndarray = field(init=False, repr=False, compare=False)
    _log_resistances: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_pressures", np.array([p.pressure_pa for p in self.points]))
        object.__setattr__(
            self, "_log_resistances", np.log([p.resistance_ohm for p in self.points])
        )

    @property
    def min_pressure_pa(self) -> float:
        return self.points[0].pressure_pa

    @property
    def max_pressure_pa(self) -> float:
        return self.points[-1].pressure_pa

    @property
    def idle_resistance_ohm(self) -> float:
        """Largest finite resistance the curve can produce."""
        return self.points[0].resistance_ohm


def fit_profile(
    name: str, points: list[CalibrationPoint], onset_pressure: Pressure
) -> CalibrationProfile:
    """Fit a profile to measured points.

    Sorts by pressure, averages the resistances of duplicate pressures, and
    interpolates ln(resistance) piecewise-linearly in pressure. Data whose
    averaged resistance increases anywhere with pressure is rejected: the
    device is negative-piezoresistive by construction.
    """
    by_pressure: dict[float, list[float]] = {}
    for point in points:
        by_pressure.setdefault(point.pressure_pa, []).append(point.resistance_ohm)
    if len(by_pressure) < 2:
        raise CalibrationError(f"need >= 2 distinct calibration pressures, got {len(by_pressure)}")

    merged = [
        CalibrationPoint(p, sum(rs) / len(rs)) for p, rs in sorted(by_pressure.items())
    ]
    for a, b in zip(merged, merged[1:]):
        if b.resistance_ohm > a.resistance_ohm:
            raise CalibrationError(
                "resistance must not increase with pressure: "
                f"{a.resistance_ohm} ohm @ {a.pressure_pa} Pa -> "
                f"{b.resistance_ohm} ohm @ {b.pressure_pa} Pa"
            )
    return CalibrationProfile(name=name, points=tuple(merged), onset_pressure=onset_pressure)


def static_resistance(profile: CalibrationProfile, pressure: Pressure) -> Resistance:
    """Steady-state resistance at a given pressure.

    Below the onset pressure the sensor is an open circuit; outside the
    calibrated pressure range the curve clamps to its end values.
    """
    p = pressure.pascals
    if p < profile.onset_pressure.pascals:
        return Resistance.open_circuit()
    log_r = float(np.interp(p, profile._pressures, profile._log_resistances))
    return Resistance(math.exp(log_r))


def invert_static(profile: CalibrationProfile, resistance: Resistance) -> Pressure:
    """Pressure producing a given steady-state resistance, by bisection.

    Resistances at or above the idle value map to the first calibrated
    pressure, at or below the final value to the last; the strictly monotone
    interior is bisected on the fitted curve.
    """
    if resistance.is_open or resistance.ohms >= profile.idle_resistance_ohm:
        return Pressure(profile.min_pressure_pa)
    if resistance.ohms <= profile.points[-1].resistance_ohm:
        return Pressure(profile.max_pressure_pa)
    target = resistance.ohms
    lo, hi = profile.min_pressure_pa, profile.max_pressure_pa
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if static_resistance(profile, Pressure(mid)).ohms > target:
            lo = mid
        else:
            hi = mid
    return Pressure(0.5 * (lo + hi))


@dataclass(frozen=True)
class DynamicsConfig:
    """Time constants and hysteresis width of the dynamic sensor model."""

    tau_load: float = RESPONSE_TIME_S / _LN9
    tau_recover: float = RECOVERY_TIME_S / _LN9
    hysteresis_halfwidth: float = DEFAULT_HYSTERESIS_HALFWIDTH_PA
    sample_period: float = 0.001

    def __post_init__(self) -> None:
        for name in ("tau_load", "tau_recover", "hysteresis_halfwidth", "sample_period"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")

    @classmethod
    def for_profile(cls, profile: CalibrationProfile, **overrides) -> "DynamicsConfig":
        """Defaults with the play half-width scaled to the profile's sweepable
        span (the flat clamp below the first point carries no hysteresis)."""
        low = max(profile.onset_pressure.pascals, profile.min_pressure_pa)
        span = profile.max_pressure_pa - low
        if span <= 0:
            span = profile.max_pressure_pa - profile.min_pressure_pa
        return cls(hysteresis_halfwidth=0.03 * span, **overrides)


@dataclass(frozen=True)
class SensorState:
    """Dynamic state of one simulated sensor, updated functionally by step()."""

    effective_pressure: Pressure
    lagged_resistance: Resistance
    last_timestamp: float

    @classmethod
    def at_rest(cls, timestamp: float = 0.0) -> "SensorState":
        return cls(Pressure(0.0), Resistance.open_circuit(), timestamp)

    @classmethod
    def settled(
        cls, pressure: Pressure, profile: CalibrationProfile, timestamp: float = 0.0
    ) -> "SensorState":
        return cls(pressure, static_resistance(profile, pressure), timestamp)


def play_update(effective_pa: float, applied_pa: float, halfwidth_pa: float) -> float:
    """Symmetric play (backlash) operator: the state follows the input only
    once the input leaves the +/- halfwidth dead band around it."""
    return min(max(effective_pa, applied_pa - halfwidth_pa), applied_pa + halfwidth_pa)


def step(
    state: SensorState,
    applied_pressure: Pressure,
    timestamp: float,
    profile: CalibrationProfile,
    dynamics: DynamicsConfig,
) -> tuple[SensorState, Resistance]:
    """Advance the sensor one sample: play operator, static curve, then lag.

    Open-circuit targets snap immediately (full release below onset), and the
    first transition out of an open state likewise adopts the static value
    with no lag: a first-order approach from infinite ohms is undefined.
    """
    if timestamp < state.last_timestamp:
        raise ValueError(
            f"time went backwards: {timestamp} < {state.last_timestamp}"
        )
    effective = play_update(
        state.effective_pressure.pascals, applied_pressure.pascals, dynamics.hysteresis_halfwidth
    )
    target = static_resistance(profile, Pressure(effective))

    if target.is_open or state.lagged_resistance.is_open:
        lagged = target
    else:
        tau = dynamics.tau_load if target.ohms < state.lagged_resistance.ohms else dynamics.tau_recover
        decay = math.exp(-(timestamp - state.last_timestamp) / tau)
        log_r = math.log(target.ohms) + (math.log(state.lagged_resistance.ohms) - math.log(target.ohms)) * decay
        lagged = Resistance(math.exp(log_r))

    new_state = SensorState(Pressure(effective), lagged, timestamp)
    return new_state, lagged


@dataclass(frozen=True)
class SensorCharacterization:
    """Figures of merit measured from the fitted model, datasheet-style."""

    pressure_min_pa: float
    pressure_max_pa: float
    resistance_at_min_ohm: float
    resistance_at_max_ohm: float
    sensitivity_ohm_per_pa: float
    sensitivity_pa_per_ohm: float
    response_time_s: float
    recovery_time_s: float
    hysteresis_fraction: float
    threshold_band_fraction: float = 0.10
    nominal_sensitivity_pa_per_ohm: float = NOMINAL_SENSITIVITY_PA_PER_OHM

    @property
    def matches_nominal_sensitivity(self) -> bool:
        """Whether the computed Pa/ohm figure agrees with the nominal one.

        It does not for the shipped calibration data; the computed value is
        the one to trust.
        """
        nominal = self.nominal_sensitivity_pa_per_ohm
        return math.isfinite(self.sensitivity_pa_per_ohm) and (
            abs(self.sensitivity_pa_per_ohm - nominal) <= 0.5 * nominal
        )


def _log_crossing_time(times: np.ndarray, log_r: np.ndarray, threshold: float, rising: bool) -> float:
    """First time ln(R) crosses a threshold, linearly interpolated."""
    crossed = log_r >= threshold if rising else log_r <= threshold
    idx = int(np.argmax(crossed))
    if not crossed[idx]:
        raise ValueError("trajectory never crossed threshold")
    if idx == 0:
        return float(times[0])
    t0, t1 = times[idx - 1], times[idx]
    y0, y1 = log_r[idx - 1], log_r[idx]
    return float(t0 + (threshold - y0) / (y1 - y0) * (t1 - t0))


def _transition_time(
    profile: CalibrationProfile,
    dynamics: DynamicsConfig,
    start_pa: float,
    end_pa: float,
) -> float:
    """10-90% transition time of a simulated pressure step, in ln(R)."""
    state = SensorState.settled(Pressure(start_pa), profile, timestamp=0.0)
    log_start = math.log(state.lagged_resistance.ohms)
    dt = dynamics.sample_period
    horizon = 10.0 * max(dynamics.tau_load, dynamics.tau_recover)
    n = max(int(math.ceil(horizon / dt)), 8)

    times = np.empty(n)
    log_r = np.empty(n)
    applied = Pressure(end_pa)
    for k in range(n):
        state, resistance = step(state, applied, (k + 1) * dt, profile, dynamics)
        times[k] = (k + 1) * dt
        log_r[k] = math.log(resistance.ohms)

    log_end = log_r[-1]
    if abs(log_end - log_start) < 1e-12:
        return 0.0
    rising = log_end > log_start
    t10 = _log_crossing_time(times, log_r, log_start + 0.1 * (log_end - log_start), rising)
    t90 = _log_crossing_time(times, log_r, log_start + 0.9 * (log_end - log_start), rising)
    return t90 - t10


def _sweep_hysteresis_fraction(profile: CalibrationProfile, dynamics: DynamicsConfig) -> float:
    """Loop width of a triangular sweep as a fraction of the pressure span.

    Hysteresis is rate-independent, so the sweep runs at the quasi-static
    limit (time constants collapsed); any lag contribution is a separate,
    rate-dependent effect and not part of the loop width.
    """
    quasi_static = replace(dynamics, tau_load=1e-12, tau_recover=1e-12)
    p_lo = max(profile.onset_pressure.pascals, profile.min_pressure_pa)
    p_hi = profile.max_pressure_pa
    h = dynamics.hysteresis_halfwidth
    n = 2000

    up = np.linspace(p_lo, p_hi, n)
    down = np.linspace(p_hi, p_lo, n)
    state = SensorState.settled(Pressure(p_lo), profile, timestamp=0.0)
    eff_up = np.empty(n)
    eff_down = np.empty(n)
    t = 0.0
    for i, p in enumerate(up):
        t += quasi_static.sample_period
        state, _ = step(state, Pressure(p), t, profile, quasi_static)
        eff_up[i] = state.effective_pressure.pascals
    for i, p in enumerate(down):
        t += quasi_static.sample_period
        state, _ = step(state, Pressure(p), t, profile, quasi_static)
        eff_down[i] = state.effective_pressure.pascals

    # Same effective pressure <=> same resistance; compare branch pressures
    # at matched effective levels over the fully engaged interior.
    margin = 2.0 * (p_hi - p_lo) / n
    grid = np.linspace(p_lo + h + margin, p_hi - h - margin, 256)
    p_up_at = np.interp(grid, eff_up, up)
    p_down_at = np.interp(grid, eff_down[::-1], down[::-1])
    width = float(np.max(p_up_at - p_down_at))
    return width / (p_hi - p_lo)


def characterize(
    profile: CalibrationProfile, dynamics: DynamicsConfig | None = None
) -> SensorCharacterization:
    """Measure datasheet figures from the model itself.

    Sensitivity is reported in both conventions (ohm/Pa and Pa/ohm) over
    [onset, max]; response/recovery are 10-90% times of simulated steps;
    hysteresis is the loop width of a simulated triangular sweep.
    """
    if dynamics is None:
        dynamics = DynamicsConfig.for_profile(profile)
    p_min = profile.onset_pressure.pascals
    p_max = profile.max_pressure_pa
    r_min = static_resistance(profile, Pressure(p_min))
    if r_min.is_open:  # onset exactly at the open boundary
        r_min = Resistance(profile.idle_resistance_ohm)
    r_max = static_resistance(profile, Pressure(p_max))

    delta_p = p_max - p_min
    delta_r = r_min.ohms - r_max.ohms
    ohm_per_pa = delta_r / delta_p if delta_p > 0 else 0.0
    pa_per_ohm = delta_p / delta_r if delta_r > 0 else math.inf

    response = _transition_time(profile, dynamics, p_min, p_max)
    recovery = _transition_time(profile, dynamics, p_max, p_min)
    hysteresis = _sweep_hysteresis_fraction(profile, dynamics)

    return SensorCharacterization(
        pressure_min_pa=p_min,
        pressure_max_pa=p_max,
        resistance_at_min_ohm=r_min.ohms,
        resistance_at_max_ohm=r_max.ohms,
        sensitivity_ohm_per_pa=ohm_per_pa,
        sensitivity_pa_per_ohm=pa_per_ohm,
        response_time_s=response,
        recovery_time_s=recovery,
        hysteresis_fraction=hysteresis,
    )


# --- built-in profiles -----------------------------------------------------
#
# "measured" and "datasheet" describe the same physical device but are
# mutually inconsistent (the lab sweep starts near 3.3 Mohm at 429 kPa, the
# datasheet says 150 kohm at 200 kPa); both ship, unmerged, under separate
# names. "bench" and "fsr" reproduce the side-by-side comparison rig and use
# onset 0 so an unloaded stimulus reads the idle resistance the rig logged.


def measured_profile() -> CalibrationProfile:
    """Profile fitted to the lab calibration sweep of the fabricated sensor."""
    points = [CalibrationPoint(p, r) for p, r in datasets.MEASURED_CALIBRATION]
    return fit_profile("measured", points, Pressure(datasets.DATASHEET_ONSET_PA))


def datasheet_profile() -> CalibrationProfile:
    """Two-point profile spanning the datasheet resistance range."""
    points = [CalibrationPoint(p, r) for p, r in datasets.DATASHEET_RANGE]
    return fit_profile("datasheet", points, Pressure(datasets.DATASHEET_ONSET_PA))


def bench_profile() -> CalibrationProfile:
    """Fabricated sensor as measured on the comparison bench."""
    points = [CalibrationPoint(p, r) for p, r in datasets.COMPARISON_SENSOR_POINTS]
    return fit_profile("bench", points, Pressure(0.0))


def fsr_reference_profile() -> CalibrationProfile:
    """Commercial force-sensing resistor used as the comparison baseline."""
    points = [CalibrationPoint(p, r) for p, r in datasets.FSR_POINTS]
    return fit_profile("fsr", points, Pressure(0.0))


_BUILTIN_PROFILES = {
    "measured": measured_profile,
    "datasheet": datasheet_profile,
    "bench": bench_profile,
    "fsr": fsr_reference_profile,
}


def builtin_profile(name: str) -> CalibrationProfile:
    try:
        return _BUILTIN_PROFILES[name]()
    except KeyError:
        known = ", ".join(sorted(_BUILTIN_PROFILES))
        raise CalibrationError(f"unknown profile {name!r} (built-ins: {known})") from None


def builtin_profile_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTIN_PROFILES))


# --- calibration file format -----------------------------------------------

CALIBRATION_HEADER = ("pressure_pa", "resistance_ohm")


def read_calibration_csv(path) -> list[CalibrationPoint]:
    """Read `pressure_pa,resistance_ohm` rows; open circuit is not
    representable here (the profile's onset pressure covers it)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != list(CALIBRATION_HEADER):
            raise CalibrationError(
                f"{path}: expected header {','.join(CALIBRATION_HEADER)!r}, got {header!r}"
            )
        points = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                points.append(CalibrationPoint(float(row[0]), float(row[1])))
            except (IndexError, ValueError) as exc:
                raise CalibrationError(f"{path}:{lineno}: bad calibration row {row!r}: {exc}") from exc
    return points


def write_calibration_csv(path, points: list[CalibrationPoint]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(CALIBRATION_HEADER) + "\n")
        for point in points:
            fh.write(f"{point.pressure_pa!r},{point.resistance_ohm!r}\n")
