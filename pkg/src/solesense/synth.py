"""Synthetic five-channel plantar pressure over parameterized gait cycles.

This is a test-signal generator, not a validated biomechanical model: it
reproduces the qualitative regional loading pattern of a normal gait cycle
(heel strike, roll over the midfoot, forefoot push-off, swing) with smooth
raised-cosine lobes so downstream sensor dynamics see a C1 signal.

One cycle is one stride of one foot (two steps), so at a cadence of
``c`` steps per minute the cycle lasts ``120 / c`` seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .units import (
    CHANNEL_ORDER,
    DEFAULT_GEOMETRY,
    GRAVITY_M_S2,
    GaitPhase,
    Pressure,
    PressureSample,
    SensorGeometry,
    SoleChannel,
)

# Stance sub-phase boundaries as fractions of the cycle at the default 60%
# stance; standard clinical splits. They stretch with stance_fraction.
_BASE_BOUNDS = (0.0, 0.02, 0.12, 0.31, 0.50)
_BASE_STANCE = 0.6

# Envelope geometry at the default 60% stance, also stretched with stance:
# heel peaks mid loading-response and is gone by terminal stance; the midfoot
# hump is centered in mid stance; the forefoot rises through terminal stance
# and peaks in pre-swing, reaching zero exactly at swing onset.
_HEEL_PEAK = 0.07
_HEEL_END = 0.31
_MID_START = 0.08
_MID_END = 0.53
_FORE_START = 0.31
_FORE_PEAK = 0.55

# Fraction of body weight one sensor face sees at the load peaks. Keeps the
# synthetic peaks inside the sensor's 750 kPa range for masses up to ~95 kg.
DEFAULT_LOAD_SCALE = 0.18

# Regional weight shares at the two vertical-load peaks (heel strike and
# push-off) of a double-hump gait load curve; the midfoot total is split
# evenly across its three channels.
HEEL_SHARE = 1.0
FOREFOOT_SHARE = 1.1
MIDFOOT_SHARE = 0.35


@dataclass(frozen=True)
class GaitParams:
    body_mass_kg: float
    cadence_spm: float = 120.0
    stance_fraction: float = 0.6
    sample_rate_hz: float = 100.0
    cycles: int = 10
    noise_sigma_pa: float = 0.0
    seed: int = 0
    load_scale: float = DEFAULT_LOAD_SCALE
    geometry: SensorGeometry = DEFAULT_GEOMETRY

    def __post_init__(self) -> None:
        if not (math.isfinite(self.body_mass_kg) and self.body_mass_kg >= 0):
            raise ValueError(f"body mass must be >= 0, got {self.body_mass_kg!r}")
        if not 0.0 < self.stance_fraction < 1.0:
            raise ValueError(f"stance_fraction must be in (0, 1), got {self.stance_fraction!r}")
        if self.cadence_spm <= 0:
            raise ValueError(f"cadence must be > 0, got {self.cadence_spm!r}")
        if self.sample_rate_hz < 20.0:
            raise ValueError(f"sample rate must be >= 20 Hz, got {self.sample_rate_hz!r}")
        if self.cycles < 0:
            raise ValueError(f"cycles must be >= 0, got {self.cycles!r}")
        if self.noise_sigma_pa < 0:
            raise ValueError(f"noise sigma must be >= 0, got {self.noise_sigma_pa!r}")

    @property
    def cycle_duration_s(self) -> float:
        return 120.0 / self.cadence_spm

    @property
    def base_pressure_pa(self) -> float:
        """Body weight over one sensor face, scaled by the per-sensor share."""
        return self.body_mass_kg * GRAVITY_M_S2 / self.geometry.area_m2 * self.load_scale

    @property
    def sample_count(self) -> int:
        return round(self.cycles * self.cycle_duration_s * self.sample_rate_hz)


@dataclass(frozen=True)
class PhaseInterval:
    phase: GaitPhase
    start_fraction: float
    end_fraction: float


@dataclass(frozen=True)
class PhaseTimeline:
    """Contiguous phase intervals covering [0, 1) of the cycle."""

    intervals: tuple[PhaseInterval, ...]

    def phase_at(self, cycle_fraction: float) -> GaitPhase:
        for interval in self.intervals:
            if interval.start_fraction <= cycle_fraction < interval.end_fraction:
                return interval.phase
        return GaitPhase.SWING


def default_timeline(stance_fraction: float = 0.6) -> PhaseTimeline:
    """Phase boundaries with the stance sub-phases stretched to the given
    stance fraction; swing always spans [stance_fraction, 1)."""
    if not 0.0 < stance_fraction < 1.0:
        raise ValueError(f"stance_fraction must be in (0, 1), got {stance_fraction!r}")
    scale = stance_fraction / _BASE_STANCE
    bounds = [b * scale for b in _BASE_BOUNDS] + [stance_fraction, 1.0]
    phases = list(GaitPhase)
    return PhaseTimeline(
        tuple(
            PhaseInterval(phase, start, end)
            for phase, start, end in zip(phases, bounds, bounds[1:])
        )
    )


def _half_cos_rise(u: float, a: float, b: float) -> float:
    return 0.5 * (1.0 - math.cos(math.pi * (u - a) / (b - a)))


def _half_cos_fall(u: float, a: float, b: float) -> float:
    return 0.5 * (1.0 + math.cos(math.pi * (u - a) / (b - a)))


def _raised_cos(u: float, a: float, b: float) -> float:
    return 0.5 * (1.0 - math.cos(2.0 * math.pi * (u - a) / (b - a)))


def channel_shares(cycle_fraction: float, stance_fraction: float = 0.6) -> dict[SoleChannel, float]:
    """Per-channel envelope value (as a share of base pressure) at a point in
    the cycle; all zero throughout swing."""
    u = cycle_fraction
    scale = stance_fraction / _BASE_STANCE
    heel_peak, heel_end = _HEEL_PEAK * scale, _HEEL_END * scale
    mid_a, mid_b = _MID_START * scale, _MID_END * scale
    fore_a, fore_peak = _FORE_START * scale, _FORE_PEAK * scale

    heel = 0.0
    if 0.0 <= u < heel_peak:
        heel = HEEL_SHARE * _half_cos_rise(u, 0.0, heel_peak)
    elif heel_peak <= u < heel_end:
        heel = HEEL_SHARE * _half_cos_fall(u, heel_peak, heel_end)

    mid = 0.0
    if mid_a <= u < mid_b:
        mid = (MIDFOOT_SHARE / 3.0) * _raised_cos(u, mid_a, mid_b)

    fore = 0.0
    if fore_a <= u < fore_peak:
        fore = FOREFOOT_SHARE * _half_cos_rise(u, fore_a, fore_peak)
    elif fore_peak <= u < stance_fraction:
        fore = FOREFOOT_SHARE * _half_cos_fall(u, fore_peak, stance_fraction)

    return {
        SoleChannel.FOREFOOT: fore,
        SoleChannel.MIDFOOT_MEDIAL: mid,
        SoleChannel.MIDFOOT_CENTRAL: mid,
        SoleChannel.MIDFOOT_LATERAL: mid,
        SoleChannel.HEEL: heel,
    }


def peak_fractions(stance_fraction: float = 0.6) -> tuple[float, float]:
    """Cycle fractions of the heel-strike and push-off load peaks."""
    scale = stance_fraction / _BASE_STANCE
    return _HEEL_PEAK * scale, _FORE_PEAK * scale


def synthesize(params: GaitParams) -> Iterator[PressureSample]:
    """Generate the sample stream; deterministic for a given params (incl. seed).

    Noise, when enabled, is additive Gaussian per channel, truncated at zero,
    applied after envelope construction.
    """
    rng = np.random.default_rng(params.seed)
    period = params.cycle_duration_s
    base = params.base_pressure_pa
    for i in range(params.sample_count):
        t = i / params.sample_rate_hz
        u = (t % period) / period
        shares = channel_shares(u, params.stance_fraction)
        values = [shares[c] * base for c in CHANNEL_ORDER]
        if params.noise_sigma_pa > 0:
            noise = rng.normal(0.0, params.noise_sigma_pa, size=len(values))
            values = [max(0.0, float(v + n)) for v, n in zip(values, noise)]
        yield PressureSample(t, {c: Pressure(v) for c, v in zip(CHANNEL_ORDER, values)})


@dataclass(frozen=True)
class PhaseRecord:
    cycle_index: int
    phase: GaitPhase
    start_s: float
    end_s: float


def ground_truth(params: GaitParams) -> list[PhaseRecord]:
    """Exact phase intervals implied by the timeline; the analyzer's oracle."""
    timeline = default_timeline(params.stance_fraction)
    period = params.cycle_duration_s
    records = []
    for k in range(params.cycles):
        for interval in timeline.intervals:
            records.append(
                PhaseRecord(
                    k,
                    interval.phase,
                    (k + interval.start_fraction) * period,
                    (k + interval.end_fraction) * period,
                )
            )
    return records
