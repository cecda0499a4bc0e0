"""Electrical acquisition chain: voltage divider, ADC, and exact inversion.

The sensor is the variable element R2 of a divider fed from the supply rail,
with the output measured across the sensor:

    v_out = v_in * r2 / (r1 + r2)

so an unloaded (open-circuit) sensor reads full scale and a hard press reads
near zero. The downstream analyzer treats full scale as "no contact". The ADC
reference defaults to the 3.3 V logic rail of the acquisition board; the
wearable itself runs from a 3.7 V lithium cell, which powers the board but
does not set the ADC reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sensor import CalibrationProfile, invert_static, static_resistance
from .units import CHANNEL_ORDER, Pressure, PressureSample, Resistance, Voltage

BATTERY_VOLTS = 3.7  # supply metadata only; see module docstring


@dataclass(frozen=True)
class DividerConfig:
    v_in: Voltage = Voltage(3.3)
    r1: Resistance = Resistance(150_000.0)
    adc_bits: int = 12
    v_ref: Voltage | None = None  # defaults to v_in

    def __post_init__(self) -> None:
        if self.v_in.volts <= 0:
            raise ValueError(f"v_in must be > 0, got {self.v_in.volts!r}")
        if self.r1.is_open:
            raise ValueError("r1 must be finite")
        if not 1 <= self.adc_bits <= 24:
            raise ValueError(f"adc_bits must be in [1, 24], got {self.adc_bits!r}")
        if self.v_ref is None:
            object.__setattr__(self, "v_ref", self.v_in)

    @property
    def full_scale_count(self) -> int:
        return (1 << self.adc_bits) - 1


@dataclass(frozen=True, order=True)
class AdcCount:
    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"ADC count must be >= 0, got {self.value!r}")


def divider_out(r2: Resistance, cfg: DividerConfig = DividerConfig()) -> Voltage:
    """Divider output across the sensor; open circuit reads the full rail."""
    if r2.is_open:
        return Voltage(cfg.v_in.volts)
    return Voltage(cfg.v_in.volts * r2.ohms / (cfg.r1.ohms + r2.ohms))


def invert_divider(v_out: Voltage, cfg: DividerConfig = DividerConfig()) -> Resistance:
    """Exact algebraic inverse of divider_out.

    v_out equal to the rail means open circuit; v_out of exactly zero is
    below any representable resistance and signals saturation.
    """
    v = v_out.volts
    if not 0.0 <= v <= cfg.v_in.volts:
        raise ValueError(f"v_out {v!r} outside [0, {cfg.v_in.volts}]")
    if v == cfg.v_in.volts:
        return Resistance.open_circuit()
    if v == 0.0:
        raise ValueError("v_out of 0 V is below the representable resistance range (saturated)")
    return Resistance(cfg.r1.ohms * v / (cfg.v_in.volts - v))


def divider_current(r2: Resistance, cfg: DividerConfig = DividerConfig()) -> float:
    """Supply current in amperes through one divider leg."""
    if r2.is_open:
        return 0.0
    return cfg.v_in.volts / (cfg.r1.ohms + r2.ohms)


def quantize(v: Voltage, cfg: DividerConfig = DividerConfig()) -> AdcCount:
    """Ideal ADC: floor quantizer clamped to the code range."""
    codes = 1 << cfg.adc_bits
    raw = math.floor(v.volts / cfg.v_ref.volts * codes)
    return AdcCount(min(max(raw, 0), codes - 1))


def dequantize(count: AdcCount, cfg: DividerConfig = DividerConfig()) -> Voltage:
    """Mid-rise reconstruction: code center, halving worst-case bias."""
    codes = 1 << cfg.adc_bits
    if count.value >= codes:
        raise ValueError(f"count {count.value} out of range for {cfg.adc_bits}-bit ADC")
    return Voltage((count.value + 0.5) * cfg.v_ref.volts / codes)


def pressure_to_count(
    pressure: Pressure, profile: CalibrationProfile, cfg: DividerConfig = DividerConfig()
) -> AdcCount:
    """Forward chain pressure -> resistance -> voltage -> code."""
    return quantize(divider_out(static_resistance(profile, pressure), cfg), cfg)


def count_to_pressure(
    count: AdcCount, profile: CalibrationProfile, cfg: DividerConfig = DividerConfig()
) -> Pressure:
    """Inverse chain code -> voltage -> resistance -> pressure.

    Codes whose resistance lies at or above the profile's idle value are
    below onset (no contact) and report 0 Pa; see count_is_below_onset.
    """
    resistance = invert_divider(dequantize(count, cfg), cfg)
    if resistance.is_open or resistance.ohms >= profile.idle_resistance_ohm:
        return Pressure(0.0)
    return invert_static(profile, resistance)


def count_is_below_onset(
    count: AdcCount, profile: CalibrationProfile, cfg: DividerConfig = DividerConfig()
) -> bool:
    """True when a code maps above the profile's idle resistance (no contact)."""
    resistance = invert_divider(dequantize(count, cfg), cfg)
    return resistance.is_open or resistance.ohms >= profile.idle_resistance_ohm


def sample_to_counts(
    sample: PressureSample, profile: CalibrationProfile, cfg: DividerConfig = DividerConfig()
) -> tuple[int, ...]:
    """Raw codes for all five channels, in canonical order."""
    return tuple(
        pressure_to_count(sample.channels[c], profile, cfg).value for c in CHANNEL_ORDER
    )


def counts_to_sample(
    timestamp: float,
    counts: tuple[int, ...],
    profile: CalibrationProfile,
    cfg: DividerConfig = DividerConfig(),
) -> PressureSample:
    """Decode five raw codes back into a pressure sample."""
    if len(counts) != len(CHANNEL_ORDER):
        raise ValueError(f"expected {len(CHANNEL_ORDER)} counts, got {len(counts)}")
    return PressureSample(
        timestamp,
        {
            channel: count_to_pressure(AdcCount(raw), profile, cfg)
            for channel, raw in zip(CHANNEL_ORDER, counts)
        },
    )
