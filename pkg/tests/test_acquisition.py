import math
import random

import pytest

from solesense.acquisition import (
    AdcCount,
    DividerConfig,
    count_is_below_onset,
    count_to_pressure,
    counts_to_sample,
    dequantize,
    divider_current,
    divider_out,
    invert_divider,
    pressure_to_count,
    quantize,
    sample_to_counts,
)
from solesense.sensor import datasheet_profile, measured_profile
from solesense.units import Pressure, PressureSample, Resistance, Voltage

CFG = DividerConfig()


class TestDivider:
    def test_equal_resistances_halve_the_rail(self):
        assert divider_out(Resistance(150_000.0), CFG).volts == pytest.approx(1.65, rel=1e-12)

    def test_full_load(self):
        expected = 3.3 * 200.0 / 150_200.0
        assert divider_out(Resistance(200.0), CFG).volts == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(0.004394, abs=5e-7)

    def test_open_circuit_reads_rail(self):
        assert divider_out(Resistance.open_circuit(), CFG).volts == 3.3

    def test_output_strictly_increasing_and_bounded(self):
        rng = random.Random(7)
        previous = 0.0
        for ohms in sorted(rng.uniform(1.0, 1e7) for _ in range(200)):
            v = divider_out(Resistance(ohms), CFG).volts
            assert 0.0 < v < CFG.v_in.volts
            assert v > previous
            previous = v

    def test_invert_named_cases(self):
        assert invert_divider(Voltage(1.65), CFG).ohms == pytest.approx(150_000.0, rel=1e-12)
        assert invert_divider(Voltage(3.3), CFG).is_open
        for ohms in (200.0, 29_162.12, 3_342_900.0):
            back = invert_divider(divider_out(Resistance(ohms), CFG), CFG)
            assert back.ohms == pytest.approx(ohms, rel=1e-9)

    def test_invert_errors(self):
        with pytest.raises(ValueError, match="outside"):
            invert_divider(Voltage(3.31), CFG)
        with pytest.raises(ValueError, match="saturated"):
            invert_divider(Voltage(0.0), CFG)

    def test_roundtrip_random(self):
        rng = random.Random(123)
        for _ in range(2000):
            ohms = math.exp(rng.uniform(math.log(200.0), math.log(3.4e6)))
            back = invert_divider(divider_out(Resistance(ohms), CFG), CFG)
            assert back.ohms == pytest.approx(ohms, rel=1e-9)

    def test_current_budget(self):
        # worst case is a dead-short sensor: v_in / r1 = 22 uA
        assert divider_current(Resistance(1e-9), CFG) <= 3.3 / 150_000.0 + 1e-18
        assert divider_current(Resistance(200.0), CFG) < 1e-3
        assert divider_current(Resistance.open_circuit(), CFG) == 0.0


class TestAdc:
    def test_quantize_points(self):
        assert quantize(Voltage(0.0), CFG).value == 0
        assert quantize(Voltage(1.65), CFG).value == 2048
        assert quantize(Voltage(3.3), CFG).value == 4095  # clamped full scale

    def test_dequantize_points(self):
        assert dequantize(AdcCount(0), CFG).volts == pytest.approx(0.000402832, abs=1e-9)
        assert dequantize(AdcCount(4095), CFG).volts == pytest.approx(3.299597, abs=1e-6)

    def test_roundtrip_every_code(self):
        for code in range(4096):
            assert quantize(dequantize(AdcCount(code), CFG), CFG).value == code

    def test_quantization_error_bound(self):
        lsb = 3.3 / 4096
        rng = random.Random(5)
        for _ in range(500):
            v = rng.uniform(0.0, 3.3)
            back = dequantize(quantize(Voltage(v), CFG), CFG).volts
            assert abs(back - v) <= lsb  # half-LSB plus the full-scale clamp

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DividerConfig(adc_bits=0)
        with pytest.raises(ValueError):
            DividerConfig(adc_bits=32)
        with pytest.raises(ValueError):
            DividerConfig(r1=Resistance.open_circuit())


class TestPressureChain:
    def test_counts_monotone_in_pressure(self):
        profile = datasheet_profile()
        pressures = [200_000.0 + k * 5_000.0 for k in range(111)]
        counts = [pressure_to_count(Pressure(p), profile, CFG).value for p in pressures]
        # resistance falls with pressure, so on this topology counts fall too
        assert all(a >= b for a, b in zip(counts, counts[1:]))

    def test_datasheet_full_load_code(self):
        assert pressure_to_count(Pressure(750_000.0), datasheet_profile(), CFG).value == 5

    def test_no_touch_reads_full_scale(self):
        profile = datasheet_profile()
        count = pressure_to_count(Pressure(0.0), profile, CFG)
        assert count.value == CFG.full_scale_count
        assert count_is_below_onset(count, profile, CFG)
        assert count_to_pressure(count, profile, CFG).pascals == 0.0

    def test_roundtrip_within_one_step_equivalent(self):
        profile = measured_profile()
        rng = random.Random(99)
        for _ in range(1000):
            p = rng.uniform(profile.onset_pressure.pascals, profile.max_pressure_pa)
            code = pressure_to_count(Pressure(p), profile, CFG)
            back = count_to_pressure(code, profile, CFG).pascals
            lo = count_to_pressure(AdcCount(max(code.value - 1, 0)), profile, CFG).pascals
            hi = count_to_pressure(
                AdcCount(min(code.value + 1, CFG.full_scale_count)), profile, CFG
            ).pascals
            bound = max(abs(hi - lo), abs(hi - back), abs(lo - back), 1e-6)
            assert abs(back - p) <= bound

    def test_sample_helpers_roundtrip(self):
        profile = measured_profile()
        sample = PressureSample.from_row(1.25, [0.0, 450_000.0, 500_000.0, 600_000.0, 700_000.0])
        counts = sample_to_counts(sample, profile, CFG)
        assert len(counts) == 5
        decoded = counts_to_sample(1.25, counts, profile, CFG)
        # decode(encode(decode(encode(x)))) is a fixed point of the chain
        counts2 = sample_to_counts(decoded, profile, CFG)
        assert counts == counts2
        assert counts_to_sample(1.25, counts2, profile, CFG).as_row() == decoded.as_row()
