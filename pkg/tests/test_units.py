import math

import pytest

from solesense.units import (
    CHANNEL_ORDER,
    DEFAULT_GEOMETRY,
    REGION_CHANNELS,
    FootRegion,
    Force,
    Pressure,
    PressureSample,
    Resistance,
    SensorGeometry,
    SoleChannel,
    Voltage,
    force_from_mass,
    mass_table,
    pressure_from_force,
)

# Frozen conversion table: (mass kg, force N, pressure Pa) over the default
# 15x15 mm sensor face.
CONVERSION_TABLE = [
    (1, 9.81, 43_600.0),
    (2, 19.62, 87_200.0),
    (3, 29.43, 130_800.0),
    (4, 39.24, 174_400.0),
    (5, 49.05, 218_000.0),
    (6, 58.86, 261_600.0),
    (7, 68.67, 305_200.0),
    (8, 78.48, 348_800.0),
    (9, 88.29, 392_400.0),
    (10, 98.10, 436_000.0),
]


class TestConversions:
    def test_force_from_mass(self):
        assert force_from_mass(1.0).newtons == pytest.approx(9.81, abs=1e-12)
        assert force_from_mass(0.0).newtons == 0.0
        assert force_from_mass(10.0).newtons == pytest.approx(98.10, abs=1e-12)

    def test_pressure_from_force(self):
        assert pressure_from_force(Force(9.81)).pascals == pytest.approx(43_600.0, abs=1e-6)
        assert pressure_from_force(Force(98.10)).pascals == pytest.approx(436_000.0, abs=1e-6)
        assert pressure_from_force(Force(0.0)).pascals == 0.0

    @pytest.mark.parametrize("mass,force,pressure", CONVERSION_TABLE)
    def test_conversion_table_rows(self, mass, force, pressure):
        rows = mass_table([mass])
        assert rows[0][0].newtons == pytest.approx(force, abs=1e-9)
        # the reference table is rounded to 0.1 kPa
        assert abs(rows[0][1].pascals - pressure) <= 50.0

    def test_mass_table_order_and_empty(self):
        rows = mass_table(range(1, 11))
        assert [round(f.newtons, 2) for f, _ in rows] == [r[1] for r in CONVERSION_TABLE]
        assert mass_table([]) == []

    def test_fractional_mass(self):
        # 2.5 kg: 2.5 * 9.81 = 24.525 N; / 2.25e-4 m^2 = 109 kPa (hand arithmetic)
        ((force, pressure),) = mass_table([2.5])
        assert force.newtons == pytest.approx(24.525, abs=1e-12)
        assert pressure.pascals == pytest.approx(109_000.0, rel=1e-12)

    def test_linearity(self):
        base = pressure_from_force(Force(9.81)).pascals
        for a in (0.0, 0.5, 2.0, 7.25, 1e3):
            scaled = pressure_from_force(Force(a * 9.81)).pascals
            assert scaled == pytest.approx(a * base, rel=1e-12, abs=1e-12)

    def test_area_derivation(self):
        # the conversion table implies the default sensor face
        assert 9.81 / 43_600.0 == pytest.approx(DEFAULT_GEOMETRY.area_m2, rel=1e-12)
        assert DEFAULT_GEOMETRY.area_m2 == pytest.approx(2.25e-4, rel=1e-15)

    def test_errors(self):
        with pytest.raises(ValueError):
            force_from_mass(-1.0)
        with pytest.raises(ValueError):
            force_from_mass(math.nan)
        with pytest.raises(ValueError, match="index 2"):
            mass_table([1.0, 2.0, -3.0])
        with pytest.raises(ValueError):
            pressure_from_force(Force(1.0), SensorGeometry(side_length_m=1.0, thickness_m=-1))


class TestDomainTypes:
    def test_pressure_invariants(self):
        with pytest.raises(ValueError):
            Pressure(-1.0)
        with pytest.raises(ValueError):
            Pressure(math.inf)
        assert Pressure(0.0) < Pressure(1.0)

    def test_resistance_invariants(self):
        with pytest.raises(ValueError):
            Resistance(0.0)
        with pytest.raises(ValueError):
            Resistance(-5.0)
        with pytest.raises(ValueError):
            Resistance(math.nan)
        open_r = Resistance.open_circuit()
        assert open_r.is_open
        assert not Resistance(150_000.0).is_open
        assert Resistance(1.0) < open_r

    def test_voltage_invariants(self):
        with pytest.raises(ValueError):
            Voltage(-0.1)
        assert Voltage(3.3).volts == 3.3

    def test_types_do_not_mix(self):
        with pytest.raises(TypeError):
            Pressure(1.0) + Resistance(1.0)
        with pytest.raises(TypeError):
            Pressure(1.0) < Force(1.0)

    def test_channel_layout(self):
        assert len(SoleChannel) == 5
        assert CHANNEL_ORDER == (
            SoleChannel.FOREFOOT,
            SoleChannel.MIDFOOT_MEDIAL,
            SoleChannel.MIDFOOT_CENTRAL,
            SoleChannel.MIDFOOT_LATERAL,
            SoleChannel.HEEL,
        )
        assert len(REGION_CHANNELS[FootRegion.MIDFOOT]) == 3
        assert REGION_CHANNELS[FootRegion.HEEL] == (SoleChannel.HEEL,)
        assert REGION_CHANNELS[FootRegion.FOREFOOT] == (SoleChannel.FOREFOOT,)

    def test_geometry(self):
        g = SensorGeometry()
        assert g.side_length_m == 0.015
        assert g.thickness_m == 0.00125
        assert g.area_m2 == g.side_length_m**2

    def test_pressure_sample(self):
        sample = PressureSample.from_row(0.5, [1.0, 2.0, 3.0, 4.0, 5.0])
        assert sample.as_row() == (1.0, 2.0, 3.0, 4.0, 5.0)
        assert sample.value(SoleChannel.HEEL) == 5.0
        with pytest.raises(ValueError, match="missing"):
            PressureSample(0.0, {SoleChannel.HEEL: Pressure(1.0)})
        with pytest.raises(ValueError):
            PressureSample.from_row(0.0, [1.0, 2.0])
