import cmath
import math

import numpy as np
import pytest

from qbnf.errors import UnboundedImpedanceError
from qbnf.twoport import (
    IDENTITY,
    OPEN,
    TwoPortMatrix,
    abcd_to_s,
    cascade,
    input_impedance,
    series_element,
    shunt_element,
    tline_section,
)


def assert_matrix_close(m, n, rel=1e-12):
    scale = max(abs(v) for v in (m.a, m.b, m.c, m.d, n.a, n.b, n.c, n.d)) or 1.0
    for name in ("a", "b", "c", "d"):
        assert abs(getattr(m, name) - getattr(n, name)) <= rel * scale, name


class TestConstructors:
    def test_series_zero_is_identity(self):
        assert series_element(0) == IDENTITY

    def test_series_definition(self):
        m = series_element(50j)
        assert (m.a, m.b, m.c, m.d) == (1, 50j, 0, 1)

    def test_series_elements_add(self):
        z1, z2 = 3 + 7j, -2 + 11j
        assert cascade(series_element(z1), series_element(z2)) == series_element(z1 + z2)

    def test_shunt_zero_is_identity(self):
        assert shunt_element(0) == IDENTITY

    def test_shunt_definition(self):
        m = shunt_element(0.02j)
        assert (m.a, m.b, m.c, m.d) == (1, 0, 0.02j, 1)

    def test_shunt_elements_add(self):
        y1, y2 = 0.01 + 0.03j, 0.002 - 0.01j
        assert cascade(shunt_element(y1), shunt_element(y2)) == shunt_element(y1 + y2)

    def test_tline_zero_length_is_identity(self):
        assert tline_section(50.0, 0.0) == IDENTITY

    def test_tline_quarter_wave(self):
        m = tline_section(50.0, math.pi / 2)
        assert abs(m.a) < 1e-15 and abs(m.d) < 1e-15
        assert abs(m.b - 50j) < 1e-12
        assert abs(m.c - 1j / 50) < 1e-15

    def test_tline_half_wave(self):
        m = tline_section(50.0, math.pi)
        assert abs(m.a + 1) < 1e-15 and abs(m.d + 1) < 1e-15
        assert abs(m.b) < 1e-12 and abs(m.c) < 1e-15

    @pytest.mark.parametrize("bad", [float("nan"), float("inf"), complex("inf"), complex(0, float("nan"))])
    def test_nonfinite_rejected(self, bad):
        with pytest.raises(ValueError):
            series_element(bad)
        with pytest.raises(ValueError):
            shunt_element(bad)

    def test_tline_bad_z0(self):
        with pytest.raises(ValueError):
            tline_section(0.0, 1.0)
        with pytest.raises(ValueError):
            tline_section(-50.0, 1.0)

    def test_matrix_entries_must_be_finite(self):
        with pytest.raises(ValueError):
            TwoPortMatrix(1.0, float("inf"), 0.0, 1.0)


class TestCascade:
    def test_identity_law(self):
        m = cascade(series_element(10j), shunt_element(0.1j))
        assert cascade(IDENTITY, m) == m
        assert cascade(m, IDENTITY) == m

    def test_direct_product(self):
        m = cascade(series_element(10j), shunt_element(0.1j))
        assert m.a == 10j * 0.1j + 1
        assert (m.b, m.c, m.d) == (10j, 0.1j, 1)

    def test_matmul_operator(self):
        m = series_element(10j)
        n = shunt_element(0.1j)
        assert m @ n == cascade(m, n)

    def test_determinant_multiplicative(self):
        m1 = tline_section(35.0, 1.1)
        m2 = cascade(series_element(5 + 3j), shunt_element(0.01 - 0.2j))
        det = cascade(m1, m2).determinant
        assert abs(det - 1.0) < 1e-12

    def test_associativity(self):
        m1 = tline_section(75.0, 0.7)
        m2 = series_element(12 - 4j)
        m3 = shunt_element(0.005 + 0.03j)
        assert_matrix_close(cascade(cascade(m1, m2), m3), cascade(m1, cascade(m2, m3)))


class TestConversion:
    def test_through_connection(self):
        p = abcd_to_s(IDENTITY, 50.0, 1e9)
        assert p.s11 == 0 and p.s22 == 0
        assert p.s21 == 1 and p.s12 == 1

    def test_shunt_conductance_hand_value(self):
        # standard conversion of shunt 2/50 S at 50 ohm, evaluated by hand
        p = abcd_to_s(shunt_element(2.0 / 50.0), 50.0, 1e9)
        assert abs(p.s21 - 0.5) < 1e-15
        assert abs(p.s11 + 0.5) < 1e-15

    @pytest.mark.parametrize("theta", [0.3, 1.0, 2.2, 4.0])
    def test_matched_line_is_reflectionless(self, theta):
        p = abcd_to_s(tline_section(50.0, theta), 50.0, 1e9)
        assert abs(p.s11) < 1e-15
        assert abs(abs(p.s21) - 1.0) < 1e-12
        assert abs(cmath.phase(p.s21) - (-theta + (2 * math.pi if theta > math.pi else 0))) < 1e-12

    def test_bad_z_ref(self):
        with pytest.raises(ValueError):
            abcd_to_s(IDENTITY, 0.0, 1e9)


class TestInputImpedance:
    def test_through_passes_load(self):
        assert input_impedance(IDENTITY, 50.0) == 50.0

    def test_quarter_wave_open_is_short(self):
        z = input_impedance(tline_section(50.0, math.pi / 2), OPEN)
        assert abs(z) < 1e-12

    def test_series_over_short(self):
        assert input_impedance(series_element(30j), 0j) == 30j

    def test_open_with_zero_c_is_unbounded(self):
        with pytest.raises(UnboundedImpedanceError):
            input_impedance(series_element(30j), OPEN)

    def test_quarter_wave_short_is_unbounded(self):
        # exact quarter-wave entries; cos(pi/2) in floats is not quite zero
        quarter = TwoPortMatrix(0.0, 50j, 0.02j, 0.0)
        with pytest.raises(UnboundedImpedanceError):
            input_impedance(quarter, 0j)


def _random_reciprocal(rng) -> TwoPortMatrix:
    parts = []
    for _ in range(rng.integers(1, 5)):
        kind = rng.integers(0, 3)
        if kind == 0:
            parts.append(series_element(complex(rng.normal(0, 20), rng.normal(0, 20))))
        elif kind == 1:
            parts.append(shunt_element(complex(rng.normal(0, 0.05), rng.normal(0, 0.05))))
        else:
            parts.append(tline_section(float(rng.uniform(10, 120)), float(rng.uniform(0, 6))))
    return cascade(*parts)


def _random_lossless(rng) -> TwoPortMatrix:
    parts = []
    for _ in range(rng.integers(1, 5)):
        kind = rng.integers(0, 3)
        if kind == 0:
            parts.append(series_element(complex(0, rng.normal(0, 20))))
        elif kind == 1:
            parts.append(shunt_element(complex(0, rng.normal(0, 0.05))))
        else:
            parts.append(tline_section(float(rng.uniform(10, 120)), float(rng.uniform(0, 6))))
    return cascade(*parts)


class TestInvariants:
    def test_unit_determinant(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            m = _random_reciprocal(rng)
            scale = max(abs(m.a * m.d), abs(m.b * m.c), 1.0)
            assert abs(m.determinant - 1.0) <= 1e-12 * scale

    def test_reciprocity_s21_equals_s12(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            p = abcd_to_s(_random_reciprocal(rng), 50.0, 1e9)
            assert abs(p.s21 - p.s12) <= 1e-12

    def test_lossless_unitarity(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            m = _random_lossless(rng)
            assert abs(m.a.imag) < 1e-9 and abs(m.d.imag) < 1e-9
            p = abcd_to_s(m, 50.0, 1e9)
            assert abs(abs(p.s11) ** 2 + abs(p.s21) ** 2 - 1.0) <= 1e-10

    def test_symmetry_s11_equals_s22(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            z = complex(rng.normal(0, 30), rng.normal(0, 30))
            y = complex(rng.normal(0, 0.05), rng.normal(0, 0.05))
            arm = series_element(z)
            m = cascade(arm, shunt_element(y), arm)  # a == d by construction
            p = abcd_to_s(m, 50.0, 1e9)
            assert abs(p.s11 - p.s22) <= 1e-12

    def test_cascade_associativity_random(self):
        rng = np.random.default_rng(19)
        for _ in range(100):
            m1, m2, m3 = (_random_reciprocal(rng) for _ in range(3))
            assert_matrix_close(cascade(cascade(m1, m2), m3), cascade(m1, cascade(m2, m3)), rel=1e-11)
