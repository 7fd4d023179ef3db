import math

import pytest

import qbnf.filters
from conftest import DESIGN_TARGETS
from qbnf.ecrlh import UnitCell, resonant_frequencies, series_impedance, shunt_admittance
from qbnf.errors import LossyCellError, PoleSingularityError, ShortCircuitError, StopbandPhaseError
from qbnf.filters import (
    DEPTH_FLOOR_DB,
    FilterTopology,
    NotchReport,
    SweepGrid,
    assemble,
    dispersion_sweep,
    locate_notches,
    notch_report,
    phase_shift,
    sparams_at,
    sweep_sparams,
)
from qbnf.twoport import IDENTITY

# Transmission-zero frequencies of the benchmark cell over 0.5-4.0 GHz,
# frozen from a scan/bisection of 1 + Z*Y (as-given convention).
BENCH_NOTCHES_HZ = (0.893275e9, 1.353159e9, 2.609641e9, 3.383892e9)
GRID = SweepGrid(0.5e9, 4.0e9, 4001)


def s21_db(point) -> float:
    mag = abs(point.s21)
    return 20.0 * math.log10(mag) if mag > 0 else -math.inf


class TestTypes:
    def test_topology_defaults(self):
        topo = FilterTopology()
        assert topo.z0_line == 50.0 and topo.z_ref == 50.0
        assert topo.theta_per_side == pytest.approx(math.radians(20.0))
        assert topo.f_ref == 1.0e9 and topo.n_cells == 1

    def test_topology_validation(self):
        with pytest.raises(ValueError):
            FilterTopology(z0_line=-5.0)
        with pytest.raises(ValueError):
            FilterTopology(theta_per_side=-0.1)
        with pytest.raises(ValueError):
            FilterTopology(n_cells=0)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            SweepGrid(2e9, 1e9, 100)
        with pytest.raises(ValueError):
            SweepGrid(1e9, 2e9, 1)
        with pytest.raises(ValueError):
            SweepGrid(1e9, 2e9, 100, spacing="log")

    def test_grid_frequencies_are_increasing(self):
        freqs = SweepGrid(1e9, 2e9, 11).frequencies()
        assert len(freqs) == 11
        assert all(a < b for a, b in zip(freqs, freqs[1:]))

    def test_notch_report_validation(self):
        with pytest.raises(ValueError):
            NotchReport(f_notch=1e9, depth_db=-5.0, bw_10db=1e6, refined=True)
        with pytest.raises(ValueError):
            NotchReport(f_notch=1e9, depth_db=-30.0, bw_10db=0.0, refined=True)


class TestAssemble:
    def test_reciprocity_at_bench_point(self, bench_cell):
        m = assemble(FilterTopology(), bench_cell, 2.0e9)
        assert abs(m.determinant - 1.0) <= 1e-12 * max(1.0, abs(m.a * m.d))

    def test_bare_line_zero_length_is_identity(self):
        topo = FilterTopology(theta_per_side=0.0)
        assert assemble(topo, None, 1.7e9) == IDENTITY

    def test_unbounded_stub_omits_shunt(self, bench_cell, monkeypatch):
        from qbnf.errors import UnboundedImpedanceError
        from qbnf.twoport import cascade, tline_section

        def raise_unbounded(cell, n, f):
            raise UnboundedImpedanceError("test")

        monkeypatch.setattr(qbnf.filters, "stub_input_impedance", raise_unbounded)
        topo = FilterTopology()
        m = assemble(topo, bench_cell, 1.7e9)
        arm = tline_section(topo.z0_line, topo.theta_at(1.7e9))
        assert m == cascade(arm, arm)

    def test_exact_short_raises(self, bench_cell, monkeypatch):
        monkeypatch.setattr(qbnf.filters, "stub_input_impedance", lambda cell, n, f: 0j)
        with pytest.raises(ShortCircuitError) as info:
            assemble(FilterTopology(), bench_cell, 1.7e9)
        assert info.value.frequency == 1.7e9

    def test_pole_propagates_with_frequency(self, bench_cell):
        f_dp = resonant_frequencies(bench_cell.elements).f_dp
        with pytest.raises(PoleSingularityError) as info:
            assemble(FilterTopology(), bench_cell, f_dp)
        assert info.value.frequency == f_dp


class TestSParamsAt:
    def test_exact_transmission_zero(self, bench_cell, monkeypatch):
        monkeypatch.setattr(qbnf.filters, "stub_input_impedance", lambda cell, n, f: 0j)
        point = sparams_at(FilterTopology(), bench_cell, 1.7e9)
        assert point.s21 == 0 and point.s12 == 0
        assert abs(point.s11) == pytest.approx(1.0, abs=1e-12)  # lossless short reflection
        assert point.s22 == point.s11

    def test_exact_short_with_zero_line(self, bench_cell, monkeypatch):
        monkeypatch.setattr(qbnf.filters, "stub_input_impedance", lambda cell, n, f: 0j)
        point = sparams_at(FilterTopology(theta_per_side=0.0), bench_cell, 1.7e9)
        assert point.s11 == -1.0 and point.s21 == 0

    def test_near_notch_transmission_collapses(self, design_cell):
        point = sparams_at(FilterTopology(), design_cell, DESIGN_TARGETS[0])
        assert s21_db(point) < -60.0


class TestSweep:
    def test_physical_invariants_each_point(self, bench_cell):
        for conv in (False, True):
            cell = UnitCell(bench_cell.elements, half_series_convention=conv)
            points = sweep_sparams(FilterTopology(), cell, SweepGrid(0.5e9, 4.0e9, 401))
            for p in points:
                assert abs(p.s21 - p.s12) <= 1e-12
                assert abs(abs(p.s11) ** 2 + abs(p.s21) ** 2 - 1.0) <= 1e-10

    def test_deterministic(self, bench_cell):
        grid = SweepGrid(0.5e9, 4.0e9, 301)
        a = sweep_sparams(FilterTopology(), bench_cell, grid)
        b = sweep_sparams(FilterTopology(), bench_cell, grid)
        assert a == b

    def test_bench_as_given_has_exactly_four_deep_minima(self, bench_cell):
        points = sweep_sparams(FilterTopology(), bench_cell, GRID)
        mags = [abs(p.s21) for p in points]
        minima = [
            i
            for i in range(1, len(mags) - 1)
            if mags[i] < mags[i - 1] and mags[i] < mags[i + 1] and s21_db(points[i]) <= -20.0
        ]
        assert len(minima) == 4
        freqs = [points[i].frequency for i in minima]
        for f, expected in zip(freqs, BENCH_NOTCHES_HZ):
            assert f == pytest.approx(expected, rel=2e-3)

    def test_bench_half_series_has_three_deep_minima_in_band(self, bench_cell):
        # the half-series reading moves one notch out of the 0.5-4 GHz window
        cell = UnitCell(bench_cell.elements, half_series_convention=True)
        points = sweep_sparams(FilterTopology(), cell, GRID)
        mags = [abs(p.s21) for p in points]
        minima = [
            i
            for i in range(1, len(mags) - 1)
            if mags[i] < mags[i - 1] and mags[i] < mags[i + 1] and s21_db(points[i]) <= -20.0
        ]
        assert len(minima) == 3

    def test_pole_grid_point_is_nudged_and_flagged(self, bench_cell):
        f_dp = resonant_frequencies(bench_cell.elements).f_dp
        grid = SweepGrid(f_dp, f_dp * 1.001, 3)
        points = sweep_sparams(FilterTopology(), bench_cell, grid)
        assert len(points) == 3
        assert points[0].pole_adjusted
        assert points[0].frequency == f_dp * (1.0 + 1e-9)
        assert not points[1].pole_adjusted


class TestLocateNotches:
    def test_bench_roots(self, bench_cell):
        roots = locate_notches(bench_cell, (0.5e9, 4.0e9))
        assert len(roots) == 4
        for root, expected in zip(roots, BENCH_NOTCHES_HZ):
            assert root == pytest.approx(expected, rel=1e-5)
        for root in roots:
            w = 1.0 + (series_impedance(bench_cell, root) * shunt_admittance(bench_cell, root)).real
            assert abs(w) < 1e-9

    def test_design_cell_round_trip(self, design_cell):
        roots = locate_notches(design_cell, (0.45e9, 4.02e9))
        assert len(roots) == 4
        for root, target in zip(roots, DESIGN_TARGETS):
            assert abs(root - target) / target < 5e-3

    def test_empty_band(self, bench_cell):
        assert locate_notches(bench_cell, (2.8e9, 3.2e9)) == []

    def test_lossy_cell_rejected(self, bench_cell):
        lossy = UnitCell(bench_cell.elements, q_factor=100.0)
        with pytest.raises(LossyCellError):
            locate_notches(lossy, (0.5e9, 4.0e9))

    def test_band_validation(self, bench_cell):
        with pytest.raises(ValueError):
            locate_notches(bench_cell, (2e9, 1e9))

    def test_roots_are_transmission_zeros(self, bench_cell):
        topo = FilterTopology()
        for root in locate_notches(bench_cell, (0.5e9, 4.0e9)):
            assert s21_db(sparams_at(topo, bench_cell, root)) <= -60.0


class TestNotchReport:
    def test_all_pass_line_has_no_notches(self):
        assert notch_report(FilterTopology(), None, SweepGrid(0.5e9, 4.0e9, 801)) == []

    def test_bench_reports(self, bench_cell):
        reports = notch_report(FilterTopology(), bench_cell, GRID)
        assert len(reports) == 4
        for report, expected in zip(reports, BENCH_NOTCHES_HZ):
            assert report.refined
            assert report.f_notch == pytest.approx(expected, rel=1e-5)
            assert report.depth_db == DEPTH_FLOOR_DB
            assert report.bw_10db > 0

    def test_design_cell_meets_rejection_claim(self, design_cell):
        reports = notch_report(FilterTopology(), design_cell, GRID)
        assert len(reports) == 4
        for report, target in zip(reports, DESIGN_TARGETS):
            assert report.depth_db <= -20.0
            assert abs(report.f_notch - target) / target < 5e-3

    def test_loss_shallows_the_notches(self, design_cell):
        grid = SweepGrid(0.5e9, 4.0e9, 4001)
        q200 = notch_report(FilterTopology(), UnitCell(design_cell.elements, q_factor=200.0), grid)
        assert len(q200) == 4
        for report in q200:
            assert DEPTH_FLOOR_DB < report.depth_db <= -10.0
        q500 = notch_report(FilterTopology(), UnitCell(design_cell.elements, q_factor=500.0), grid)
        assert len(q500) == 4
        for shallow, deeper in zip(q200, q500):
            assert deeper.depth_db < shallow.depth_db  # less loss digs deeper

    def test_heavy_loss_hides_shallow_dips(self, design_cell):
        # q = 50 pushes two dips above the -10 dB detection level; the
        # reported subset stays finite and sits on the lossless zeros
        reports = notch_report(FilterTopology(), UnitCell(design_cell.elements, q_factor=50.0), GRID)
        assert 0 < len(reports) < 4
        lossless = locate_notches(design_cell, (0.5e9, 4.0e9))
        for report in reports:
            assert DEPTH_FLOOR_DB < report.depth_db <= -10.0
            assert min(abs(report.f_notch - r) / r for r in lossless) < 1e-2

    def test_notch_positions_independent_of_host_line(self, design_cell):
        base = notch_report(FilterTopology(), design_cell, GRID)
        other_topology = FilterTopology(z0_line=35.0, theta_per_side=math.radians(47.0), z_ref=60.0)
        moved = notch_report(other_topology, design_cell, GRID)
        assert len(base) == len(moved) == 4
        for a, b in zip(base, moved):
            assert abs(a.f_notch - b.f_notch) / a.f_notch < 1e-9


class TestPhaseShift:
    def test_quarter_wave_at_design_targets(self, design_cell):
        for target in DESIGN_TARGETS:
            assert abs(phase_shift(design_cell, target) - math.pi / 2) < 1e-6

    def test_value_matches_arccos_of_dispersion(self, bench_cell):
        w = 1.0 + (series_impedance(bench_cell, 1.3e9) * shunt_admittance(bench_cell, 1.3e9)).real
        assert abs(w) < 1.0
        assert phase_shift(bench_cell, 1.3e9) == math.acos(w)

    def test_stopband_rejected(self, bench_cell):
        with pytest.raises(StopbandPhaseError):
            phase_shift(bench_cell, 1.9e9)

    def test_lossy_rejected(self, bench_cell):
        with pytest.raises(LossyCellError):
            phase_shift(UnitCell(bench_cell.elements, q_factor=80.0), 1.3e9)


class TestDispersionSweep:
    def test_branch_bounds(self, bench_cell):
        points = dispersion_sweep(bench_cell, SweepGrid(0.5e9, 4.0e9, 501))
        assert len(points) == 501
        for p in points:
            assert p.gamma_p.real >= 0.0
            assert 0.0 <= p.gamma_p.imag <= math.pi

    def test_pole_point_nudged(self, bench_cell):
        f_dp = resonant_frequencies(bench_cell.elements).f_dp
        points = dispersion_sweep(bench_cell, SweepGrid(f_dp, f_dp * 1.001, 3))
        assert points[0].frequency == f_dp * (1.0 + 1e-9)

    def test_quarter_wave_phase_at_design_target(self, design_cell):
        grid = SweepGrid(DESIGN_TARGETS[0], 4.0e9, 11)
        point = dispersion_sweep(design_cell, grid)[0]
        assert point.frequency == DESIGN_TARGETS[0]
        assert abs(point.gamma_p.imag - math.pi / 2) < 1e-10
