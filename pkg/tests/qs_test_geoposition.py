"""
Tests for the pseudorange forward model and position solver
(qsgps.geoposition).

Most tests build ranges with forward_pseudoranges and check that
solve_fix inverts them. The mirrored-square scenario puts four satellites
in one plane; the receiver and its reflection through that plane then fit
the same pseudoranges, which is the four-satellite ambiguity.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import debug_sim, mirrored_square_scenario, truth_on_equator, well_spread_satellites

from qsgps import geoposition
from qsgps.constants import DEFAULT_SEED, SPEED_OF_LIGHT
from qsgps.errors import ConfigError, ConvergenceError, DegenerateGeometryError, IdMismatchError
from qsgps.models.geometry import EcefPoint, Pseudorange, SatelliteEpoch, SolverConfig

POSITION_TOL_M = 1e-3
BIAS_TOL_S = 1e-11


def residuals(sats, ranges, x, bias):
    positions = np.array([s.position.as_array() for s in sats])
    rho = np.array([r.rho for r in ranges])
    return np.linalg.norm(positions - x, axis=1) + SPEED_OF_LIGHT * bias - rho


def assert_recovers(fix, truth, bias):
    assert fix.converged
    assert fix.position.distance_to(truth) < POSITION_TOL_M
    assert abs(fix.clock_bias - bias) < BIAS_TOL_S


class TestForwardModel:
    def test_zero_bias_is_geometric_distance(self):
        truth = truth_on_equator()
        sat = SatelliteEpoch("A", EcefPoint(truth.x + 20_200_000.0, 0.0, 0.0))
        (rho,) = geoposition.forward_pseudoranges(truth, 0.0, [sat])
        assert rho.id == "A"
        assert rho.rho == 20_200_000.0

    def test_one_millisecond_bias(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        clean = geoposition.forward_pseudoranges(truth, 0.0, sats)
        biased = geoposition.forward_pseudoranges(truth, 1e-3, sats)
        for a, b in zip(clean, biased):
            assert b.rho - a.rho == pytest.approx(299_792.458, abs=1e-6)

    def test_matches_the_distance_formula(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        for sat, rho in zip(sats, geoposition.forward_pseudoranges(truth, 0.0, sats)):
            p = sat.position
            expected = ((p.x - truth.x) ** 2 + (p.y - truth.y) ** 2 + (p.z - truth.z) ** 2) ** 0.5
            assert rho.rho == pytest.approx(expected, rel=1e-15)

    def test_satellite_on_the_receiver(self):
        truth = truth_on_equator()
        with pytest.raises(DegenerateGeometryError):
            geoposition.forward_pseudoranges(truth, 0.0, [SatelliteEpoch("A", truth)])

    def test_duplicate_ids(self):
        sats = well_spread_satellites(2)
        clash = [sats[0], SatelliteEpoch(sats[0].id, sats[1].position)]
        with pytest.raises(IdMismatchError):
            geoposition.forward_pseudoranges(truth_on_equator(), 0.0, clash)


class TestJacobian:
    def test_matches_central_differences(self):
        sats = well_spread_satellites(6)
        x = np.array([6_371_000.0, 1_000.0, -2_000.0])
        bias = 3e-4
        ranges = geoposition.forward_pseudoranges(truth_on_equator(), 0.0, sats)
        analytic = geoposition.jacobian(sats, EcefPoint.from_array(x))

        h = 1e-2
        numeric = np.zeros((len(sats), 3))
        for k in range(3):
            step = np.zeros(3)
            step[k] = h
            numeric[:, k] = (residuals(sats, ranges, x + step, bias) - residuals(sats, ranges, x - step, bias)) / (2 * h)
        block = analytic[:, :3]
        assert np.linalg.norm(block - numeric) / np.linalg.norm(block) < 1e-6

        db = 1e-6
        bias_column = (residuals(sats, ranges, x, bias + db) - residuals(sats, ranges, x, bias - db)) / (2 * db)
        assert_allclose(analytic[:, 3], bias_column, rtol=1e-6)

    def test_rows_are_unit_vectors(self):
        analytic = geoposition.jacobian(well_spread_satellites(4), truth_on_equator())
        assert_allclose(np.linalg.norm(analytic[:, :3], axis=1), 1.0, atol=1e-14)
        assert_allclose(analytic[:, 3], SPEED_OF_LIGHT)

    def test_gdop_is_finite_for_good_geometry(self):
        value = geoposition.gdop(well_spread_satellites(6), truth_on_equator())
        assert 1.0 < value < 20.0


class TestSolveFix:
    @debug_sim(label="Fix")
    def test_four_satellites(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        ranges = geoposition.forward_pseudoranges(truth, 1e-3, sats)
        debug_sim.current.input = [r.to_dict() for r in ranges]
        fix = geoposition.solve_fix(sats, ranges)
        debug_sim.current.output = fix
        assert_recovers(fix, truth, 1e-3)

    def test_overdetermined(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(6)
        fix = geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, -2e-3, sats))
        assert_recovers(fix, truth, -2e-3)
        assert fix.residual_norm < 1e-6

    def test_damped_normal_equations(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        cfg = SolverConfig(damping=1e-3, max_iterations=200)
        fix = geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, 1e-3, sats), cfg)
        assert_recovers(fix, truth, 1e-3)

    def test_inconsistent_range_is_reported(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(5)
        ranges = geoposition.forward_pseudoranges(truth, 0.0, sats)
        ranges[2] = Pseudorange(ranges[2].id, ranges[2].rho + 10.0)
        fix = geoposition.solve_fix(sats, ranges)
        assert fix.converged
        assert fix.residual_norm > 0.1

    def test_start_at_truth(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        cfg = SolverConfig(initial_guess=truth, initial_bias=1e-3)
        fix = geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, 1e-3, sats), cfg)
        assert fix.iterations <= 2
        assert fix.residual_norm < cfg.tolerance

    def test_range_order_does_not_matter(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(5)
        ranges = geoposition.forward_pseudoranges(truth, 0.0, sats)
        fix = geoposition.solve_fix(sats, list(reversed(ranges)))
        assert_recovers(fix, truth, 0.0)

    def test_translation_equivariance(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(5)
        offset = np.array([150_000.0, -250_000.0, 400_000.0])
        moved = [SatelliteEpoch(s.id, s.position.translated(offset)) for s in sats]
        base = geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, 1e-4, sats))
        shifted = geoposition.solve_fix(moved, geoposition.forward_pseudoranges(truth.translated(offset), 1e-4, moved))
        assert_allclose(shifted.position.as_array(), base.position.as_array() + offset, atol=POSITION_TOL_M)
        assert shifted.clock_bias == pytest.approx(base.clock_bias, abs=BIAS_TOL_S)

    def test_bias_shift(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        first = geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, 1e-3, sats))
        second = geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, 1e-3 + 5e-6, sats))
        assert second.clock_bias - first.clock_bias == pytest.approx(5e-6, abs=BIAS_TOL_S)

    def test_three_satellites(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(3)
        with pytest.raises(DegenerateGeometryError):
            geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, 0.0, sats))

    def test_coincident_satellites(self):
        truth = truth_on_equator()
        p = well_spread_satellites(1)[0].position
        sats = [SatelliteEpoch(f"D{i}", p) for i in range(4)]
        with pytest.raises(DegenerateGeometryError):
            geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, 0.0, sats))

    def test_id_mismatch(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        ranges = geoposition.forward_pseudoranges(truth, 0.0, sats)
        ranges[0] = Pseudorange("X9", ranges[0].rho)
        with pytest.raises(IdMismatchError):
            geoposition.solve_fix(sats, ranges)

    def test_iteration_budget(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        with pytest.raises(ConvergenceError) as info:
            geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, 1e-3, sats), SolverConfig(max_iterations=1))
        assert info.value.fix is not None
        assert not info.value.fix.converged
        assert info.value.fix.iterations == 1

    def test_invalid_solver_config(self):
        with pytest.raises(ConfigError):
            SolverConfig(tolerance=0.0)
        with pytest.raises(ConfigError):
            SolverConfig(max_iterations=0)
        with pytest.raises(ConfigError):
            SolverConfig(damping=-1.0)


class TestEnumerateRoots:
    def test_mirrored_square_has_two_roots(self):
        sats, truth, mirror = mirrored_square_scenario()
        ranges = geoposition.forward_pseudoranges(truth, 0.0, sats)
        starts = [EcefPoint(0.0, 0.0, 0.0), EcefPoint(40e6, 0.0, 0.0)]
        roots = geoposition.enumerate_roots(sats, ranges, SolverConfig(), starts)
        assert len(roots) == 2
        for expected in (truth, mirror):
            assert min(r.position.distance_to(expected) for r in roots) < POSITION_TOL_M
        for root in roots:
            assert abs(root.clock_bias) < BIAS_TOL_S

    def test_five_satellites_have_one_root(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(5)
        ranges = geoposition.forward_pseudoranges(truth, 1e-3, sats)
        starts = [EcefPoint(0.0, 0.0, 0.0), (EcefPoint(1e6, 1e6, 1e6), 0.0), EcefPoint(7e6, -1e6, 2e6)]
        roots = geoposition.enumerate_roots(sats, ranges, None, starts)
        assert len(roots) == 1
        assert_recovers(roots[0], truth, 1e-3)

    def test_single_start_at_truth(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        ranges = geoposition.forward_pseudoranges(truth, 0.0, sats)
        (root,) = geoposition.enumerate_roots(sats, ranges, SolverConfig(), [truth])
        assert root.position.distance_to(truth) < POSITION_TOL_M

    def test_failed_starts_are_skipped(self):
        truth = truth_on_equator()
        sats = well_spread_satellites(4)
        ranges = geoposition.forward_pseudoranges(truth, 1e-3, sats)
        roots = geoposition.enumerate_roots(sats, ranges, SolverConfig(max_iterations=1), [EcefPoint(0.0, 0.0, 0.0)])
        assert roots == []


class TestRandomScenarios:
    def test_hundred_four_satellite_roundtrips(self):
        rng = np.random.default_rng(DEFAULT_SEED)
        for _ in range(100):
            truth, bias = geoposition.random_receiver(rng)
            assert abs(truth.distance_to(EcefPoint(0.0, 0.0, 0.0)) - geoposition.EARTH_RADIUS) < 1e-6
            assert abs(bias) <= 1e-2
            sats = geoposition.satellites_visible_from(truth, 4, rng)
            fix = geoposition.solve_fix(sats, geoposition.forward_pseudoranges(truth, bias, sats))
            assert_recovers(fix, truth, bias)

    def test_visible_satellites_clear_the_mask(self):
        rng = np.random.default_rng(1)
        truth, _ = geoposition.random_receiver(rng)
        up = truth.as_array() / np.linalg.norm(truth.as_array())
        sats = geoposition.satellites_visible_from(truth, 8, rng, min_elevation_deg=15.0)
        assert [s.id for s in sats] == [f"S{i}" for i in range(1, 9)]
        for sat in sats:
            assert np.linalg.norm(sat.position.as_array()) == pytest.approx(geoposition.ORBIT_RADIUS)
            line = sat.position.as_array() - truth.as_array()
            assert np.dot(up, line) / np.linalg.norm(line) >= np.sin(np.radians(15.0)) - 1e-12

    def test_impossible_mask(self):
        rng = np.random.default_rng(2)
        truth, _ = geoposition.random_receiver(rng)
        with pytest.raises(ConfigError):
            geoposition.satellites_visible_from(truth, 4, rng, max_gdop=0.5, max_attempts=5)
