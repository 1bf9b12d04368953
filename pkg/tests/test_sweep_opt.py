import math

import numpy as np
import pydantic
import pytest

from services import (
    FOM_MBL_LIMIT,
    Axis,
    CapacityKind,
    Logic,
    MblParams,
    MeasurementSetup,
    SweepGrid,
    VblParams,
    capacity_vs_perror,
    default_mbl_grid,
    default_vbl_grid,
    evaluate_point,
    find_transition_point,
    fom_surface,
    minimize_fom,
    p_avg_mbl,
    p_avg_vbl,
    snr_region_map,
)
from services.sweep_opt import Spacing, dense_scan_transition, golden_section
from utils import ConfigurationError, NotFoundError


class TestEvaluatePoint:
    def test_sub_kt_witness(self):
        row = evaluate_point(Logic.VBL, 0.0, 1.0, 1.2, 4.0)
        assert row.power == pytest.approx(0.44)
        assert row.fom_paper == pytest.approx(0.4424, abs=1e-3)
        assert row.fom_true > row.fom_paper
        assert row.p_avg == pytest.approx(0.4996, abs=1e-4)

    def test_mbl_reference(self):
        row = evaluate_point(Logic.MBL, 2.0, 1.0, 1.0, 1.0)
        assert row.p_avg == pytest.approx(0.158655, abs=1e-6)
        assert row.capacity_paper == pytest.approx(0.36891, abs=5e-5)
        assert row.fom_paper == pytest.approx(5.421, rel=1e-3)

    def test_vbl_ignores_mean(self):
        assert evaluate_point(Logic.VBL, 7.0, 1.0, 2.0, 2.0) == evaluate_point(Logic.VBL, 0.0, 1.0, 2.0, 2.0)

    def test_zero_power_point(self):
        row = evaluate_point(Logic.MBL, 0.0, 1.0, 1.0, 0.0)
        assert row.capacity_paper == 0.0
        assert math.isnan(row.fom_paper)
        assert row.fom_for(CapacityKind.PAPER) == math.inf

    def test_physical_units(self):
        setup = MeasurementSetup()
        row = evaluate_point(Logic.MBL, 1.0, 1.0, 1.0, 0.5)
        physical = row.in_physical_units(setup)
        assert physical.mu == pytest.approx(setup.thermal_voltage)
        assert physical.power == pytest.approx(0.5 * setup.kt * setup.f_c)
        assert physical.fom_paper == pytest.approx(row.fom_paper * setup.kt)
        assert physical.p_avg == row.p_avg


class TestGrids:
    def test_default_sizes(self):
        assert default_mbl_grid().cardinality == 60
        assert default_vbl_grid().cardinality == 40 * 41

    def test_mbl_threshold_follows_mean(self):
        for cell in default_mbl_grid(count=7).cells():
            assert cell["v_th"] == cell["mu"] / 2.0

    def test_log_spacing(self):
        values = Axis(name="sigma1", min=1.0, max=4.0, count=3, spacing=Spacing.LOG).values()
        np.testing.assert_allclose(values, [1.0, 2.0, 4.0])

    def test_row_major_order(self):
        cells = list(default_vbl_grid(sigma1_count=2, v_th_count=3).cells())
        assert [c["sigma1"] for c in cells] == [1.05, 1.05, 1.05, 2.0, 2.0, 2.0]
        assert [c["v_th"] for c in cells[:3]] == [2.0, 4.0, 6.0]

    @pytest.mark.parametrize(
        "values",
        [
            dict(family=Logic.VBL, axes=(Axis(name="mu", min=0.1, max=1.0, count=3),), v_th=1.0),
            dict(family=Logic.VBL, axes=(Axis(name="sigma1", min=0.5, max=2.0, count=3),), v_th=1.0),
            dict(family=Logic.VBL, axes=(Axis(name="sigma1", min=1.0, max=2.0, count=3),)),
            dict(family=Logic.MBL, couple_threshold=False),
            dict(family=Logic.MBL, unknown=1.0),
        ],
    )
    def test_invalid_grid(self, values):
        with pytest.raises(ConfigurationError):
            SweepGrid.build(**values)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(count=1), dict(min=1.0, max=1.0), dict(min=0.0, spacing=Spacing.LOG)],
    )
    def test_invalid_axis(self, kwargs):
        with pytest.raises(pydantic.ValidationError):
            Axis(**{"name": "sigma1", "min": 0.5, "max": 2.0, "count": 5, **kwargs})


class TestFomSurface:
    def test_rows_match_single_point(self):
        result = fom_surface(default_vbl_grid(sigma1_count=4, v_th_count=5))
        assert len(result) == 20
        for row in result.rows:
            assert evaluate_point(Logic.VBL, 0.0, row.sigma0, row.sigma1, row.v_th) == row

    def test_independent_of_worker_count(self):
        grid = default_vbl_grid(sigma1_count=12, v_th_count=13)
        assert fom_surface(grid, workers=2).rows == fom_surface(grid, workers=1).rows

    def test_columns(self):
        columns = fom_surface(default_mbl_grid(count=3)).columns
        assert columns[:5] == ("family", "mu", "sigma0", "sigma1", "v_th")
        assert {"fom_paper", "fom_true", "capacity_paper", "mi_true"} <= set(columns)

    def test_mbl_fom_grows_with_mean(self):
        rows = fom_surface(default_mbl_grid()).rows
        values = [row.fom_paper for row in rows]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert values[0] == pytest.approx(4.3556, rel=5e-4)

    def test_vbl_sub_kt_region_exists(self):
        rows = fom_surface(default_vbl_grid()).rows
        assert min(row.fom_paper for row in rows) < 1.0


class TestCapacityVsPerror:
    def test_sorted_per_family(self):
        result = capacity_vs_perror(default_mbl_grid(count=10), default_vbl_grid(sigma1_count=4, v_th_count=4))
        assert [row.family for row in result.rows] == [Logic.MBL] * 10 + [Logic.VBL] * 16
        for family in Logic:
            p = [row.p_avg for row in result.rows if row.family is family]
            assert p == sorted(p)

    def test_capacity_collapses_near_half(self):
        grid = SweepGrid.build(family=Logic.MBL, axes=(Axis(name="mu", min=0.0, max=0.01, count=11),))
        rows = [row for row in capacity_vs_perror(grid).rows if 0.499 <= row.p_avg <= 0.5]
        assert rows
        assert all(row.capacity_paper <= 1e-3 for row in rows)

    def test_vbl_keeps_capacity_near_half(self):
        row = evaluate_point(Logic.VBL, 0.0, 1.0, 1.2, 4.0)
        assert row.p_avg == pytest.approx(0.4996, abs=1e-4)
        assert row.capacity_paper == pytest.approx(0.9945, abs=1e-3)

    def test_mbl_capacity_falls_with_error(self):
        rows = capacity_vs_perror(default_mbl_grid(count=20)).rows
        capacities = [row.capacity_paper for row in rows]
        assert capacities == sorted(capacities, reverse=True)


class TestGoldenSection:
    def test_interior_minimum(self):
        x, fx = golden_section(lambda v: (v - 0.3) ** 2, 0.0, 1.0, 1e-8)
        assert x == pytest.approx(0.3, abs=1e-6)
        assert fx == pytest.approx(0.0, abs=1e-12)

    def test_boundary_minimum_is_exact(self):
        assert golden_section(lambda v: v, 0.25, 1.0, 1e-6) == (0.25, 0.25)

    def test_plateau_resolves_to_bound(self):
        assert golden_section(lambda v: max(0.0, 0.6 - v), 0.0, 1.0, 1e-6) == (1.0, 0.0)
        assert golden_section(lambda v: max(0.0, v - 0.4), 0.0, 1.0, 1e-6) == (0.0, 0.0)

    def test_degenerate_interval(self):
        assert golden_section(lambda v: v * v, 2.0, 2.0, 1e-6) == (2.0, 4.0)


class TestMinimizeFom:
    def test_mbl_minimum_sits_at_smallest_mean(self):
        report = minimize_fom(Logic.MBL, {"mu": (0.01, 3.0)})
        assert report.family is Logic.MBL
        assert report.best_params["mu"] == pytest.approx(0.01, abs=1e-5)
        assert report.best_params["v_th"] == report.best_params["mu"] / 2.0
        assert report.boundary == ("mu",)
        assert report.best_fom == pytest.approx(FOM_MBL_LIMIT, rel=1e-4)
        assert report.best_fom >= FOM_MBL_LIMIT

    def test_vbl_beats_brute_force_grid(self):
        bounds = {"sigma1": (1.01, 2.0), "v_th": (1.0, 8.0)}
        report = minimize_fom(Logic.VBL, bounds)
        brute = min(
            evaluate_point(Logic.VBL, 0.0, 1.0, float(s1), float(v)).fom_for(CapacityKind.PAPER)
            for s1 in np.linspace(1.01, 2.0, 100)
            for v in np.linspace(1.0, 8.0, 100)
        )
        assert report.best_fom <= brute * (1.0 + 1e-9)
        assert report.best_fom == pytest.approx(0.0201, rel=1e-3)
        assert set(report.boundary) == {"sigma1", "v_th"}
        assert report.best_params["sigma1"] == 1.01
        assert report.best_params["v_th"] == 8.0
        corner = evaluate_point(Logic.VBL, 0.0, 1.0, 1.01, 8.0).fom_for(CapacityKind.PAPER)
        assert report.best_fom == corner
        assert report.evaluations > 0

    def test_reported_fom_matches_reported_point(self):
        report = minimize_fom(Logic.VBL, {"sigma1": (1.2, 1.8), "v_th": (2.0, 5.0)})
        p = report.best_params
        value = evaluate_point(Logic.VBL, 0.0, 1.0, p["sigma1"], p["v_th"]).fom_for(CapacityKind.PAPER)
        assert report.best_fom == value
        for name in report.boundary:
            assert p[name] in {"sigma1": (1.2, 1.8), "v_th": (2.0, 5.0)}[name]

    def test_true_information_objective(self):
        bounds = {"sigma1": (1.01, 2.0), "v_th": (1.0, 8.0)}
        paper = minimize_fom(Logic.VBL, bounds, capacity=CapacityKind.PAPER)
        true = minimize_fom(Logic.VBL, bounds, capacity=CapacityKind.TRUE_MI)
        assert true.capacity is CapacityKind.TRUE_MI
        assert true.best_fom > paper.best_fom

    def test_uncoupled_mbl_searches_threshold(self):
        report = minimize_fom(Logic.MBL, {"mu": (0.5, 2.0), "v_th": (0.0, 2.0)}, couple_threshold=False)
        coupled = minimize_fom(Logic.MBL, {"mu": (0.5, 2.0)})
        assert report.best_fom <= coupled.best_fom * (1.0 + 1e-9)

    @pytest.mark.parametrize(
        "family,bounds,tol",
        [
            (Logic.MBL, {}, 1e-6),
            (Logic.MBL, {"mu": (2.0, 1.0)}, 1e-6),
            (Logic.MBL, {"mu": (-1.0, 1.0)}, 1e-6),
            (Logic.VBL, {"sigma1": (0.5, 2.0), "v_th": (1.0, 2.0)}, 1e-6),
            (Logic.MBL, {"mu": (0.1, 1.0)}, 0.0),
        ],
    )
    def test_invalid_bounds(self, family, bounds, tol):
        with pytest.raises(ConfigurationError):
            minimize_fom(family, bounds, tol=tol)


class TestTransitionPoint:
    def test_default_crossing(self):
        point = find_transition_point()
        assert 3.0 < point.sigma1 < 3.15
        assert point.p_avg_mbl == pytest.approx(point.p_avg_vbl, abs=1e-8)

    def test_unique_crossing(self):
        point = find_transition_point()
        crossings = dense_scan_transition()
        assert len(crossings) == 1
        lo, hi = crossings[0]
        assert lo <= point.sigma1 <= hi

    def test_sign_change_direction(self):
        mbl, vbl = _pair(2.5)
        assert mbl < vbl
        mbl, vbl = _pair(4.0)
        assert mbl > vbl

    def test_no_crossing(self):
        with pytest.raises(NotFoundError):
            find_transition_point(sigma1_range=(1.0, 3.0))

    def test_bad_range(self):
        with pytest.raises(ConfigurationError):
            find_transition_point(sigma1_range=(0.5, 5.0))


def _pair(sigma1: float) -> tuple[float, float]:
    return (
        p_avg_mbl(MblParams(mu=2.0, sigma0=1.0, sigma1=sigma1, v_th=1.0)),
        p_avg_vbl(VblParams(sigma0=1.0, sigma1=sigma1, v_th=2.0)),
    )


class TestSnrRegionMap:
    def test_shape_and_order(self):
        result = snr_region_map((0.0, 3.0), (0.1, 3.0), n=11, resolution=5)
        assert len(result) == 25
        assert [row.sigma for row in result.rows[:5]] == [0.1] * 5
        assert result.rows[4].mu == 3.0

    def test_choice_follows_boundary(self):
        for row in snr_region_map((0.0, 3.0), (0.1, 3.0), n=11).rows:
            if row.mu > row.boundary_mu * 1.001:
                assert row.choice is Logic.MBL
            elif row.mu < row.boundary_mu * 0.999:
                assert row.choice is Logic.VBL

    def test_boundary_value(self):
        rows = snr_region_map((0.0, 1.0), (1.0, 2.0), n=11, resolution=2).rows
        assert rows[0].boundary_mu == pytest.approx(0.674200, abs=1e-6)

    @pytest.mark.parametrize(
        "mu_range,sigma_range,resolution",
        [((0.0, 3.0), (0.1, 3.0), 1), ((1.0, 1.0), (0.1, 3.0), 5), ((0.0, 3.0), (0.0, 3.0), 5)],
    )
    def test_invalid(self, mu_range, sigma_range, resolution):
        with pytest.raises(ConfigurationError):
            snr_region_map(mu_range, sigma_range, n=11, resolution=resolution)
