import math
import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripartite_esd.experiments import (
    DynamicsRecord,
    Measure,
    Onset,
    Scenario,
    analytic_ghz_w_fill,
    default_time_grid,
    evaluate_point,
    evolve,
    family_symmetry_generators,
    find_esd_onset,
    ghz_w_scan,
    plot_points,
    read_csv,
    run_dynamics,
    write_csv,
    write_svg_plot,
)
from tripartite_esd.measures import esd_onset_g_theta, gmc_x
from tripartite_esd.roof import BoundKind, RoofOptions, check_symmetries
from tripartite_esd.states import Kind, StateFamily, make_state

COS_HALF = 1 / math.sqrt(2)


def g_scenario(cos, **kw):
    return Scenario(StateFamily(Kind.G_THETA, math.acos(cos)), measure=Measure.GMC_X_AUTO, **kw)


def rec(t, v, kind=BoundKind.CERTIFIED_LOWER_BOUND, frac=1.0):
    return DynamicsRecord(t, v, kind, frac)


class TestScenario:
    def test_default_grid(self):
        grid = default_time_grid()
        assert grid[0] == 0.0 and grid[-1] == 3.0 and len(grid) == 61

    @pytest.mark.parametrize("grid", [[], [0.0, 0.0], [0.2, 0.1], [-0.1, 0.5]])
    def test_bad_grid(self, grid):
        with pytest.raises(ValueError):
            Scenario(StateFamily(Kind.W), time_grid=grid)

    def test_measure_from_string(self):
        s = Scenario(StateFamily(Kind.W), measure="gmc-x-auto")
        assert s.measure is Measure.GMC_X_AUTO

    def test_theta_passthrough(self):
        assert Scenario(StateFamily(Kind.W_THETA, 0.4)).theta == 0.4


class TestSymmetryTables:
    @pytest.mark.parametrize("kind", list(Kind))
    @pytest.mark.parametrize("t", [0.0, 0.7, 2.5])
    def test_generators_survive_damping(self, kind, t):
        rho = evolve(make_state(StateFamily(kind, 0.83)), t)
        check_symmetries(rho, family_symmetry_generators(kind))


class TestGmcDynamics:
    def test_balanced_g_theta(self):
        grid = [0.0, 0.3, 0.6, 0.656, 0.7, 1.5, 3.0]
        recs = run_dynamics(g_scenario(COS_HALF, time_grid=grid))
        assert recs[0].value == pytest.approx(1.0, abs=1e-12)
        assert all(r.value > 0 for r in recs[:3])
        assert all(r.value == 0 for r in recs[3:])
        assert all(r.bound_kind is BoundKind.EXACT_ANALYTIC for r in recs)

    def test_non_x_family_rejected(self):
        scen = Scenario(StateFamily(Kind.W_THETA, 0.5), time_grid=[0.0, 0.2], measure=Measure.GMC_X_AUTO)
        with pytest.raises(ValueError, match="fill-roof"):
            run_dynamics(scen)

    @pytest.mark.parametrize("cos,want", [(COS_HALF, 0.6553), (0.88, 0.3838)])
    def test_onsets(self, cos, want):
        onset = find_esd_onset(g_scenario(cos))
        assert onset.t_over_tau == pytest.approx(want, abs=1e-4)
        assert onset.t_over_tau == pytest.approx(esd_onset_g_theta(math.acos(cos)), abs=1e-6)
        assert onset.bound_kind is BoundKind.EXACT_ANALYTIC

    @pytest.mark.parametrize("cos", [0.17, 0.31, 1 / math.sqrt(10)])
    def test_no_onset(self, cos):
        assert not find_esd_onset(g_scenario(cos)).exists

    def test_threshold_straddle(self):
        assert find_esd_onset(g_scenario(0.32)).exists
        assert not find_esd_onset(g_scenario(0.31)).exists

    def test_random_thetas_match_inversion(self):
        rng = np.random.default_rng(8)
        found = 0
        while found < 20:
            theta = float(rng.uniform(0.01, math.pi / 2 - 0.01))
            if abs(math.tan(theta)) >= 3:
                continue
            got = find_esd_onset(Scenario(StateFamily(Kind.G_THETA, theta), measure=Measure.GMC_X_AUTO))
            assert got.t_over_tau == pytest.approx(esd_onset_g_theta(theta), abs=1e-6)
            found += 1

    def test_immediate_death(self):
        assert find_esd_onset(g_scenario(1.0)).t_over_tau == 0.0


class TestFillPath:
    def test_pure_point_is_exact(self):
        scen = Scenario(StateFamily(Kind.W_THETA, math.acos(1 / math.sqrt(3))), time_grid=[0.0])
        (r,) = run_dynamics(scen)
        assert r.value == pytest.approx(8 / 9, abs=1e-12)
        assert r.bound_kind is BoundKind.EXACT_ANALYTIC

    def test_heuristic_onset_from_records(self):
        scen = Scenario(StateFamily(Kind.SIGMA_THETA, 0.3), time_grid=[0.0, 1.0, 2.0, 3.0])
        recs = [rec(0, 0.9), rec(1, 5e-5), rec(2, 2e-4), rec(3, 0.0)]
        onset = find_esd_onset(scen, records=recs)
        assert onset == Onset(3, BoundKind.HEURISTIC)
        recs[2] = rec(2, 1e-5)
        assert find_esd_onset(scen, records=recs).t_over_tau == 1
        recs[3] = rec(3, 1e-3)
        assert not find_esd_onset(scen, records=recs).exists

    @pytest.mark.slow
    def test_w_theta_decays_without_death(self):
        scen = Scenario(StateFamily(Kind.W_THETA, math.acos(1 / math.sqrt(3))), time_grid=[0.0, 0.5, 1.0, 2.0])
        vals = [r.value for r in run_dynamics(scen)]
        assert vals[0] == pytest.approx(8 / 9, abs=1e-12)
        assert all(v > 1e-4 for v in vals)
        assert all(b < a for a, b in zip(vals, vals[1:]))

    @pytest.mark.slow
    def test_grid_points_independent_of_schedule(self):
        scen = Scenario(StateFamily(Kind.W_THETA, 0.7), time_grid=[0.4, 0.8],
                        roof=RoofOptions(inner_restarts=10, outer_iters=5))
        full = run_dynamics(scen)
        psi0 = make_state(scen.family)
        alone = evaluate_point(scen, evolve(psi0, 0.8), 1)
        assert alone == full[1]

    @pytest.mark.slow
    @pytest.mark.parametrize("t", [0.3, 0.6, 0.65, 0.7])
    def test_fill_and_gmc_agree_on_sign(self, t):
        # both vanish after the onset near 0.6553; before it both are positive
        rho = evolve(make_state(StateFamily(Kind.G_THETA, math.pi / 4)), t)
        scen = Scenario(StateFamily(Kind.G_THETA, math.pi / 4), time_grid=[t])
        r = evaluate_point(scen, rho, 0)
        gmc = gmc_x(rho)
        assert r.bound_kind is BoundKind.CERTIFIED_LOWER_BOUND
        if gmc > 1e-3:
            assert r.value > 0
        else:
            assert gmc == 0 and r.value < 1e-4


class TestScan:
    def test_analytic_endpoints(self):
        assert analytic_ghz_w_fill(1.0) == 1.0
        assert analytic_ghz_w_fill(0.0) == pytest.approx(8 / 9)
        assert analytic_ghz_w_fill(0.5) == pytest.approx(7.25 / 9)

    def test_endpoints(self):
        rows = ghz_w_scan([0.0, 1.0])
        assert rows[0][0] == 0.0 and rows[0][1] == pytest.approx(8 / 9, abs=5e-3)
        assert rows[1][2] == 1.0 and rows[1][1] == pytest.approx(1.0, abs=5e-3)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            ghz_w_scan([1.5])


record_st = st.builds(
    DynamicsRecord,
    st.floats(0, 10, allow_nan=False),
    st.floats(0, 1, allow_nan=False),
    st.sampled_from(list(BoundKind)),
    st.floats(0, 1, allow_nan=False),
)


class TestOutput:
    def test_csv_layout(self, tmp_path):
        path = tmp_path / "out.csv"
        write_csv([rec(0.0, 1.0), rec(0.05, 0.5), rec(0.1, 1 / 3)], path)
        raw = path.read_bytes()
        assert b"\r" not in raw
        lines = raw.decode().splitlines()
        assert len(lines) == 4
        assert lines[0] == "t_over_tau,value,bound_kind,converged_fraction"
        assert lines[3] == "0.1,0.333333333333,certified-lower-bound,1"

    def test_csv_empty(self, tmp_path):
        with pytest.raises(ValueError):
            write_csv([], tmp_path / "x.csv")

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError):
            write_csv([rec(0, 1)], tmp_path / "missing" / "x.csv")

    @given(st.lists(record_st, min_size=1, max_size=20))
    @settings(max_examples=50, deadline=None)
    def test_csv_round_trip(self, tmp_path_factory, records):
        path = tmp_path_factory.mktemp("csv") / "r.csv"
        write_csv(records, path)
        back = read_csv(path)
        assert len(back) == len(records)
        for a, b in zip(records, back):
            assert b.bound_kind is a.bound_kind
            for x, y in ((a.t_over_tau, b.t_over_tau), (a.value, b.value),
                         (a.converged_fraction, b.converged_fraction)):
                assert y == float(format(x, ".12g"))
                assert y == pytest.approx(x, rel=1e-11, abs=1e-300)

    def test_log_scale_drops_zeros(self):
        recs = [rec(0, 0.5), rec(1, 0.1), rec(2, 0.0), rec(3, 0.0)]
        assert [p[0] for p in plot_points(recs, "log")] == [0, 1]
        assert len(plot_points(recs, "linear")) == 4

    def test_svg_log_scale_file(self, tmp_path):
        with_zeros = [rec(0, 0.5), rec(1, 0.1), rec(2, 0.0)]
        write_svg_plot(with_zeros, tmp_path / "a.svg", y_scale="log")
        write_svg_plot(with_zeros[:2], tmp_path / "b.svg", y_scale="log")
        a = (tmp_path / "a.svg").read_text()
        assert a.lstrip().startswith("<?xml") and "<svg" in a
        # zero points contribute nothing, so the drawings coincide
        assert a == (tmp_path / "b.svg").read_text()

    def test_outliers_marked(self, tmp_path):
        assert rec(0, 0.1, frac=0.1).outlier and not rec(0, 0.1, frac=0.5).outlier
        recs = [rec(0, 0.5), rec(1, 0.3, frac=0.05), rec(2, 0.1)]
        write_svg_plot(recs, tmp_path / "o.svg")
        write_svg_plot([rec(0, 0.5), rec(1, 0.3), rec(2, 0.1)], tmp_path / "p.svg")
        assert (tmp_path / "o.svg").read_text() != (tmp_path / "p.svg").read_text()

    def test_three_labelled_series(self, tmp_path):
        labels = ["cos=0.7071", "cos=0.88", "cos=0.17"]
        series = []
        for cos in (COS_HALF, 0.88, 0.17):
            series.append(run_dynamics(g_scenario(cos, time_grid=default_time_grid(1.0, 0.1))))
        write_svg_plot(series, tmp_path / "fig.svg", y_scale="log", labels=labels)
        text = (tmp_path / "fig.svg").read_text()
        for lab in labels:
            assert len(re.findall(re.escape(lab), text)) == 1

    def test_bad_scale(self, tmp_path):
        with pytest.raises(ValueError):
            write_svg_plot([rec(0, 1)], tmp_path / "x.svg", y_scale="symlog")
