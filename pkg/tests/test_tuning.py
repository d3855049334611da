import io
from dataclasses import replace

import numpy as np
import pytest

from bandstop_workbench.errors import CalibrationInfeasibleError, OutOfRangeBiasError
from bandstop_workbench.engine import sweep
from bandstop_workbench.metrics import analyze, simulate_metrics
from bandstop_workbench.synthesis import VaractorState
from bandstop_workbench.topologies import LossModel, TopologyId, get_topology, select_topology
from bandstop_workbench.tuning import (
    CURVE_HEADER,
    CalibrationTarget,
    Calibrator,
    CbRule,
    CurveRow,
    TuningCurve,
    calibrate,
    device_loss,
    tuning_curve_bias,
    tuning_curve_caps,
)
from bandstop_workbench.varactor import MEASURED_BIAS_CASES, VaractorModel

V1 = TopologyId.PRACTICAL_FIG2_V1
F0 = 0.83e9
DELTA = 0.18


@pytest.fixture
def placeholder():
    return VaractorModel(cj0 = 9e-12, vj = 1.2, m = 0.9, cp = 1e-13, rs = 1.8, v_max = 40.0)

def strictly_increasing(values):
    return bool(np.all(np.diff(values) > 0))


class TestCalibrationTarget:
    def test_objective_vanishes_on_target(self, reference_design):
        m = simulate_metrics(get_topology(V1, reference_design), F0)
        target = CalibrationTarget(m.f_notch, m.fbw)
        assert target.objective(m) == 0.0

    def test_rejects_bad_bandwidth(self):
        with pytest.raises(ValueError):
            CalibrationTarget(F0, 1.5)


class TestCalibrate:
    """Nelder-Mead retuning of (C_a, C_b)."""

    @pytest.mark.slow
    def test_reaches_design_target(self, reference_design):
        winner, _ = select_topology(reference_design)
        result = calibrate(reference_design, winner, CalibrationTarget(F0, DELTA), show_progress = False)
        assert result.objective < 0.25 * result.initial_objective
        assert result.evaluations < 510
        assert result.metrics.dual_mode

        netlist = get_topology(winner, reference_design, state = result.state)
        remeasured = [analyze(sweep(netlist, np.linspace(0.4 * F0, 1.6 * F0, n))) for n in (801, 1201, 1601)]
        remeasured.append(simulate_metrics(netlist, F0))
        for m in (result.metrics, *remeasured):
            assert abs(m.f_notch - F0) / F0 <= 0.02
            assert abs(m.fbw - DELTA) <= 0.05
            assert m.rejection_db >= 40
            assert m.sb_rl_db <= 0.1
            assert m.f_notch == pytest.approx(result.metrics.f_notch, rel = 1e-3)

    def test_own_operating_point_is_optimal(self, reference_design, calibrated_state):
        m = simulate_metrics(get_topology(V1, reference_design, state = calibrated_state), F0)
        result = calibrate(
            reference_design,
            V1,
            CalibrationTarget(m.f_notch, m.fbw),
            state = calibrated_state,
            max_evals = 60,
            show_progress = False
        )
        assert result.initial_objective < 1e-6
        assert result.objective <= result.initial_objective
        assert result.state.ca == pytest.approx(calibrated_state.ca, rel = 1e-2, abs = 0)

    def test_degenerate_bounds(self, reference_design, calibrated_state):
        ca, cb = calibrated_state.ca, calibrated_state.cb
        result = calibrate(
            reference_design,
            V1,
            CalibrationTarget(F0, DELTA),
            bounds = ((ca, ca), (cb, cb)),
            state = calibrated_state,
            show_progress = False
        )
        assert result.evaluations == 1
        assert result.state == calibrated_state
        assert result.converged

    def test_infeasible_bounds(self, reference_design):
        with pytest.raises(CalibrationInfeasibleError) as info:
            calibrate(
                reference_design,
                V1,
                CalibrationTarget(F0, DELTA),
                bounds = ((1e-16, 1e-16), (1e-16, 1e-16)),
                show_progress = False
            )
        assert info.value.best_point == pytest.approx((1e-16, 1e-16), rel = 1e-9)
        assert 'last best point' in str(info.value)

    def test_counts_evaluations(self, reference_design):
        calibrator = Calibrator(reference_design, V1, CalibrationTarget(F0, DELTA), max_evals = 20, show_progress = False)
        result = calibrator.calibrate()
        assert result.evaluations == calibrator.evaluations
        assert result.objective <= result.initial_objective


class TestCapacitanceCurve:
    """Curves driven directly by C_a."""

    def test_fixed_rule_tunes_monotonically(self, reference_design, calibrated_state):
        grid = [3.0e-12 * 0.5 ** (i / 20) for i in range(21)]
        curve = tuning_curve_caps(reference_design, V1, grid, CbRule.FIXED, state = calibrated_state, show_progress = False)
        assert len(curve) == 21
        assert curve.gaps == ()
        f = curve.column('f_notch')
        assert strictly_increasing(f)
        assert 0.6e9 < f[0] < f[-1] < 0.8225e9
        assert all(row.metrics.f_notch == pytest.approx(row.metrics.modes[0], rel = 2e-3) for row in curve.rows)
        assert all(row.cb == calibrated_state.cb for row in curve.rows)

    @pytest.mark.slow
    def test_recalibrated_rule_holds_bandwidth(self, reference_design, calibrated_state):
        grid = np.geomspace(4.5e-12, 0.42e-12, 34)
        curve = tuning_curve_caps(reference_design, V1, grid, 'recalibrated', state = calibrated_state, show_progress = False)
        assert curve.gaps == ()
        f_notch, fbw = curve.column('f_notch'), curve.column('fbw')
        assert f_notch.min() < 0.65e9
        assert f_notch.max() > 1.08e9
        assert np.all((fbw > 0.16) & (fbw < 0.20))
        centers = np.array([row.metrics.f_center for row in curve.rows])
        assert strictly_increasing(centers)

    def test_single_point(self, reference_design, calibrated_state):
        curve = tuning_curve_caps(reference_design, V1, [calibrated_state.ca], 'recalibrated', state = calibrated_state, show_progress = False)
        assert len(curve) == 1
        assert curve.rows[0].metrics.fbw == pytest.approx(DELTA, abs = 5e-3)

    def test_non_monotone_grid(self, reference_design):
        with pytest.raises(ValueError):
            tuning_curve_caps(reference_design, V1, [1e-12, 2e-12, 1.5e-12], show_progress = False)

    def test_empty_grid(self, reference_design):
        with pytest.raises(ValueError):
            tuning_curve_caps(reference_design, V1, [], show_progress = False)


class TestBiasCurve:
    """Curves driven by the bias voltages."""

    def test_measured_cases(self, reference_design, placeholder):
        curve = tuning_curve_bias(reference_design, V1, placeholder, MEASURED_BIAS_CASES, show_progress = False)
        assert curve.control_unit == 'V'
        assert [row.control for row in curve.rows] == [v1 for v1, _ in MEASURED_BIAS_CASES]
        assert curve.gaps == ()
        f = curve.column('f_notch')
        centers = np.array([row.metrics.f_center for row in curve.rows])
        assert np.all(np.diff(centers) < 0)
        assert np.all((f > 0.6e9) & (f < 1.0e9))

    def test_device_resistance_lowers_rejection(self, reference_design, placeholder):
        lossy = tuning_curve_bias(reference_design, V1, placeholder, MEASURED_BIAS_CASES, show_progress = False)
        ideal = tuning_curve_bias(reference_design, V1, replace(placeholder, rs = 0.0), MEASURED_BIAS_CASES, show_progress = False)
        assert np.all(lossy.column('rejection_db') < ideal.column('rejection_db'))
        assert np.nanmax(lossy.column('rejection_db')) < np.nanmax(ideal.column('rejection_db'))

    def test_device_loss_splits_the_sites(self):
        loss = device_loss(LossModel(inductor_q = 80.0), 1.8, 3.6)
        assert (loss.rs_a, loss.rs_b) == (1.8, 3.6)
        assert loss.inductor_q == 80.0

    def test_out_of_range_row(self, reference_design, placeholder):
        with pytest.raises(OutOfRangeBiasError) as info:
            tuning_curve_bias(reference_design, V1, placeholder, [(10.0, 5.0), (5.0, 45.0)], show_progress = False)
        assert info.value.row == 1

    def test_non_monotone_v1(self, reference_design, placeholder):
        with pytest.raises(ValueError):
            tuning_curve_bias(reference_design, V1, placeholder, [(5.0, 5.0), (5.0, 10.0)], show_progress = False)


class TestCurveCsv:
    def test_header_and_gap_rows(self, reference_design):
        m = simulate_metrics(get_topology(V1, reference_design), F0)
        curve = TuningCurve((
            CurveRow(1e-12, 1e-12, 4e-13, m),
            CurveRow(2e-12, 2e-12, 4e-13, gap = 'no stopband'),
        ))
        out = io.StringIO()
        curve.write_csv(out)
        lines = out.getvalue().splitlines()
        assert lines[0] == ','.join(CURVE_HEADER)
        assert len(lines) == 3
        assert lines[1].split(',')[3] == f'{m.f_notch:.12g}'
        assert lines[2] == '2e-12,2e-12,4e-13,,,,,'
        assert curve.gaps == (1,)
        assert np.isnan(curve.column('fbw')[1])

    def test_state_type(self):
        with pytest.raises(ValueError):
            VaractorState(0.0, 1e-12)
