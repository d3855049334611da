import csv
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .errors import AnalysisError, CalibrationInfeasibleError, DesignError
from .metrics import CALIBRATION_POINTS, CALIBRATION_SPAN, simulate_metrics
from .synthesis import VaractorState
from .topologies import LossModel, get_topology
from .utils import default, progress_bar
from .varactor import BiasPoint, bias_capacitances

logger = logging.getLogger(__name__)

PENALTY = 1e6
CURVE_HEADER = ('control', 'ca_f', 'cb_f', 'f_notch_hz', 'rejection_db', 'fbw', 'pb_il_db', 'sb_rl_db')


class CbRule(str, Enum):
    FIXED = 'fixed'
    RECALIBRATED = 'recalibrated'


@dataclass(frozen = True)
class CalibrationTarget:
    f0_target: float
    fbw_target: float
    weight_fbw: float = 0.25

    def __post_init__(self):
        if not self.f0_target > 0:
            raise DesignError(f'target frequency must be positive, got {self.f0_target}')
        if not 0 < self.fbw_target < 1:
            raise DesignError(f'target bandwidth must lie in (0, 1), got {self.fbw_target}')
        if self.weight_fbw < 0:
            raise DesignError(f'bandwidth weight must be >= 0, got {self.weight_fbw}')

    def objective(self, m):
        return (
            ((m.f_notch - self.f0_target) / self.f0_target) ** 2 +
            self.weight_fbw * ((m.fbw - self.fbw_target) / self.fbw_target) ** 2
        )


@dataclass(frozen = True)
class CalibrationResult:
    state: VaractorState
    metrics: object
    objective: float
    initial_objective: float
    evaluations: int
    converged: bool


class Calibrator:
    '''Bounded Nelder-Mead over the normalized capacitances (C_a/C_a0, C_b/C_b0).

    Every evaluation sweeps [0.4, 1.6] x f0_target (801 points, widened when the
    stopband edges fall outside); points without a stopband score `penalty`.
    '''
    def __init__(
        self,
        design,
        topology,
        target,
        *,
        bounds = None,
        state = None,
        loss = None,
        max_evals = 500,
        xatol = 1e-4,
        fatol = 1e-12,
        penalty = PENALTY,
        span = CALIBRATION_SPAN,
        points = CALIBRATION_POINTS,
        show_progress = True
    ):
        self.design = design
        self.topology = topology
        self.target = target
        self.loss = default(loss, LossModel)
        self.x0 = default(state, lambda: design.initial_state)

        ca0, cb0 = self.x0.ca, self.x0.cb
        self.bounds = default(bounds, ((0.2 * ca0, 5 * ca0), (0.2 * cb0, 5 * cb0)))
        for lo, hi in self.bounds:
            assert 0 < lo <= hi, 'calibration bounds must be positive and non-empty'

        self.max_evals = max_evals
        self.xatol = xatol
        self.fatol = fatol
        self.penalty = penalty
        self.span = span
        self.points = points
        self.show_progress = show_progress

        self.evaluations = 0
        self.best = (math.inf, None)
        self._pbar = None

    @property
    def scale(self):
        return np.array([self.x0.ca, self.x0.cb])

    def measure(self, ca, cb):
        netlist = get_topology(self.topology, self.design, loss = self.loss, state = VaractorState(ca, cb))
        return simulate_metrics(netlist, self.target.f0_target, span = self.span, points = self.points)

    def objective(self, x):
        ca, cb = np.asarray(x) * self.scale
        try:
            value = self.target.objective(self.measure(ca, cb))
        except AnalysisError:
            value = self.penalty

        self.evaluations += 1
        if self._pbar is not None:
            self._pbar.update(1)
        # ties keep the latest point
        if value <= self.best[0]:
            self.best = (value, (float(ca), float(cb)))
        logger.debug('evaluated ca=%.6g cb=%.6g J=%.6g', ca, cb, value)
        return value

    def calibrate(self):
        normalized = [(lo / s, hi / s) for (lo, hi), s in zip(self.bounds, self.scale)]
        lower, upper = np.array(normalized).T
        x0 = np.clip(np.ones(2), lower, upper)

        with progress_bar(total = self.max_evals, desc = 'calibrating', disable = not self.show_progress) as pbar:
            self._pbar = pbar
            initial = self.objective(x0)
            if np.all(lower == upper):
                x, value, converged = x0, initial, True
            else:
                result = minimize(
                    self.objective,
                    x0,
                    method = 'Nelder-Mead',
                    bounds = normalized,
                    options = {'xatol': self.xatol, 'fatol': self.fatol, 'maxfev': self.max_evals}
                )
                x, value, converged = np.clip(result.x, lower, upper), float(result.fun), bool(result.success)
            self._pbar = None

        ca, cb = (float(v) for v in x * self.scale)
        if value >= self.penalty:
            raise CalibrationInfeasibleError(
                f'no point inside the bounds produced a stopband in {self.evaluations} evaluations',
                best_point = self.best[1]
            )
        if not converged:
            logger.warning('calibration stopped after %d evaluations without meeting the tolerances', self.evaluations)

        m = self.measure(ca, cb)
        logger.info('calibrated ca=%.6g F cb=%.6g F: f_notch=%.6g Hz fbw=%.4f (%d evaluations)', ca, cb, m.f_notch, m.fbw, self.evaluations)
        return CalibrationResult(
            state = VaractorState(ca, cb),
            metrics = m,
            objective = value,
            initial_objective = initial,
            evaluations = self.evaluations,
            converged = converged
        )


def calibrate(design, topology, target, bounds = None, **kwargs):
    return Calibrator(design, topology, target, bounds = bounds, **kwargs).calibrate()


@dataclass(frozen = True)
class CurveRow:
    control: float
    ca: float
    cb: float
    metrics: object = None
    gap: str = None
    bias: BiasPoint = None

    @property
    def is_gap(self):
        return self.metrics is None


@dataclass(frozen = True)
class TuningCurve:
    rows: tuple
    control_unit: str = 'F'

    def __len__(self):
        return len(self.rows)

    @property
    def gaps(self):
        return tuple(i for i, row in enumerate(self.rows) if row.is_gap)

    def column(self, name):
        return np.array([getattr(row.metrics, name) if not row.is_gap else np.nan for row in self.rows])

    def write_csv(self, f):
        writer = csv.writer(f, lineterminator = '\n')
        writer.writerow(CURVE_HEADER)
        for row in self.rows:
            values = [row.control, row.ca, row.cb]
            if not row.is_gap:
                m = row.metrics
                values += [m.f_notch, m.rejection_db, m.fbw, m.pb_il_db, m.sb_rl_db]
            cells = [f'{v:.12g}' for v in values]
            writer.writerow(cells + [''] * (len(CURVE_HEADER) - len(cells)))


def _check_monotone(values, what):
    steps = np.diff(np.asarray(values, dtype = float))
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise ValueError(f'{what} must be strictly monotone')

def _measure_row(design, topology, loss, ca, cb, f_center):
    netlist = get_topology(topology, design, loss = loss, state = VaractorState(ca, cb))
    return simulate_metrics(netlist, f_center)

def _fixed_row(design, topology, loss, ca, cb):
    try:
        return CurveRow(ca, ca, cb, _measure_row(design, topology, loss, ca, cb, design.spec.f0))
    except AnalysisError as e:
        return CurveRow(ca, ca, cb, gap = str(e))

def _recalibrated_row(design, topology, loss, ca, cb_prev, f_prev, fbw_target, window):
    def mismatch(log_cb):
        try:
            m = _measure_row(design, topology, loss, ca, math.exp(log_cb), f_prev)
        except AnalysisError:
            return PENALTY
        return ((m.fbw - fbw_target) / fbw_target) ** 2

    result = minimize_scalar(
        mismatch,
        bounds = (math.log(cb_prev / window), math.log(cb_prev * window)),
        method = 'bounded',
        options = {'xatol': 1e-5, 'maxiter': 500}
    )
    cb = math.exp(result.x)
    try:
        return CurveRow(ca, ca, cb, _measure_row(design, topology, loss, ca, cb, f_prev))
    except AnalysisError as e:
        return CurveRow(ca, ca, cb, gap = str(e))

def tuning_curve_caps(
    design,
    topology,
    ca_grid,
    cb_rule = CbRule.FIXED,
    *,
    state = None,
    loss = None,
    fbw_target = None,
    window = 2.0,
    show_progress = True
):
    '''Sweeps C_a over `ca_grid` and resolves C_b per row.

    `fixed` holds C_b at the operating point. `recalibrated` picks the C_b that
    restores `fbw_target` (default: the design bandwidth), searching a factor
    `window` around the neighbouring row; rows are solved outward from the grid
    point nearest the operating C_a. Failed rows are kept as gaps.
    '''
    ca_grid = [float(c) for c in ca_grid]
    if not ca_grid:
        raise ValueError('ca_grid is empty')
    _check_monotone(ca_grid, 'ca_grid')
    cb_rule = CbRule(cb_rule)
    state = default(state, lambda: design.initial_state)
    loss = default(loss, LossModel)
    n = len(ca_grid)

    with progress_bar(total = n, desc = 'tuning', disable = not show_progress) as pbar:
        if cb_rule == CbRule.FIXED:
            rows = []
            for ca in ca_grid:
                rows.append(_fixed_row(design, topology, loss, ca, state.cb))
                pbar.update(1)
            return TuningCurve(tuple(rows))

        fbw_target = default(fbw_target, design.spec.delta)
        start = int(np.argmin(np.abs(np.log(np.array(ca_grid) / state.ca))))
        rows = [None] * n

        def solve(i, cb_prev, f_prev):
            row = _recalibrated_row(design, topology, loss, ca_grid[i], cb_prev, f_prev, fbw_target, window)
            rows[i] = row
            pbar.update(1)
            if row.is_gap:
                logger.warning('no stopband at ca=%.6g F, row %d kept as a gap', row.ca, i)
                return cb_prev, f_prev
            return row.cb, row.metrics.f_notch

        anchor = solve(start, state.cb, design.spec.f0)
        for direction in (-1, 1):
            carry = anchor
            i = start + direction
            while 0 <= i < n:
                carry = solve(i, *carry)
                i += direction

    return TuningCurve(tuple(rows))

def device_loss(loss, rs_a, rs_b):
    '''`loss` with the varactor sites carrying the device resistances.'''
    return replace(loss, varactor_rs = rs_a, varactor_rs_b = rs_b)

def tuning_curve_bias(design, topology, model, bias_grid, *, loss = None, show_progress = True):
    '''Tuning curve driven by bias voltages; the control column is V1.

    The varactor sites take their series resistance from `model` (single
    devices on C_a, anti-series pairs on C_b); `loss` contributes the inductor Q.
    '''
    biases = [b if isinstance(b, BiasPoint) else BiasPoint(*b) for b in bias_grid]
    if not biases:
        raise ValueError('bias_grid is empty')
    _check_monotone([b.v1 for b in biases], 'V1 across the bias grid')
    loss = default(loss, LossModel)

    caps = [bias_capacitances(model, b, row = i) for i, b in enumerate(biases)]

    rows = []
    for bias, (ca, cb, rs_a, rs_b) in zip(progress_bar(biases, desc = 'bias points', disable = not show_progress), caps):
        row = _fixed_row(design, topology, device_loss(loss, rs_a, rs_b), ca, cb)
        rows.append(CurveRow(bias.v1, ca, cb, row.metrics, row.gap, bias))
    return TuningCurve(tuple(rows), control_unit = 'V')
