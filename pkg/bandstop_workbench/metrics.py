import logging
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .engine import sweep
from .errors import NoStopbandError, SweepTooNarrowError

logger = logging.getLogger(__name__)

EDGE_DB = -3.0
MIN_ANALYSIS_POINTS = 201

# notch refinement
REFINE_POINTS = 201
DEPTH_FLOOR = 1e-15
EXACT_ZERO_DB = 60.0
NOTCH_TIE_DB = 0.5

CALIBRATION_SPAN = (0.4, 1.6)
CALIBRATION_POINTS = 801
WIDEN_LO = 0.75
WIDEN_HI = 1.25


@dataclass(frozen = True)
class StopbandMetrics:
    f_notch: float
    rejection_db: float
    f_lo: float
    f_hi: float
    fbw: float
    pb_il_db: float
    sb_rl_db: float
    modes: tuple = ()

    @property
    def f_center(self):
        # midpoint of the -3 dB edges, continuous even when the deepest zero hops
        return 0.5 * (self.f_lo + self.f_hi)

    @property
    def dual_mode(self):
        return len(self.modes) >= 2

    @property
    def single_stopband(self):
        return all(self.f_lo <= f <= self.f_hi for f in self.modes)


@dataclass(frozen = True)
class Tolerance:
    abs: float = 0.0
    rel: float = 0.0

    def allows(self, a, b):
        return abs(a - b) <= max(self.abs, self.rel * abs(b))


DEFAULT_TOLERANCES = {
    'f_notch': Tolerance(rel = 0.01),
    'rejection_db': Tolerance(abs = 1.0),
    'f_lo': Tolerance(rel = 0.01),
    'f_hi': Tolerance(rel = 0.01),
    'fbw': Tolerance(abs = 0.01),
    'pb_il_db': Tolerance(abs = 0.1),
    'sb_rl_db': Tolerance(abs = 0.1),
    'modes': Tolerance(abs = 0),
}


@dataclass(frozen = True)
class FieldComparison:
    field: str
    a: float
    b: float
    deviation: float
    tolerance: Tolerance
    passed: bool


@dataclass(frozen = True)
class ComparisonReport:
    fields: tuple

    @property
    def passed(self):
        return all(f.passed for f in self.fields)

    @property
    def failures(self):
        return tuple(f.field for f in self.fields if not f.passed)


class _LocalFit:
    '''Complex quadratic through S-parameter samples j-1, j, j+1, in steps of the right-hand spacing.'''

    def __init__(self, f, j):
        self.origin = f[j]
        self.step = f[j + 1] - f[j]
        self.t = (f[j - 1:j + 2] - self.origin) / self.step
        self._vander = np.vander(self.t, 3)

    def coeffs(self, s, j):
        return np.linalg.solve(self._vander, s[j - 1:j + 2])

    def minimum(self, s, j):
        '''(frequency, magnitude) of the smallest |fit| on [f[j-1], f[j+1]].'''
        c = self.coeffs(s, j)
        trial = np.linspace(self.t[0], self.t[2], REFINE_POINTS)
        roots = np.roots(c)
        if roots.size:
            trial = np.concatenate([trial, np.clip(roots.real, self.t[0], self.t[2])])
        mag = np.abs(np.polyval(c, trial))
        i = int(np.argmin(mag))
        return self.origin + trial[i] * self.step, float(mag[i])

    def at(self, s, j, freq):
        return complex(np.polyval(self.coeffs(s, j), (freq - self.origin) / self.step))


def _depth_db(magnitude):
    return float(-20 * np.log10(max(magnitude, DEPTH_FLOOR)))

def _crossing(f, y, i):
    # linear interpolation of the -3 dB level between grid points i and i+1
    return f[i] + (EDGE_DB - y[i]) * (f[i + 1] - f[i]) / (y[i + 1] - y[i])

def _pick_notch(f, s21, y, k):
    '''Grid index and refined (frequency, |S21|) of the notch.

    Every local minimum inside a stopband is refined on complex S21. The
    deepest wins; minima within NOTCH_TIE_DB of it, or all deeper than
    EXACT_ZERO_DB, are equally deep and the lowest frequency is taken.
    '''
    peaks, _ = find_peaks(-y)
    candidates = np.union1d(peaks[y[peaks] <= EDGE_DB], [k])
    refined = [_LocalFit(f, j).minimum(s21, j) for j in candidates]
    depth = np.array([min(_depth_db(mag), EXACT_ZERO_DB) for _, mag in refined])
    i = int(np.flatnonzero(depth >= depth.max() - NOTCH_TIE_DB)[0])
    return int(candidates[i]), refined[i]

def find_modes(resp, threshold_db = 20.0):
    '''Frequencies of local |S21| minima deeper than `threshold_db`.'''
    depth = -resp.db('s21')
    peaks, _ = find_peaks(depth, height = threshold_db)
    return tuple(float(f) for f in resp.freqs[peaks])

def analyze(resp, passband_margin = 0.2, mode_threshold_db = 20.0):
    if len(resp) < MIN_ANALYSIS_POINTS:
        raise ValueError(f'stopband analysis needs at least {MIN_ANALYSIS_POINTS} points, got {len(resp)}')

    f = resp.freqs
    y = resp.db('s21')
    k = int(np.argmin(y))
    if y[k] > EDGE_DB:
        raise NoStopbandError(f'|S21| never drops below {EDGE_DB:g} dB (minimum {y[k]:.3f} dB)')
    if k in (0, f.size - 1):
        raise SweepTooNarrowError(f'|S21| is still falling at the sweep edge {f[k]:.6g} Hz')

    k, (f_notch, s21_notch) = _pick_notch(f, resp.s21, y, k)

    above_lo = np.flatnonzero(y[:k] > EDGE_DB)
    above_hi = np.flatnonzero(y[k + 1:] > EDGE_DB)
    if above_lo.size == 0 or above_hi.size == 0:
        raise SweepTooNarrowError(
            f'the -3 dB stopband around {f_notch:.6g} Hz is not bracketed by [{f[0]:.6g}, {f[-1]:.6g}] Hz'
        )
    f_lo = float(_crossing(f, y, above_lo[-1]))
    f_hi = float(_crossing(f, y, k + above_hi[0]))

    fit = _LocalFit(f, k)
    if not f_lo < f_notch < f_hi:
        # coarse grid: the minimum shares a grid interval with an edge
        f_notch = float(np.clip(f_notch, f_lo, f_hi))
        s21_notch = abs(fit.at(resp.s21, k, f_notch))

    passband = (f <= (1 - passband_margin) * f_lo) | (f >= (1 + passband_margin) * f_hi)
    if not passband.any():
        raise SweepTooNarrowError(
            f'no passband samples outside [{(1 - passband_margin) * f_lo:.6g}, {(1 + passband_margin) * f_hi:.6g}] Hz'
        )

    return StopbandMetrics(
        f_notch = float(f_notch),
        rejection_db = _depth_db(s21_notch),
        f_lo = f_lo,
        f_hi = f_hi,
        fbw = (f_hi - f_lo) / f_notch,
        pb_il_db = float(np.max(-y[passband])),
        sb_rl_db = _depth_db(abs(fit.at(resp.s11, k, f_notch))),
        modes = find_modes(resp, mode_threshold_db)
    )

def simulate_metrics(
    netlist,
    f_center,
    *,
    span = CALIBRATION_SPAN,
    points = CALIBRATION_POINTS,
    widen = 3,
    passband_margin = 0.2,
    mode_threshold_db = 20.0
):
    '''Sweeps `span` around `f_center` and analyzes it, widening the span when the edges fall outside.'''
    lo, hi = span
    for attempt in range(widen + 1):
        grid = np.linspace(lo * f_center, hi * f_center, points)
        try:
            return analyze(sweep(netlist, grid), passband_margin, mode_threshold_db)
        except SweepTooNarrowError:
            if attempt == widen:
                raise
            lo, hi = lo * WIDEN_LO, hi * WIDEN_HI
            logger.debug('widening sweep to [%.3g, %.3g] x %.6g Hz', lo, hi, f_center)

def compare(metrics_a, metrics_b, tolerances = None):
    tolerances = DEFAULT_TOLERANCES if tolerances is None else tolerances
    fields = []
    for name, tolerance in tolerances.items():
        a, b = getattr(metrics_a, name), getattr(metrics_b, name)
        if name == 'modes':
            a, b = len(a), len(b)
        fields.append(FieldComparison(
            field = name,
            a = a,
            b = b,
            deviation = abs(a - b),
            tolerance = tolerance,
            passed = tolerance.allows(a, b)
        ))
    return ComparisonReport(tuple(fields))
