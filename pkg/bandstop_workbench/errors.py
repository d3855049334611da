'''Exception hierarchy shared by the synthesis, analysis and file layers.

Three families map onto the command line exit codes: `DesignError` (2),
`AnalysisError` (3) and `FormatError` (1).
'''


class WorkbenchError(Exception):
    pass

# design inputs

class DesignError(WorkbenchError, ValueError):
    pass

class InvalidOrderError(DesignError):
    pass

class UnsupportedOrderError(DesignError):
    pass

class InfeasibleCouplingError(DesignError):
    pass

class DegenerateCouplingError(DesignError):
    pass

class DegenerateNetworkError(DesignError):
    pass

class CcTooSmallError(DesignError):
    def __init__(self, cc, minimum_cc):
        self.cc = cc
        self.minimum_cc = minimum_cc
        super().__init__(
            f'C_C = {cc * 1e12:.4f} pF is infeasible, it must exceed (1+dk)*C = {minimum_cc * 1e12:.4f} pF'
        )

class UnknownVariantError(DesignError):
    pass

class NoViableTopologyError(DesignError):
    def __init__(self, message, report = None):
        self.report = report
        super().__init__(message)

class OutOfRangeBiasError(DesignError):
    def __init__(self, v, v_min, v_max, row = None):
        self.v = v
        self.v_min = v_min
        self.v_max = v_max
        self.row = row
        where = f' (row {row})' if row is not None else ''
        super().__init__(f'bias {v:g} V is outside [{v_min:g}, {v_max:g}] V{where}')

class UnreachableCapacitanceError(DesignError):
    def __init__(self, c_target, c_min, c_max):
        self.c_target = c_target
        self.c_min = c_min
        self.c_max = c_max
        super().__init__(
            f'{c_target * 1e12:.4f} pF is outside the achievable range '
            f'[{c_min * 1e12:.4f}, {c_max * 1e12:.4f}] pF'
        )

# simulation and analysis

class AnalysisError(WorkbenchError):
    pass

class FloatingNodeError(AnalysisError):
    def __init__(self, node):
        self.node = node
        super().__init__(f'node {node!r} has no path to ground')

class LineResonanceError(AnalysisError):
    def __init__(self, f):
        self.f = f
        super().__init__(f'transmission line pole at {f:.9g} Hz')

class GridMismatchError(AnalysisError):
    pass

class NoStopbandError(AnalysisError):
    pass

class SweepTooNarrowError(AnalysisError):
    pass

class DisjointRangeError(AnalysisError):
    pass

class CalibrationInfeasibleError(AnalysisError):
    def __init__(self, message, best_point = None):
        self.best_point = best_point
        if best_point is not None:
            ca, cb = best_point
            message += f', last best point C_a = {ca:.6g} F, C_b = {cb:.6g} F'
        super().__init__(message)

# files

class FormatError(WorkbenchError, ValueError):
    pass

class TouchstoneParseError(FormatError):
    def __init__(self, message, line = None):
        self.line = line
        prefix = f'line {line}: ' if line is not None else ''
        super().__init__(prefix + message)

class DesignFileError(FormatError):
    pass

class ProfileError(FormatError):
    pass
