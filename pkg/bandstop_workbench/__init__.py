from .synthesis import (
    FilterSpec,
    SynthesizedDesign,
    VaractorState,
    butterworth_g,
    synth_core,
    split_coupled,
    practical_caps,
    pi_to_tee_caps,
    tee_to_pi_caps,
    synthesize,
    quoted_scenario,
)
from .engine import Netlist, FrequencyResponse, ac_solve, sweep, equivalent
from .metrics import StopbandMetrics, analyze, compare, find_modes, simulate_metrics
from .topologies import (
    LossModel,
    TopologyId,
    build_notch,
    build_dualmode,
    build_practical,
    get_topology,
    select_topology,
)
from .varactor import VaractorModel, BiasPoint, MEASURED_BIAS_CASES, load_profile
from .tuning import (
    CalibrationTarget,
    Calibrator,
    CbRule,
    TuningCurve,
    calibrate,
    tuning_curve_caps,
    tuning_curve_bias,
)

__version__ = '0.1.0'
