import logging
import math
from dataclasses import dataclass

from ..errors import AnalysisError, NoViableTopologyError, UnknownVariantError
from ..metrics import simulate_metrics
from ..utils import progress_bar
from .common import PRACTICAL_VARIANTS, LossModel, TopologyId
from .dualmode import build_dualmode
from .notch import build_notch
from .practical import build_practical

logger = logging.getLogger(__name__)


@dataclass(frozen = True)
class CandidateReport:
    topology: TopologyId
    metrics: object = None
    error: str = None
    dual_mode: bool = False
    single_stopband: bool = False
    freq_error: float = math.inf
    fbw_error: float = math.inf

    @property
    def score(self):
        if not (self.dual_mode and self.single_stopband):
            return math.inf
        return self.freq_error + self.fbw_error


def get_topology(topology, design, *, loss = None, state = None, bias_network = False):
    try:
        topology = TopologyId(topology)
    except ValueError:
        raise UnknownVariantError(f'unknown topology {topology!r}') from None

    spec = design.spec
    if topology == TopologyId.NOTCH_FIG1A:
        return build_notch(design.core, spec.f0, spec.z0)
    elif topology == TopologyId.DUALMODE_FIG1B:
        return build_dualmode(design.coupled, design.core, spec.f0, spec.z0)
    elif topology in PRACTICAL_VARIANTS:
        return build_practical(design, topology, loss, state = state, bias_network = bias_network)
    else:
        assert False, f'no builder for {topology}'

def select_topology(design, candidates = PRACTICAL_VARIANTS, *, loss = None, state = None, show_progress = False):
    '''Simulates every candidate and keeps the best dual-mode one.

    Candidates must show two transmission zeros inside one -3 dB stopband;
    among those the score is |f_notch - f0| / f0 + |FBW - delta|. Returns the
    winner and one report per candidate.
    '''
    candidates = [TopologyId(c) for c in candidates]
    if not candidates:
        raise ValueError('select_topology needs at least one candidate')

    spec = design.spec
    report = []
    for topology in progress_bar(candidates, desc = 'topologies', disable = not show_progress):
        netlist = get_topology(topology, design, loss = loss, state = state)
        try:
            m = simulate_metrics(netlist, spec.f0)
        except AnalysisError as e:
            logger.info('%s rejected: %s', topology.value, e)
            report.append(CandidateReport(topology, error = str(e)))
            continue

        report.append(CandidateReport(
            topology,
            metrics = m,
            dual_mode = m.dual_mode,
            single_stopband = m.single_stopband,
            freq_error = abs(m.f_notch - spec.f0) / spec.f0,
            fbw_error = abs(m.fbw - spec.delta)
        ))

    viable = [r for r in report if r.score < math.inf]
    if not viable:
        raise NoViableTopologyError('no candidate topology shows dual-mode splitting inside one stopband', report = report)

    best = min(viable, key = lambda r: r.score)
    logger.info('selected %s (score %.4g)', best.topology.value, best.score)
    return best.topology, report
