'''Element synthesis for the second-order dual-mode bandstop filter.

All values are SI (Hz, H, F, Ohm). The chain is

    g-values -> core resonator (Z_T, L, C, dk) -> coupled split (L_M, L_1, C_M, C_1)
             -> practical capacitors (C_k, C_j -> C_a, C_b) for a chosen series C_C

`dk` is the product of the fractional bandwidth and k = 1/sqrt(g1*g2).
'''

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import (
    CcTooSmallError,
    DegenerateCouplingError,
    DegenerateNetworkError,
    DesignError,
    InfeasibleCouplingError,
    InvalidOrderError,
    UnsupportedOrderError,
)

logger = logging.getLogger(__name__)

SUPPORTED_ORDER = 2
DEFAULT_Z0 = 50.0

# element values of the built filter after layout fitting
QUOTED_ELEMENTS = {
    'l1': 27e-9,
    'lm': 3.1e-9,
    'ca': 1.9e-12,
    'cb': 0.5e-12,
    'cc': 2.2e-12,
}


class PrototypeKind(str, Enum):
    BUTTERWORTH = 'butterworth'


@dataclass(frozen = True)
class FilterSpec:
    f0: float
    delta: float
    order: int = 2
    z0: float = DEFAULT_Z0
    cc: float = 2.2e-12
    prototype_kind: PrototypeKind = PrototypeKind.BUTTERWORTH

    def __post_init__(self):
        if not self.f0 > 0:
            raise DesignError(f'f0 must be positive, got {self.f0}')
        if not 0 < self.delta < 1:
            raise DesignError(f'fractional bandwidth must lie in (0, 1), got {self.delta}')
        if not self.z0 > 0:
            raise DesignError(f'z0 must be positive, got {self.z0}')
        if not self.cc > 0:
            raise DesignError(f'C_C must be positive, got {self.cc}')
        if int(self.order) != self.order or self.order < 2:
            raise InvalidOrderError(f'order must be an integer >= 2, got {self.order}')
        object.__setattr__(self, 'prototype_kind', PrototypeKind(self.prototype_kind))

    @property
    def w0(self):
        return 2 * math.pi * self.f0


@dataclass(frozen = True)
class PrototypeCoefficients:
    g: tuple

    @property
    def order(self):
        return len(self.g) - 2


@dataclass(frozen = True)
class CoreDesign:
    zt: float
    l: float
    c: float
    dk: float
    k: float


@dataclass(frozen = True)
class CoupledElements:
    lm: float
    l1: float
    cm: float
    c1: float


@dataclass(frozen = True)
class PracticalElements:
    ca: float
    cb: float
    ck: float
    cj: float
    cc: float


@dataclass(frozen = True)
class VaractorState:
    '''Operating point of the two tunable capacitor sites.'''
    ca: float
    cb: float

    def __post_init__(self):
        if not (self.ca > 0 and self.cb > 0):
            raise DesignError(f'varactor capacitances must be positive, got ca={self.ca}, cb={self.cb}')


@dataclass(frozen = True)
class SynthesizedDesign:
    spec: FilterSpec
    g: PrototypeCoefficients
    core: CoreDesign
    coupled: CoupledElements
    practical: PracticalElements

    @property
    def initial_state(self):
        return VaractorState(self.practical.ca, self.practical.cb)


def series_capacitance(*caps):
    return 1.0 / sum(1.0 / c for c in caps)

def butterworth_g(order):
    if int(order) != order or order < 1:
        raise InvalidOrderError(f'prototype order must be a positive integer, got {order}')
    n = int(order)
    g = [1.0]
    g += [2 * math.sin((2 * i - 1) * math.pi / (2 * n)) for i in range(1, n + 1)]
    g.append(1.0)
    return PrototypeCoefficients(tuple(g))

def prototype_coefficients(spec):
    if spec.prototype_kind == PrototypeKind.BUTTERWORTH:
        return butterworth_g(spec.order)
    assert False, f'no coefficient table for {spec.prototype_kind}'

def synth_core(spec, g):
    if spec.order != SUPPORTED_ORDER:
        raise UnsupportedOrderError(f'only order {SUPPORTED_ORDER} can be synthesized, got {spec.order}')
    assert len(g.g) == spec.order + 2, 'coefficient list does not match the order'

    g0, g1, g2, g3 = g.g
    w0 = spec.w0
    zt = spec.z0 / math.sqrt(g0 * g3)
    l = spec.z0 / (spec.delta * w0 * math.sqrt(g1 * g2))
    c = 1.0 / (w0 ** 2 * l)
    k = 1.0 / math.sqrt(g1 * g2)
    return CoreDesign(zt = zt, l = l, c = c, dk = spec.delta * k, k = k)

def _check_coupling(dk):
    if dk >= 1:
        raise InfeasibleCouplingError(f'coupling product dk = {dk} must be below 1')
    if dk <= 0:
        raise DegenerateCouplingError(f'coupling product dk = {dk} vanishes, the couplings degenerate')

def split_coupled(core):
    _check_coupling(core.dk)
    dk = core.dk
    return CoupledElements(
        lm = dk * core.l,
        l1 = (1 - dk) * core.l,
        cm = dk * core.c,
        c1 = (1 - dk) * core.c
    )

def pi_to_tee_caps(ca, cb):
    '''Star equivalent of a capacitive pi (shunt `ca`, bridge `cb`, shunt `ca`).

    Returns `(ck, cj)`: the two series arms and the shunt leg of the tee.
    '''
    if cb == 0:
        raise DegenerateNetworkError('bridge capacitance is zero, the shunt capacitors decouple and no tee exists')
    if not (ca > 0 and cb > 0):
        raise DesignError(f'pi capacitances must be positive, got ca={ca}, cb={cb}')
    ck = ca + 2 * cb
    cj = ca * (ca + 2 * cb) / cb
    return ck, cj

def tee_to_pi_caps(ck, cj):
    if not (ck > 0 and cj > 0):
        raise DesignError(f'tee capacitances must be positive, got ck={ck}, cj={cj}')
    total = 2 * ck + cj
    return ck * cj / total, ck ** 2 / total

def minimum_cc(core):
    return (1 + core.dk) * core.c

def practical_caps(core, cc):
    if core.dk <= 0:
        raise DegenerateCouplingError(f'coupling product dk = {core.dk} vanishes, C_j is undefined')
    arm = minimum_cc(core)
    if cc <= arm:
        raise CcTooSmallError(cc, arm)

    ck = arm * cc / (cc - arm)
    cj = (1 - core.dk ** 2) * core.c / core.dk
    ca, cb = tee_to_pi_caps(ck, cj)
    return PracticalElements(ca = ca, cb = cb, ck = ck, cj = cj, cc = cc)

def synthesize(spec):
    g = prototype_coefficients(spec)
    core = synth_core(spec, g)
    coupled = split_coupled(core)
    practical = practical_caps(core, spec.cc)
    logger.debug('synthesized f0=%.6g Hz delta=%.4g: L=%.6g H C=%.6g F dk=%.6g', spec.f0, spec.delta, core.l, core.c, core.dk)
    return SynthesizedDesign(spec = spec, g = g, core = core, coupled = coupled, practical = practical)

def quoted_scenario(design):
    '''Swaps in the published post-layout element set.

    The returned design no longer satisfies lm + l1 = L; it is meant for
    descriptive simulation only.
    '''
    quoted = QUOTED_ELEMENTS
    coupled = replace(design.coupled, l1 = quoted['l1'], lm = quoted['lm'])
    practical = replace(design.practical, ca = quoted['ca'], cb = quoted['cb'], cc = quoted['cc'])
    scenario = replace(design, coupled = coupled, practical = practical)
    return scenario, VaractorState(quoted['ca'], quoted['cb'])
