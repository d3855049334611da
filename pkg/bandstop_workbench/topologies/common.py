import math
from dataclasses import dataclass
from enum import Enum

from ..engine import capacitor, inductor, resistor, transmission_line
from ..errors import DesignError

QUARTER_WAVE = math.pi / 2

BIAS_FEED_R = 10e3
BIAS_BYPASS_C = 100e-12


class TopologyId(str, Enum):
    NOTCH_FIG1A = 'notch_fig1a'
    DUALMODE_FIG1B = 'dualmode_fig1b'
    PRACTICAL_FIG2_V1 = 'practical_fig2_v1'
    PRACTICAL_FIG2_V2 = 'practical_fig2_v2'
    PRACTICAL_FIG2_V3 = 'practical_fig2_v3'


PRACTICAL_VARIANTS = (
    TopologyId.PRACTICAL_FIG2_V1,
    TopologyId.PRACTICAL_FIG2_V2,
    TopologyId.PRACTICAL_FIG2_V3,
)


@dataclass(frozen = True)
class LossModel:
    '''Varactor series resistance and a fixed inductor Q.

    `varactor_rs_b` overrides the resistance of the C_b site (an anti-series
    pair carries twice the single-device value); None means `varactor_rs`.
    '''
    varactor_rs: float = 0.0
    inductor_q: float = None
    varactor_rs_b: float = None

    def __post_init__(self):
        for rs in (self.varactor_rs, self.varactor_rs_b):
            if rs is not None and rs < 0:
                raise DesignError(f'varactor series resistance must be >= 0, got {rs}')
        if self.inductor_q is not None and not self.inductor_q > 0:
            raise DesignError(f'inductor Q must be positive, got {self.inductor_q}')

    @property
    def rs_a(self):
        return self.varactor_rs

    @property
    def rs_b(self):
        return self.varactor_rs if self.varactor_rs_b is None else self.varactor_rs_b

    @property
    def lossless(self):
        return self.rs_a == 0 and self.rs_b == 0 and self.inductor_q is None


def quarter_wave_line(a, b, zt, f_ref):
    return transmission_line(a, b, zt, QUARTER_WAVE, f_ref, name = 'TL')

def varactor_site(a, b, c, rs, name):
    if rs > 0:
        inner = f'{name}.rs'
        return [capacitor(a, inner, c, name), resistor(inner, b, rs, f'R{name}')]
    return [capacitor(a, b, c, name)]

def lossy_inductor(a, b, l, q, f0, name):
    # series resistance fixed at its f0 value
    if q is not None:
        inner = f'{name}.q'
        return [inductor(a, inner, l, name), resistor(inner, b, 2 * math.pi * f0 * l / q, f'R{name}')]
    return [inductor(a, b, l, name)]

def bias_feeds(nodes, supply):
    elements = [resistor(node, supply, BIAS_FEED_R, f'Rbias{i + 1}') for i, node in enumerate(nodes)]
    elements.append(capacitor(supply, '0', BIAS_BYPASS_C, f'Cbypass.{supply}'))
    return elements
