'''Realizable varactor-tuned circuits.

practical_fig2_v1 is the exact rewrite of the dual-mode circuit: each arm of
the capacitive tee is split into C_C in series with C_k, and the remaining
tee {C_k, C_j, C_k} is turned back into the pi {C_a, C_b, C_a}. The C_a pair
lands on the L_M node and C_b bridges the two sides.

v2 and v3 keep C_C at the ports (DC blocking) and place the varactors on the
branch nodes (v2) or on the line ends (v3).
'''

from ..engine import Netlist, capacitor, port
from ..errors import UnknownVariantError
from ..utils import default
from .common import (
    PRACTICAL_VARIANTS,
    LossModel,
    TopologyId,
    bias_feeds,
    lossy_inductor,
    quarter_wave_line,
    varactor_site,
)

BIAS_NODES = {
    TopologyId.PRACTICAL_FIG2_V1: ('P', 'Q'),
    TopologyId.PRACTICAL_FIG2_V2: ('Y1', 'Y2'),
    TopologyId.PRACTICAL_FIG2_V3: ('A', 'B'),
}


def _exact_v1(design, state, loss):
    f0, cc = design.spec.f0, design.practical.cc
    l1, lm = design.coupled.l1, design.coupled.lm
    rs_a, rs_b, q = loss.rs_a, loss.rs_b, loss.inductor_q
    return [
        port('A', design.spec.z0, name = 'P1'),
        port('B', design.spec.z0, name = 'P2'),
        quarter_wave_line('A', 'B', design.core.zt, f0),
        *lossy_inductor('A', 'Y1', l1, q, f0, 'L1a'),
        capacitor('Y1', 'P', cc, 'CCa'),
        *varactor_site('P', 'X', state.ca, rs_a, 'Ca1'),
        *lossy_inductor('B', 'Y2', l1, q, f0, 'L1b'),
        capacitor('Y2', 'Q', cc, 'CCb'),
        *varactor_site('Q', 'X', state.ca, rs_a, 'Ca2'),
        *varactor_site('P', 'Q', state.cb, rs_b, 'Cb'),
        *lossy_inductor('X', '0', lm, q, f0, 'LM'),
    ]

def _port_blocked(design, state, loss, variant):
    f0, cc = design.spec.f0, design.practical.cc
    l1, lm = design.coupled.l1, design.coupled.lm
    rs_a, rs_b, q = loss.rs_a, loss.rs_b, loss.inductor_q

    elements = [
        port('P1', design.spec.z0, name = 'P1'),
        port('P2', design.spec.z0, name = 'P2'),
        capacitor('P1', 'A', cc, 'CCa'),
        capacitor('B', 'P2', cc, 'CCb'),
        quarter_wave_line('A', 'B', design.core.zt, f0),
        *lossy_inductor('X', '0', lm, q, f0, 'LM'),
    ]
    if variant == TopologyId.PRACTICAL_FIG2_V2:
        elements += [
            *lossy_inductor('A', 'Y1', l1, q, f0, 'L1a'),
            *varactor_site('Y1', 'X', state.ca, rs_a, 'Ca1'),
            *lossy_inductor('B', 'Y2', l1, q, f0, 'L1b'),
            *varactor_site('Y2', 'X', state.ca, rs_a, 'Ca2'),
            *varactor_site('Y1', 'Y2', state.cb, rs_b, 'Cb'),
        ]
    else:
        elements += [
            *varactor_site('A', '0', state.ca, rs_a, 'Ca1'),
            *varactor_site('B', '0', state.ca, rs_a, 'Ca2'),
            *lossy_inductor('A', 'X', l1, q, f0, 'L1a'),
            *lossy_inductor('B', 'X', l1, q, f0, 'L1b'),
            *varactor_site('A', 'B', state.cb, rs_b, 'Cb'),
        ]
    return elements

def build_practical(design, variant, loss = None, *, state = None, bias_network = False):
    '''Netlist of a practical variant at the varactor operating point `state`.

    `state` defaults to the synthesized (C_a, C_b). `bias_network` adds the
    10 kOhm feeds and the 100 pF supply bypass to the varactor nodes.
    '''
    try:
        variant = TopologyId(variant)
    except ValueError:
        raise UnknownVariantError(f'unknown topology variant {variant!r}') from None
    if variant not in PRACTICAL_VARIANTS:
        raise UnknownVariantError(f'{variant.value} is not a practical variant')

    loss = default(loss, LossModel)
    state = default(state, lambda: design.initial_state)

    if variant == TopologyId.PRACTICAL_FIG2_V1:
        elements = _exact_v1(design, state, loss)
    else:
        elements = _port_blocked(design, state, loss, variant)

    if bias_network:
        elements += bias_feeds(BIAS_NODES[variant], 'VB')
    return Netlist(elements, name = variant.value)
