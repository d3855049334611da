from ..engine import Netlist, capacitor, inductor, port
from ..synthesis import DEFAULT_Z0
from .common import quarter_wave_line


def build_notch(core, f_ref, z0 = DEFAULT_Z0):
    '''Two shunt series-LC resonators joined by a quarter-wave inverter line.'''
    elements = [
        port('A', z0, name = 'P1'),
        port('B', z0, name = 'P2'),
        quarter_wave_line('A', 'B', core.zt, f_ref),
        capacitor('A', 'Y1', core.c, 'C1'),
        inductor('Y1', '0', core.l, 'L1'),
        capacitor('B', 'Y2', core.c, 'C2'),
        inductor('Y2', '0', core.l, 'L2'),
    ]
    return Netlist(elements, name = 'notch_fig1a')
