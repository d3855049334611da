from ..engine import Netlist, capacitor, inductor, port
from ..synthesis import DEFAULT_Z0
from .common import quarter_wave_line


def build_dualmode(coupled, core, f_ref, z0 = DEFAULT_Z0):
    '''Coupled-resonator form of the notch filter.

    The branch inductors meet the branch capacitors at Y1/Y2, the capacitors
    join at X and L_M returns X to ground (inductive tee). C_M bridges Y1-Y2,
    closing the capacitive pi {C_1, C_M, C_1} around Y1, Y2 and X.
    '''
    elements = [
        port('A', z0, name = 'P1'),
        port('B', z0, name = 'P2'),
        quarter_wave_line('A', 'B', core.zt, f_ref),
        inductor('A', 'Y1', coupled.l1, 'L1a'),
        capacitor('Y1', 'X', coupled.c1, 'C1a'),
        inductor('B', 'Y2', coupled.l1, 'L1b'),
        capacitor('Y2', 'X', coupled.c1, 'C1b'),
        capacitor('Y1', 'Y2', coupled.cm, 'CM'),
        inductor('X', '0', coupled.lm, 'LM'),
    ]
    return Netlist(elements, name = 'dualmode_fig1b')
