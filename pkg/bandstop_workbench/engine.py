'''Linear AC analysis of two-port netlists.

The nodal admittance matrix is assembled for the whole frequency grid at once
(shape F x N x N) and solved with a batched dense LU. Each port j is driven by
a source of amplitude 2 behind its reference impedance while the other port is
terminated, so that S_ij = V_i - delta_ij.
'''

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import FloatingNodeError, GridMismatchError, LineResonanceError

logger = logging.getLogger(__name__)

GROUND = '0'
MIN_FREQUENCY = 1e3
LINE_GUARD = 1e-9
LINE_NUDGE = 1e-6


class ElementKind(str, Enum):
    RESISTOR = 'resistor'
    CAPACITOR = 'capacitor'
    INDUCTOR = 'inductor'
    COUPLED_INDUCTOR_PAIR = 'coupled_inductor_pair'
    TRANSMISSION_LINE = 'transmission_line'
    PORT = 'port'


_TERMINALS = {
    ElementKind.RESISTOR: 2,
    ElementKind.CAPACITOR: 2,
    ElementKind.INDUCTOR: 2,
    ElementKind.COUPLED_INDUCTOR_PAIR: 4,
    ElementKind.TRANSMISSION_LINE: 2,
    ElementKind.PORT: 2,
}


@dataclass(frozen = True)
class Element:
    '''One circuit element.

    `values` by kind: R (Ohm); C (F); L (H); coupled pair (L_a, L_b, M);
    transmission line (Z, theta_ref in rad, f_ref in Hz); port (z_ref).
    A coupled pair lists its terminals as (a+, a-, b+, b-); a port as (node, reference).
    '''
    kind: ElementKind
    nodes: tuple
    values: tuple
    name: str = ''

    def __post_init__(self):
        kind = ElementKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'nodes', tuple(str(n) for n in self.nodes))
        object.__setattr__(self, 'values', tuple(float(v) for v in self.values))

        assert len(self.nodes) == _TERMINALS[kind], f'{kind.value} takes {_TERMINALS[kind]} terminals'

        if kind == ElementKind.COUPLED_INDUCTOR_PAIR:
            la, lb, m = self.values
            if not (la > 0 and lb > 0):
                raise ValueError(f'{self.label}: winding inductances must be positive')
            if abs(m) >= math.sqrt(la * lb):
                raise ValueError(f'{self.label}: |M| must be below sqrt(La*Lb)')
        elif kind == ElementKind.TRANSMISSION_LINE:
            z, theta_ref, f_ref = self.values
            if not (z > 0 and theta_ref > 0 and f_ref > 0):
                raise ValueError(f'{self.label}: line impedance, length and reference frequency must be positive')
        else:
            if len(self.values) != 1 or not self.values[0] > 0:
                raise ValueError(f'{self.label}: value must be a single positive number, got {self.values}')

    @property
    def label(self):
        return self.name or self.kind.value

    @property
    def value(self):
        return self.values[0]


def resistor(a, b, r, name = ''):
    return Element(ElementKind.RESISTOR, (a, b), (r,), name)

def capacitor(a, b, c, name = ''):
    return Element(ElementKind.CAPACITOR, (a, b), (c,), name)

def inductor(a, b, l, name = ''):
    return Element(ElementKind.INDUCTOR, (a, b), (l,), name)

def coupled_inductors(a_pos, a_neg, b_pos, b_neg, la, lb, m, name = ''):
    return Element(ElementKind.COUPLED_INDUCTOR_PAIR, (a_pos, a_neg, b_pos, b_neg), (la, lb, m), name)

def transmission_line(a, b, z, theta_ref, f_ref, name = ''):
    return Element(ElementKind.TRANSMISSION_LINE, (a, b), (z, theta_ref, f_ref), name)

def port(node, z_ref = 50.0, reference = GROUND, name = ''):
    return Element(ElementKind.PORT, (node, reference), (z_ref,), name)


@dataclass(frozen = True)
class Netlist:
    elements: tuple
    name: str = ''
    nodes: tuple = field(init = False)

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, 'elements', elements)

        ports = self.ports
        if len(ports) != 2:
            raise ValueError(f'a netlist needs exactly two ports, got {len(ports)}')
        if ports[0].value != ports[1].value:
            raise ValueError('both ports must share one reference impedance')

        nodes = []
        for element in elements:
            for node in element.nodes:
                if node != GROUND and node not in nodes:
                    nodes.append(node)
        object.__setattr__(self, 'nodes', tuple(nodes))

    @property
    def ports(self):
        return tuple(e for e in self.elements if e.kind == ElementKind.PORT)

    @property
    def z_ref(self):
        return self.ports[0].value


@dataclass(frozen = True, eq = False)
class FrequencyResponse:
    freqs: np.ndarray
    s11: np.ndarray
    s21: np.ndarray
    s12: np.ndarray
    s22: np.ndarray
    z_ref: float = 50.0
    nudged: tuple = ()

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype = float)
        object.__setattr__(self, 'freqs', freqs)
        for name in ('s11', 's21', 's12', 's22'):
            values = np.asarray(getattr(self, name), dtype = complex)
            if values.shape != freqs.shape:
                raise ValueError(f'{name} has {values.size} points, the grid has {freqs.size}')
            object.__setattr__(self, name, values)
        _check_grid(freqs)

    @classmethod
    def from_matrix(cls, freqs, s, z_ref = 50.0, nudged = ()):
        s = np.asarray(s)
        return cls(freqs, s[:, 0, 0], s[:, 1, 0], s[:, 0, 1], s[:, 1, 1], z_ref = z_ref, nudged = tuple(nudged))

    @property
    def s(self):
        s = np.empty((self.freqs.size, 2, 2), dtype = complex)
        s[:, 0, 0], s[:, 1, 0], s[:, 0, 1], s[:, 1, 1] = self.s11, self.s21, self.s12, self.s22
        return s

    def __len__(self):
        return self.freqs.size

    def db(self, param = 's21', floor = None):
        magnitude = np.abs(getattr(self, param))
        magnitude = np.maximum(magnitude, np.finfo(float).tiny)
        values = 20 * np.log10(magnitude)
        if floor is not None:
            values = np.maximum(values, floor)
        return values


@dataclass(frozen = True)
class EquivalenceReport:
    equivalent: bool
    max_deviation: float
    frequency: float
    entry: str


def _check_grid(freqs):
    if freqs.ndim != 1 or freqs.size == 0:
        raise ValueError('frequency grid must be a non-empty 1-D sequence')
    if np.any(freqs <= 0):
        raise ValueError('frequency grid must be positive')
    if np.any(np.diff(freqs) <= 0):
        raise ValueError('frequency grid must be strictly ascending')

def check_connectivity(netlist):
    '''Raises `FloatingNodeError` for the first node with no conduction path to ground.'''
    index = {GROUND: 0}
    for i, node in enumerate(netlist.nodes):
        index[node] = i + 1

    rows, cols = [], []
    def connect(a, b):
        rows.append(index[a])
        cols.append(index[b])

    for element in netlist.elements:
        n = element.nodes
        if element.kind == ElementKind.COUPLED_INDUCTOR_PAIR:
            connect(n[0], n[1])
            connect(n[2], n[3])
        elif element.kind == ElementKind.TRANSMISSION_LINE:
            # both ends see the return conductor
            connect(n[0], n[1])
            connect(n[0], GROUND)
            connect(n[1], GROUND)
        else:
            connect(n[0], n[1])

    size = len(index)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape = (size, size))
    _, labels = connected_components(graph, directed = False)
    for node in netlist.nodes:
        if labels[index[node]] != labels[0]:
            raise FloatingNodeError(node)

def _stamp(y_matrix, index, winding_i, winding_j, y):
    for node_i, sign_i in zip(winding_i, (1, -1)):
        if node_i == GROUND:
            continue
        for node_j, sign_j in zip(winding_j, (1, -1)):
            if node_j == GROUND:
                continue
            y_matrix[:, index[node_i], index[node_j]] += sign_i * sign_j * y

def _line_sin(element, freqs):
    z, theta_ref, f_ref = element.values
    theta = theta_ref * freqs / f_ref
    return theta, np.sin(theta)

def _line_poles(netlist, freqs):
    mask = np.zeros(freqs.shape, dtype = bool)
    for element in netlist.elements:
        if element.kind == ElementKind.TRANSMISSION_LINE:
            _, sin_theta = _line_sin(element, freqs)
            mask |= np.abs(sin_theta) < LINE_GUARD
    return mask

def admittance_matrix(netlist, freqs):
    '''Nodal admittance matrix of all non-port elements, shape (F, N, N).'''
    freqs = np.atleast_1d(np.asarray(freqs, dtype = float))
    index = {node: i for i, node in enumerate(netlist.nodes)}
    w = 2 * np.pi * freqs
    y_matrix = np.zeros((freqs.size, len(index), len(index)), dtype = complex)

    for element in netlist.elements:
        kind = element.kind
        a, b = element.nodes[:2]
        if kind == ElementKind.RESISTOR:
            _stamp(y_matrix, index, (a, b), (a, b), np.full(freqs.shape, 1 / element.value, dtype = complex))
        elif kind == ElementKind.CAPACITOR:
            _stamp(y_matrix, index, (a, b), (a, b), 1j * w * element.value)
        elif kind == ElementKind.INDUCTOR:
            _stamp(y_matrix, index, (a, b), (a, b), 1 / (1j * w * element.value))
        elif kind == ElementKind.COUPLED_INDUCTOR_PAIR:
            la, lb, m = element.values
            gamma = np.linalg.inv(np.array([[la, m], [m, lb]]))
            windings = (element.nodes[0:2], element.nodes[2:4])
            for p in range(2):
                for q in range(2):
                    _stamp(y_matrix, index, windings[p], windings[q], gamma[p, q] / (1j * w))
        elif kind == ElementKind.TRANSMISSION_LINE:
            z = element.values[0]
            theta, sin_theta = _line_sin(element, freqs)
            hit = np.abs(sin_theta) < LINE_GUARD
            if np.any(hit):
                raise LineResonanceError(float(freqs[hit][0]))
            y11 = -1j * np.cos(theta) / (z * sin_theta)
            y12 = 1j / (z * sin_theta)
            for node_i, node_j, y in ((a, a, y11), (b, b, y11), (a, b, y12), (b, a, y12)):
                if node_i != GROUND and node_j != GROUND:
                    y_matrix[:, index[node_i], index[node_j]] += y
    return y_matrix

def _solve(netlist, freqs):
    index = {node: i for i, node in enumerate(netlist.nodes)}
    y_matrix = admittance_matrix(netlist, freqs)
    rhs = np.zeros((len(index), 2), dtype = complex)

    for j, p in enumerate(netlist.ports):
        node, reference = p.nodes
        g = 1 / p.value
        _stamp(y_matrix, index, (node, reference), (node, reference), np.full(freqs.shape, g, dtype = complex))
        if node != GROUND:
            rhs[index[node], j] += 2 * g
        if reference != GROUND:
            rhs[index[reference], j] -= 2 * g

    try:
        x = np.linalg.solve(y_matrix, np.broadcast_to(rhs, y_matrix.shape[:2] + (2,)))
    except np.linalg.LinAlgError:
        diagonal = np.abs(np.diagonal(y_matrix, axis1 = 1, axis2 = 2)).min(axis = 0)
        raise FloatingNodeError(netlist.nodes[int(np.argmin(diagonal))]) from None

    voltages = np.zeros((freqs.size, 2, 2), dtype = complex)
    for i, p in enumerate(netlist.ports):
        node, reference = p.nodes
        if node != GROUND:
            voltages[:, i, :] += x[:, index[node], :]
        if reference != GROUND:
            voltages[:, i, :] -= x[:, index[reference], :]
    return voltages - np.eye(2)

def ac_solve(netlist, f):
    '''2x2 S-matrix at a single frequency.'''
    if not f > 0:
        raise ValueError(f'frequency must be positive, got {f}')
    check_connectivity(netlist)
    return _solve(netlist, np.array([float(f)]))[0]

def sweep(netlist, grid):
    freqs = np.array(grid, dtype = float)
    _check_grid(freqs)

    below = np.count_nonzero(freqs < MIN_FREQUENCY)
    if below > 1 or (below == 1 and freqs.size > 1 and freqs[1] <= MIN_FREQUENCY):
        raise ValueError(f'frequency grid may start below {MIN_FREQUENCY:g} Hz with one point only')
    if below == 1:
        logger.warning('clamping %.6g Hz to the %g Hz analysis floor', freqs[0], MIN_FREQUENCY)
        freqs[0] = MIN_FREQUENCY

    check_connectivity(netlist)

    poles = _line_poles(netlist, freqs)
    nudged = tuple(int(i) for i in np.flatnonzero(poles))
    if nudged:
        logger.warning('%d grid point(s) sit on a line pole, evaluated at +%g relative', len(nudged), LINE_NUDGE)
    evaluated = np.where(poles, freqs * (1 + LINE_NUDGE), freqs)

    s = _solve(netlist, evaluated)
    return FrequencyResponse.from_matrix(freqs, s, z_ref = netlist.z_ref, nudged = nudged)

def equivalent(resp_a, resp_b, tol):
    if resp_a.freqs.shape != resp_b.freqs.shape or not np.array_equal(resp_a.freqs, resp_b.freqs):
        raise GridMismatchError('responses are sampled on different grids')

    deviation = np.abs(resp_a.s - resp_b.s)
    flat = int(np.argmax(deviation))
    point, i, j = np.unravel_index(flat, deviation.shape)
    worst = float(deviation.flat[flat])
    return EquivalenceReport(
        equivalent = worst <= tol,
        max_deviation = worst,
        frequency = float(resp_a.freqs[point]),
        entry = f's{i + 1}{j + 1}'
    )
