'''Junction varactor model: c(v) = cj0 / (1 + v/vj)^m + cp.'''

import json
import logging
from dataclasses import dataclass

import numpy as np

from .errors import DesignError, OutOfRangeBiasError, ProfileError, UnreachableCapacitanceError

logger = logging.getLogger(__name__)

# bias pairs (V1 on the C_a devices, V2 on the C_b pairs) of the five measured states
MEASURED_BIAS_CASES = (
    (15.0, 35.0),
    (8.5, 30.0),
    (6.0, 11.0),
    (4.2, 5.0),
    (1.7, 0.2),
)


@dataclass(frozen = True)
class BiasPoint:
    v1: float
    v2: float


@dataclass(frozen = True)
class VaractorModel:
    cj0: float
    vj: float
    m: float
    cp: float = 0.0
    rs: float = 0.0
    v_min: float = 0.0
    v_max: float = 30.0
    name: str = ''
    authoritative: bool = False

    def __post_init__(self):
        if not self.cj0 > 0:
            raise DesignError(f'cj0 must be positive, got {self.cj0}')
        if not (self.vj > 0 and self.m > 0):
            raise DesignError('junction potential and grading exponent must be positive')
        if self.cp < 0 or self.rs < 0:
            raise DesignError('package capacitance and series resistance must be >= 0')
        if not 0 <= self.v_min < self.v_max:
            raise DesignError(f'bias range must satisfy 0 <= v_min < v_max, got [{self.v_min}, {self.v_max}]')

    @property
    def c_max(self):
        return self.capacitance(self.v_min)

    @property
    def c_min(self):
        return self.capacitance(self.v_max)

    def _check_bias(self, v, row = None):
        if not self.v_min <= v <= self.v_max:
            raise OutOfRangeBiasError(v, self.v_min, self.v_max, row = row)

    def capacitance(self, v, row = None):
        self._check_bias(v, row)
        return self.cj0 / (1 + v / self.vj) ** self.m + self.cp

    def invert(self, c_target):
        '''Reverse bias that realizes `c_target`.'''
        c_min, c_max = self.c_min, self.c_max
        if not c_min <= c_target <= c_max:
            raise UnreachableCapacitanceError(c_target, c_min, c_max)
        v = self.vj * ((self.cj0 / (c_target - self.cp)) ** (1 / self.m) - 1)
        return float(np.clip(v, self.v_min, self.v_max))

    def anti_series(self, v, row = None):
        '''Effective (capacitance, series resistance) of two identical devices in anti-series at one bias.'''
        return self.capacitance(v, row) / 2, 2 * self.rs

    def to_dict(self):
        return {
            'name': self.name,
            'cj0_f': self.cj0,
            'vj_v': self.vj,
            'm': self.m,
            'cp_f': self.cp,
            'rs_ohm': self.rs,
            'v_min_v': self.v_min,
            'v_max_v': self.v_max,
            'authoritative': self.authoritative,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                cj0 = float(data['cj0_f']),
                vj = float(data['vj_v']),
                m = float(data['m']),
                cp = float(data.get('cp_f', 0.0)),
                rs = float(data.get('rs_ohm', 0.0)),
                v_min = float(data.get('v_min_v', 0.0)),
                v_max = float(data['v_max_v']),
                name = str(data.get('name', '')),
                authoritative = bool(data.get('authoritative', False))
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ProfileError(f'invalid varactor profile: {e}') from e


def load_profile(path):
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ProfileError(f'{path}: {e}') from e
    model = VaractorModel.from_dict(data)
    if not model.authoritative:
        logger.warning('varactor profile %s is a placeholder, absolute tuning values are indicative only', model.name or path)
    return model

def bias_capacitances(model, bias, row = None):
    '''(C_a, C_b, rs_a, rs_b) for a bias point: single devices on C_a, anti-series pairs on C_b.'''
    bias = bias if isinstance(bias, BiasPoint) else BiasPoint(*bias)
    ca = model.capacitance(bias.v1, row)
    cb, rs_b = model.anti_series(bias.v2, row)
    return ca, cb, model.rs, rs_b
