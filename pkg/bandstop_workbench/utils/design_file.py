'''JSON design files. Keys carry their SI unit (`f0_hz`, `cc_f`, `l_h`).'''

import json
from dataclasses import dataclass

from ..errors import DesignFileError
from ..synthesis import (
    CoreDesign,
    CoupledElements,
    FilterSpec,
    PracticalElements,
    PrototypeCoefficients,
    SynthesizedDesign,
    VaractorState,
)
from ..topologies import LossModel, TopologyId

FORMAT = 'bandstop-workbench/design'
VERSION = 1


@dataclass(frozen = True)
class DesignFile:
    design: SynthesizedDesign
    topology: TopologyId = TopologyId.PRACTICAL_FIG2_V1
    loss: LossModel = LossModel()
    state: VaractorState = None
    varactor_profile: str = None

    def __post_init__(self):
        object.__setattr__(self, 'topology', TopologyId(self.topology))
        if self.state is None:
            object.__setattr__(self, 'state', self.design.initial_state)

    @property
    def spec(self):
        return self.design.spec

    def to_dict(self):
        d = self.design
        return {
            'format': FORMAT,
            'version': VERSION,
            'spec': {
                'f0_hz': d.spec.f0,
                'delta': d.spec.delta,
                'order': d.spec.order,
                'z0_ohm': d.spec.z0,
                'cc_f': d.spec.cc,
                'prototype_kind': d.spec.prototype_kind.value,
            },
            'design': {
                'g': list(d.g.g),
                'core': {'zt_ohm': d.core.zt, 'l_h': d.core.l, 'c_f': d.core.c, 'dk': d.core.dk, 'k': d.core.k},
                'coupled': {'lm_h': d.coupled.lm, 'l1_h': d.coupled.l1, 'cm_f': d.coupled.cm, 'c1_f': d.coupled.c1},
                'practical': {
                    'ca_f': d.practical.ca,
                    'cb_f': d.practical.cb,
                    'ck_f': d.practical.ck,
                    'cj_f': d.practical.cj,
                    'cc_f': d.practical.cc,
                },
            },
            'state': {'ca_f': self.state.ca, 'cb_f': self.state.cb},
            'topology': self.topology.value,
            'loss': {
                'varactor_rs_ohm': self.loss.varactor_rs,
                'varactor_rs_b_ohm': self.loss.varactor_rs_b,
                'inductor_q': self.loss.inductor_q,
            },
            'varactor_profile': self.varactor_profile,
        }

    @classmethod
    def from_dict(cls, data):
        if data.get('format') != FORMAT:
            raise DesignFileError(f'not a design file (format {data.get("format")!r})')
        if data.get('version') != VERSION:
            raise DesignFileError(f'unsupported design file version {data.get("version")!r}')
        try:
            s, d = data['spec'], data['design']
            spec = FilterSpec(
                f0 = s['f0_hz'],
                delta = s['delta'],
                order = s['order'],
                z0 = s['z0_ohm'],
                cc = s['cc_f'],
                prototype_kind = s['prototype_kind']
            )
            core, coupled, practical = d['core'], d['coupled'], d['practical']
            design = SynthesizedDesign(
                spec = spec,
                g = PrototypeCoefficients(tuple(d['g'])),
                core = CoreDesign(zt = core['zt_ohm'], l = core['l_h'], c = core['c_f'], dk = core['dk'], k = core['k']),
                coupled = CoupledElements(lm = coupled['lm_h'], l1 = coupled['l1_h'], cm = coupled['cm_f'], c1 = coupled['c1_f']),
                practical = PracticalElements(
                    ca = practical['ca_f'],
                    cb = practical['cb_f'],
                    ck = practical['ck_f'],
                    cj = practical['cj_f'],
                    cc = practical['cc_f']
                )
            )
            loss = data.get('loss') or {}
            return cls(
                design = design,
                topology = data['topology'],
                loss = LossModel(
                    varactor_rs = loss.get('varactor_rs_ohm', 0.0),
                    inductor_q = loss.get('inductor_q'),
                    varactor_rs_b = loss.get('varactor_rs_b_ohm')
                ),
                state = VaractorState(data['state']['ca_f'], data['state']['cb_f']),
                varactor_profile = data.get('varactor_profile')
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DesignFileError(f'invalid design file: {e}') from e


def save_design(path, doc):
    with open(path, 'w') as f:
        json.dump(doc.to_dict(), f, indent = 2)
        f.write('\n')

def load_design(path):
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise DesignFileError(f'{path}: {e}') from e
    if not isinstance(data, dict):
        raise DesignFileError(f'{path}: top level must be an object')
    return DesignFile.from_dict(data)
