import math
from dataclasses import replace
from functools import partial

import numpy as np
import pytest

from bandstop_workbench.errors import (
    CcTooSmallError,
    DegenerateCouplingError,
    DegenerateNetworkError,
    InfeasibleCouplingError,
    InvalidOrderError,
    UnsupportedOrderError,
)
from bandstop_workbench.synthesis import (
    FilterSpec,
    butterworth_g,
    practical_caps,
    pi_to_tee_caps,
    quoted_scenario,
    series_capacitance,
    split_coupled,
    synth_core,
    synthesize,
    tee_to_pi_caps,
)

# pytest.approx adds abs=1e-12 by default, far too loose for farads
approx = partial(pytest.approx, abs = 0)


def oracle(f0, delta, z0, cc):
    # straight recomputation of the design equations for a 2nd-order Butterworth prototype
    g1 = g2 = math.sqrt(2)
    w0 = 2 * math.pi * f0
    l = z0 / (delta * w0 * math.sqrt(g1 * g2))
    c = 1 / (w0 * w0 * l)
    dk = delta / math.sqrt(g1 * g2)
    ck = (1 + dk) * c * cc / (cc - (1 + dk) * c)
    cj = (1 - dk * dk) / dk * c
    return {
        'zt': z0,
        'l': l,
        'c': c,
        'dk': dk,
        'lm': dk * l,
        'l1': (1 - dk) * l,
        'cm': dk * c,
        'c1': (1 - dk) * c,
        'ck': ck,
        'cj': cj,
        'ca': ck * cj / (2 * ck + cj),
        'cb': ck * ck / (2 * ck + cj),
    }


class TestButterworth:
    """Lowpass prototype coefficients."""

    def test_order_two(self):
        assert butterworth_g(2).g == approx([1, 1.414214, 1.414214, 1], rel = 1e-6)

    def test_order_one(self):
        assert butterworth_g(1).g == approx([1, 2, 1], rel = 1e-12)

    def test_order_three(self):
        assert butterworth_g(3).g == approx([1, 1, 2, 1, 1], rel = 1e-12)

    def test_length_and_positive(self):
        for n in range(1, 8):
            g = butterworth_g(n).g
            assert len(g) == n + 2
            assert all(v > 0 for v in g)

    @pytest.mark.parametrize('order', [0, -1, 1.5])
    def test_invalid_order(self, order):
        with pytest.raises(InvalidOrderError):
            butterworth_g(order)


class TestSpec:
    """FilterSpec validation."""

    def test_rejects_bad_bandwidth(self):
        with pytest.raises(ValueError):
            FilterSpec(f0 = 1e9, delta = 1.2)

    def test_rejects_order_one(self):
        with pytest.raises(InvalidOrderError):
            FilterSpec(f0 = 1e9, delta = 0.1, order = 1)

    def test_order_three_is_unsupported(self):
        spec = FilterSpec(f0 = 1e9, delta = 0.1, order = 3)
        with pytest.raises(UnsupportedOrderError):
            synthesize(spec)


class TestCore:
    """Inverter impedance and resonator values."""

    def test_reference_values(self, reference_design):
        core = reference_design.core
        assert core.zt == 50.0
        assert core.l == approx(37.66e-9, rel = 1e-3)
        assert core.c == approx(0.9763e-12, rel = 1e-3)
        assert core.dk == approx(0.12728, rel = 1e-4)

    def test_matches_oracle(self, reference_design):
        expected = oracle(0.83e9, 0.18, 50.0, 2.2e-12)
        core = reference_design.core
        for name in ('zt', 'l', 'c', 'dk'):
            assert getattr(core, name) == approx(expected[name], rel = 1e-9)

    @pytest.mark.parametrize('f0', [1e6, 0.83e9, 12.5e9])
    def test_resonance_closure(self, f0):
        spec = FilterSpec(f0 = f0, delta = 0.18, cc = 1.0)
        core = synth_core(spec, butterworth_g(2))
        assert core.zt == 50.0
        assert (2 * math.pi * f0) ** 2 * core.l * core.c == approx(1, rel = 1e-12)

    def test_wider_band_lowers_l_and_raises_c(self):
        cores = [synth_core(FilterSpec(f0 = 0.83e9, delta = d), butterworth_g(2)) for d in (0.05, 0.1, 0.18, 0.3)]
        ls = [c.l for c in cores]
        cs = [c.c for c in cores]
        assert all(a > b for a, b in zip(ls, ls[1:]))
        assert all(a < b for a, b in zip(cs, cs[1:]))


class TestSplitCoupled:
    """Coupling elements carved out of L and C."""

    def test_reference_values(self, reference_design):
        coupled = reference_design.coupled
        assert coupled.lm == approx(4.793e-9, rel = 1e-3)
        assert coupled.l1 == approx(32.87e-9, rel = 1e-3)
        assert coupled.cm == approx(0.12426e-12, rel = 1e-3)
        assert coupled.c1 == approx(0.85210e-12, rel = 1e-3)

    def test_closure(self, reference_design):
        core, coupled = reference_design.core, reference_design.coupled
        assert coupled.lm + coupled.l1 == approx(core.l, rel = 1e-12)
        assert coupled.cm + coupled.c1 == approx(core.c, rel = 1e-12)

    def test_vanishing_coupling(self, reference_design):
        with pytest.raises(DegenerateCouplingError):
            split_coupled(replace(reference_design.core, dk = 0.0))

    def test_excessive_coupling(self, reference_design):
        with pytest.raises(InfeasibleCouplingError):
            split_coupled(replace(reference_design.core, dk = 1.0))


class TestPracticalCaps:
    """Series C_C split and the varactor pi."""

    def test_reference_values(self, reference_design):
        p = reference_design.practical
        assert p.ck == approx(2.2024e-12, rel = 1e-3)
        assert p.cj == approx(7.5466e-12, rel = 1e-3)
        assert p.ca == approx(1.3907e-12, rel = 1e-3)
        assert p.cb == approx(0.4059e-12, rel = 1e-3)

    def test_matches_oracle(self, reference_design):
        expected = oracle(0.83e9, 0.18, 50.0, 2.2e-12)
        p = reference_design.practical
        for name in ('ck', 'cj', 'ca', 'cb'):
            assert getattr(p, name) == approx(expected[name], rel = 1e-9)

    def test_series_closure(self, reference_design):
        core, p = reference_design.core, reference_design.practical
        assert series_capacitance(p.cc, p.ck) == approx((1 + core.dk) * core.c, rel = 1e-12)
        assert 1 / p.ck + 1 / p.cc == approx(1 / ((1 + core.dk) * core.c), rel = 1e-12)

    def test_cc_too_small_names_minimum(self, reference_design):
        with pytest.raises(CcTooSmallError) as info:
            practical_caps(reference_design.core, 1.0e-12)
        assert info.value.minimum_cc == approx(1.1006e-12, rel = 1e-3)
        assert '1.100' in str(info.value)

    def test_zero_coupling(self, reference_design):
        with pytest.raises(DegenerateCouplingError):
            practical_caps(replace(reference_design.core, dk = 0.0), 2.2e-12)


class TestPiTee:
    """Capacitive delta-star pair."""

    def test_symmetric_case(self):
        assert pi_to_tee_caps(1e-12, 1e-12) == approx((3e-12, 3e-12), rel = 1e-12)
        assert tee_to_pi_caps(3e-12, 3e-12) == approx((1e-12, 1e-12), rel = 1e-12)

    def test_inverts_design(self, reference_design):
        p = reference_design.practical
        ck, cj = pi_to_tee_caps(p.ca, p.cb)
        assert ck == approx(p.ck, rel = 1e-12)
        assert cj == approx(p.cj, rel = 1e-12)

    def test_round_trip_random(self):
        rng = np.random.default_rng(7)
        for ca, cb in 10 ** rng.uniform(-15, -9, size = (200, 2)):
            back = tee_to_pi_caps(*pi_to_tee_caps(ca, cb))
            assert back == approx((ca, cb), rel = 1e-12)

    def test_large_shunt_limit(self):
        ck = 2e-12
        ca, cb = tee_to_pi_caps(ck, 1e6 * ck)
        assert ca == approx(ck, rel = 1e-5)
        assert cb == approx(0, abs = 1e-5 * ck)

    def test_zero_bridge(self):
        with pytest.raises(DegenerateNetworkError):
            pi_to_tee_caps(1e-12, 0.0)


class TestSynthesize:
    """End-to-end element synthesis."""

    def test_composition(self, reference_spec, reference_design):
        assert reference_design.spec == reference_spec
        assert reference_design.initial_state.ca == reference_design.practical.ca
        assert reference_design.practical.cc == reference_spec.cc

    def test_deterministic(self, reference_spec):
        assert synthesize(reference_spec) == synthesize(reference_spec)

    def test_infeasible_cc_propagates(self):
        with pytest.raises(CcTooSmallError) as info:
            synthesize(FilterSpec(f0 = 0.83e9, delta = 0.18, cc = 1e-12))
        assert info.value.minimum_cc == approx(1.1006e-12, rel = 1e-3)

    def test_quoted_scenario(self, reference_design):
        scenario, state = quoted_scenario(reference_design)
        assert scenario.coupled.l1 == 27e-9
        assert scenario.coupled.lm == 3.1e-9
        assert (state.ca, state.cb) == (1.9e-12, 0.5e-12)
        assert scenario.core == reference_design.core
