import io

import numpy as np
import pytest

from bandstop_workbench.engine import sweep
from bandstop_workbench.errors import TouchstoneParseError
from bandstop_workbench.topologies import build_notch
from bandstop_workbench.utils.touchstone import load_touchstone, parse_touchstone, save_touchstone, write_touchstone


@pytest.fixture
def notch_response(reference_design, wide_grid):
    return sweep(build_notch(reference_design.core, 0.83e9), wide_grid)

def parse(text):
    return parse_touchstone(io.StringIO(text))


class TestWrite:
    def test_round_trip_is_exact(self, notch_response, tmp_path):
        path = tmp_path / 'notch.s2p'
        save_touchstone(path, notch_response, comments = ['notch_fig1a'])
        back = load_touchstone(path)
        assert np.array_equal(back.freqs, notch_response.freqs)
        assert np.array_equal(back.s, notch_response.s)
        assert back.z_ref == 50.0

    def test_layout(self, notch_response):
        out = io.StringIO()
        write_touchstone(out, notch_response, comments = ['hello'])
        lines = out.getvalue().splitlines()
        assert lines[0] == '! hello'
        assert lines[1] == '# HZ S RI R 50'
        assert len(lines) == 2 + len(notch_response)
        assert all(len(line.split()) == 9 for line in lines[2:])


class TestParse:
    def test_defaults_to_ghz_magnitude_angle(self):
        resp = parse('#\n1 0 0 1 90 1 90 0 0\n2 0 0 1 0 1 0 0 0\n')
        assert resp.freqs.tolist() == [1e9, 2e9]
        assert resp.s21[0] == pytest.approx(1j)
        assert resp.z_ref == 50.0

    def test_db_and_mhz(self):
        resp = parse('# MHZ S DB R 75\n100 -200 0 -6.0206 180 -6.0206 180 -200 0\n')
        assert resp.freqs[0] == 100e6
        assert resp.s21[0] == pytest.approx(-0.5, abs = 1e-5)
        assert resp.z_ref == 75.0

    def test_rows_may_span_lines(self):
        resp = parse('# HZ S RI R 50\n1e9 0 0\n1 0 1 0\n0 0\n')
        assert len(resp) == 1
        assert resp.s21[0] == 1.0

    def test_comments_and_blank_lines(self):
        resp = parse('! header\n\n# GHZ S RI R 50 ! trailing\n1 0 0 1 0 1 0 0 0 ! row\n')
        assert len(resp) == 1

    def test_truncated_file_names_the_line(self):
        with pytest.raises(TouchstoneParseError) as info:
            parse('# HZ S RI R 50\n1e9 0 0 1 0 1 0 0 0\n2e9 0 0 1\n')
        assert info.value.line == 3
        assert str(info.value).startswith('line 3: ')

    def test_missing_option_line(self):
        with pytest.raises(TouchstoneParseError) as info:
            parse('1 0 0 1 0 1 0 0 0\n')
        assert info.value.line == 1

    def test_descending_frequencies(self):
        with pytest.raises(TouchstoneParseError) as info:
            parse('# HZ S RI R 50\n2e9 0 0 1 0 1 0 0 0\n1e9 0 0 1 0 1 0 0 0\n')
        assert info.value.line == 3

    def test_non_numeric(self):
        with pytest.raises(TouchstoneParseError):
            parse('# HZ S RI R 50\n1e9 zero 0 1 0 1 0 0 0\n')

    def test_rejects_y_parameters(self):
        with pytest.raises(TouchstoneParseError):
            parse('# HZ Y RI R 50\n1e9 0 0 1 0 1 0 0 0\n')
