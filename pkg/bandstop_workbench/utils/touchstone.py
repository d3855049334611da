'''Touchstone v1 two-port files.

Rows hold f, S11, S21, S12, S22 as pairs of reals. The writer always emits
`# HZ S RI R <z_ref>`; the reader also accepts kHz/MHz/GHz and the MA/DB formats.
'''

import numpy as np

from ..engine import FrequencyResponse
from ..errors import TouchstoneParseError

FREQ_UNITS = {'HZ': 1.0, 'KHZ': 1e3, 'MHZ': 1e6, 'GHZ': 1e9}
FORMATS = ('RI', 'MA', 'DB')
ROW_VALUES = 9


def write_touchstone(stream, resp, comments = ()):
    for comment in comments:
        stream.write(f'! {comment}\n')
    stream.write(f'# HZ S RI R {resp.z_ref:g}\n')
    for i, freq in enumerate(resp.freqs):
        values = [freq]
        for s in (resp.s11, resp.s21, resp.s12, resp.s22):
            values += [s[i].real, s[i].imag]
        stream.write(' '.join(f'{v:.17g}' for v in values) + '\n')

def save_touchstone(path, resp, comments = ()):
    with open(path, 'w') as f:
        write_touchstone(f, resp, comments)

def _parse_options(tokens, lineno):
    unit, fmt, z_ref = 'GHZ', 'MA', 50.0
    i = 0
    while i < len(tokens):
        token = tokens[i].upper()
        if token in FREQ_UNITS:
            unit = token
        elif token in FORMATS:
            fmt = token
        elif token == 'S':
            pass
        elif token in ('Y', 'Z', 'H', 'G'):
            raise TouchstoneParseError(f'only S parameters are supported, got {tokens[i]}', lineno)
        elif token == 'R':
            if i + 1 == len(tokens):
                raise TouchstoneParseError('reference resistance missing after R', lineno)
            try:
                z_ref = float(tokens[i + 1])
            except ValueError:
                raise TouchstoneParseError(f'bad reference resistance {tokens[i + 1]!r}', lineno) from None
            i += 1
        else:
            raise TouchstoneParseError(f'unknown option {tokens[i]!r}', lineno)
        i += 1
    return unit, fmt, z_ref

def _to_complex(a, b, fmt):
    if fmt == 'RI':
        return a + 1j * b
    magnitude = a if fmt == 'MA' else 10 ** (a / 20)
    return magnitude * np.exp(1j * np.deg2rad(b))

def parse_touchstone(lines):
    options = None
    pending, pending_line = [], None
    rows = []
    lineno = 0

    for lineno, raw in enumerate(lines, 1):
        line = raw.split('!', 1)[0].strip()
        if not line:
            continue
        if line.startswith('#'):
            if options is not None:
                raise TouchstoneParseError('second option line', lineno)
            options = _parse_options(line[1:].split(), lineno)
            continue
        if options is None:
            raise TouchstoneParseError('the option line must precede the data', lineno)

        try:
            values = [float(token) for token in line.split()]
        except ValueError as e:
            raise TouchstoneParseError(f'non-numeric value ({e})', lineno) from None
        if not pending:
            pending_line = lineno
        pending += values
        if len(pending) > ROW_VALUES:
            raise TouchstoneParseError(f'expected {ROW_VALUES} values per row, got {len(pending)}', lineno)
        if len(pending) == ROW_VALUES:
            rows.append((pending_line, pending))
            pending = []

    if pending:
        raise TouchstoneParseError(f'incomplete data row ({len(pending)} of {ROW_VALUES} values)', lineno)
    if options is None:
        raise TouchstoneParseError('missing option line', lineno or None)
    if not rows:
        raise TouchstoneParseError('no data rows', lineno or None)

    unit, fmt, z_ref = options
    freqs = np.array([values[0] for _, values in rows]) * FREQ_UNITS[unit]
    for (line_no, _), step in zip(rows[1:], np.diff(freqs)):
        if step <= 0:
            raise TouchstoneParseError('frequencies must be strictly ascending', line_no)
    if freqs[0] <= 0:
        raise TouchstoneParseError('frequencies must be positive', rows[0][0])

    s = [[_to_complex(values[1 + 2 * k], values[2 + 2 * k], fmt) for _, values in rows] for k in range(4)]
    s11, s21, s12, s22 = s
    return FrequencyResponse(freqs, s11, s21, s12, s22, z_ref = z_ref)

def load_touchstone(path):
    with open(path) as f:
        return parse_touchstone(f)
