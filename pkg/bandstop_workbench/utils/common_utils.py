import os
import re

from tqdm import tqdm

PREFIXES = {
    'G': 1e9,
    'M': 1e6,
    'k': 1e3,
    'm': 1e-3,
    'u': 1e-6,
    'n': 1e-9,
    'p': 1e-12,
    'f': 1e-15,
}

UNITS = ('Hz', 'F', 'H', 'V', 'Ohm', 'ohm', 'Ω')

_NUMBER = re.compile(r'^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(\S*)\s*$')


def exists(x):
    return x is not None

def default(val, d):
    if exists(val):
        return val
    return d() if callable(d) else d

def parse_quantity(text):
    '''Parses an engineering-notation quantity such as `0.83GHz`, `2.2pF` or `50`.

    Prefixes `G/M/k/m/u/n/p/f` are case-sensitive, so `1M` is 1e6 and `1m` is 1e-3.
    A trailing unit (Hz, F, H, V, Ohm) is accepted and ignored.
    '''
    match = _NUMBER.match(str(text))
    if match is None:
        raise ValueError(f'cannot parse quantity {text!r}')
    number, suffix = match.groups()
    value = float(number)

    if suffix == '' or suffix in UNITS:
        return value
    prefix, unit = suffix[0], suffix[1:]
    if prefix in PREFIXES and (unit == '' or unit in UNITS):
        return value * PREFIXES[prefix]
    raise ValueError(f'unknown suffix {suffix!r} in {text!r}')

def format_quantity(value, unit = '', prefix = None, digits = 5):
    '''Formats `value` with an SI prefix, picking one automatically unless `prefix` is given.'''
    if prefix is None:
        prefix = ''
        magnitude = abs(value)
        if magnitude > 0:
            for p, scale in sorted(PREFIXES.items(), key = lambda item: -item[1]):
                if magnitude >= scale:
                    prefix = p
                    break
            else:
                prefix = 'f'
            if 1 <= magnitude < 1e3:
                prefix = ''
    scale = PREFIXES.get(prefix, 1.0)
    return f'{value / scale:.{digits}g} {prefix}{unit}'.rstrip()

def progress_bar(iterable = None, *, total = None, desc = None, disable = False):
    # NO_COLOR terminals get a plain ascii bar
    return tqdm(
        iterable,
        total = total,
        desc = desc,
        leave = False,
        disable = disable,
        ascii = bool(os.environ.get('NO_COLOR'))
    )
