import argparse
import datetime
import json
import logging
import sys
from dataclasses import replace

import numpy as np

from .engine import sweep
from .errors import (
    AnalysisError,
    CalibrationInfeasibleError,
    DesignError,
    DisjointRangeError,
    FormatError,
    NoStopbandError,
)
from .metrics import analyze
from .synthesis import FilterSpec, synthesize
from .topologies import TopologyId, get_topology, select_topology
from .tuning import CalibrationTarget, Calibrator, CbRule, tuning_curve_bias, tuning_curve_caps
from .utils import default, format_quantity, parse_quantity
from .utils.design_file import DesignFile, load_design, save_design
from .utils.touchstone import load_touchstone, save_touchstone
from .varactor import MEASURED_BIAS_CASES, BiasPoint, load_profile

logger = logging.getLogger(__name__)

DB_FLOOR = -200.0

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DESIGN = 2
EXIT_ANALYSIS = 3


class WorkbenchArgumentParser(argparse.ArgumentParser):
    # usage errors share the I/O exit code, 2 is reserved for infeasible designs
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f'{self.prog}: error: {message}\n')


def quantity(text):
    return parse_quantity(text)

def _element_table(design):
    core, coupled, practical = design.core, design.coupled, design.practical
    rows = [
        ('g', ', '.join(f'{g:.6g}' for g in design.g.g)),
        ('Z_T', format_quantity(core.zt, 'Ohm', prefix = '')),
        ('L', format_quantity(core.l, 'H', prefix = 'n')),
        ('C', format_quantity(core.c, 'F', prefix = 'p')),
        ('dk', f'{core.dk:.6g}'),
        ('L_M', format_quantity(coupled.lm, 'H', prefix = 'n')),
        ('L_1', format_quantity(coupled.l1, 'H', prefix = 'n')),
        ('C_M', format_quantity(coupled.cm, 'F', prefix = 'p')),
        ('C_1', format_quantity(coupled.c1, 'F', prefix = 'p')),
        ('C_C', format_quantity(practical.cc, 'F', prefix = 'p')),
        ('C_k', format_quantity(practical.ck, 'F', prefix = 'p')),
        ('C_j', format_quantity(practical.cj, 'F', prefix = 'p')),
        ('C_a', format_quantity(practical.ca, 'F', prefix = 'p')),
        ('C_b', format_quantity(practical.cb, 'F', prefix = 'p')),
    ]
    return '\n'.join(f'{name:<5} {value}' for name, value in rows)

def _metrics_table(m):
    rows = [
        ('f_notch', format_quantity(m.f_notch, 'Hz', prefix = 'G', digits = 6)),
        ('f_center', format_quantity(m.f_center, 'Hz', prefix = 'G', digits = 6)),
        ('rejection', f'{m.rejection_db:.2f} dB'),
        ('f_lo', format_quantity(m.f_lo, 'Hz', prefix = 'G', digits = 6)),
        ('f_hi', format_quantity(m.f_hi, 'Hz', prefix = 'G', digits = 6)),
        ('FBW', f'{m.fbw:.4f}'),
        ('PB IL', f'{m.pb_il_db:.3f} dB'),
        ('SB RL', f'{m.sb_rl_db:.3f} dB'),
        ('modes', ', '.join(format_quantity(f, 'Hz', prefix = 'G', digits = 6) for f in m.modes) or '-'),
    ]
    return '\n'.join(f'{name:<10} {value}' for name, value in rows)

def _metrics_dict(m):
    return {
        'f_notch_hz': m.f_notch,
        'f_center_hz': m.f_center,
        'rejection_db': m.rejection_db,
        'f_lo_hz': m.f_lo,
        'f_hi_hz': m.f_hi,
        'fbw': m.fbw,
        'pb_il_db': m.pb_il_db,
        'sb_rl_db': m.sb_rl_db,
        'modes_hz': list(m.modes),
    }

def _loss_from_args(args, loss):
    if args.rs is not None:
        loss = replace(loss, varactor_rs = args.rs, varactor_rs_b = None)
    return replace(loss, inductor_q = default(args.q, loss.inductor_q))

# commands

def cmd_synth(args):
    spec = FilterSpec(f0 = args.f0, delta = args.fbw, order = args.order, z0 = args.z0, cc = args.cc)
    design = synthesize(spec)
    topology = TopologyId(args.topology)
    if args.select:
        topology, report = select_topology(design, show_progress = args.progress)
        for r in report:
            detail = r.error or f'f_notch={r.metrics.f_notch:.6g} Hz fbw={r.metrics.fbw:.4f} modes={len(r.metrics.modes)}'
            print(f'# {r.topology.value}: score={r.score:.4g} {detail}')

    save_design(args.out, DesignFile(design = design, topology = topology))
    print(_element_table(design))
    print(f'topology {topology.value}')
    return EXIT_OK

def cmd_simulate(args):
    doc = load_design(args.design)
    if not args.fmin < args.fmax:
        raise ValueError('--fmin must be below --fmax')
    if args.points < 2:
        raise ValueError('--points must be at least 2')

    topology = TopologyId(default(args.topology, doc.topology))
    netlist = get_topology(
        topology,
        doc.design,
        loss = _loss_from_args(args, doc.loss),
        state = doc.state,
        bias_network = args.bias_network
    )
    resp = sweep(netlist, np.linspace(args.fmin, args.fmax, args.points))

    comments = ['bandstop-workbench simulate', f'topology {topology.value}']
    if args.timestamp:
        comments.append(f'created {datetime.datetime.now().isoformat(timespec = "seconds")}')
    save_touchstone(args.out, resp, comments)
    logger.info('wrote %d points to %s', len(resp), args.out)
    return EXIT_OK

def cmd_metrics(args):
    resp = load_touchstone(args.s2p)
    try:
        m = analyze(resp, passband_margin = args.margin, mode_threshold_db = args.mode_threshold)
    except AnalysisError as e:
        if args.json:
            kind = 'no_stopband' if isinstance(e, NoStopbandError) else 'sweep_too_narrow'
            print(json.dumps({'error': kind, 'message': str(e)}))
        raise

    if args.json:
        print(json.dumps(_metrics_dict(m), indent = 2))
    else:
        print(_metrics_table(m))
    return EXIT_OK

def cmd_calibrate(args):
    doc = load_design(args.design)
    spec = doc.spec
    target = CalibrationTarget(
        f0_target = default(args.f0, spec.f0),
        fbw_target = default(args.fbw, spec.delta),
        weight_fbw = args.weight
    )
    bounds = None
    if args.ca_bounds or args.cb_bounds:
        ca, cb = doc.state.ca, doc.state.cb
        bounds = (
            tuple(args.ca_bounds) if args.ca_bounds else (0.2 * ca, 5 * ca),
            tuple(args.cb_bounds) if args.cb_bounds else (0.2 * cb, 5 * cb),
        )
    calibrator = Calibrator(
        doc.design,
        doc.topology,
        target,
        bounds = bounds,
        state = doc.state,
        loss = doc.loss,
        max_evals = args.max_evals,
        show_progress = args.progress
    )
    try:
        result = calibrator.calibrate()
    except CalibrationInfeasibleError as e:
        if e.best_point is not None:
            ca, cb = e.best_point
            print(f'best C_a  {ca!r}')
            print(f'best C_b  {cb!r}')
        raise

    save_design(default(args.out, args.design), replace(doc, state = result.state))
    print(f'C_a  {format_quantity(result.state.ca, "F", prefix = "p")}')
    print(f'C_b  {format_quantity(result.state.cb, "F", prefix = "p")}')
    print(_metrics_table(result.metrics))
    return EXIT_OK

def cmd_tune(args):
    doc = load_design(args.design)
    if args.ca_grid:
        start, stop, n = args.ca_grid
        n = int(n)
        if n < 1:
            raise ValueError('--ca-grid needs at least one point')
        curve = tuning_curve_caps(
            doc.design,
            doc.topology,
            np.geomspace(start, stop, n),
            CbRule(args.cb_rule),
            state = doc.state,
            loss = doc.loss,
            show_progress = args.progress
        )
    else:
        profile = default(args.profile, doc.varactor_profile)
        if profile is None:
            raise ValueError('bias tuning needs --profile or a varactor_profile in the design file')
        biases = [BiasPoint(*b) for b in args.bias] if args.bias else [BiasPoint(*b) for b in MEASURED_BIAS_CASES]
        curve = tuning_curve_bias(doc.design, doc.topology, load_profile(profile), biases, loss = doc.loss, show_progress = args.progress)

    if args.out:
        with open(args.out, 'w', newline = '') as f:
            curve.write_csv(f)
    else:
        curve.write_csv(sys.stdout)
    if curve.gaps:
        logger.warning('%d of %d rows have no stopband', len(curve.gaps), len(curve))
    return EXIT_OK

def _interpolated_db(resp, param, grid):
    return np.interp(grid, resp.freqs, resp.db(param, floor = DB_FLOOR))

def cmd_compare(args):
    a, b = load_touchstone(args.a), load_touchstone(args.b)
    lo, hi = max(a.freqs[0], b.freqs[0]), min(a.freqs[-1], b.freqs[-1])
    if not lo < hi:
        raise DisjointRangeError(f'{args.a} and {args.b} share no frequency range')

    grid = np.union1d(a.freqs, b.freqs)
    grid = grid[(grid >= lo) & (grid <= hi)]
    dev21 = float(np.max(np.abs(_interpolated_db(a, 's21', grid) - _interpolated_db(b, 's21', grid))))
    dev11 = float(np.max(np.abs(_interpolated_db(a, 's11', grid) - _interpolated_db(b, 's11', grid))))
    passed = dev21 <= args.tol_db and dev11 <= args.tol_db

    print(f'points      {grid.size}')
    print(f'max dS21    {dev21:.6g} dB')
    print(f'max dS11    {dev11:.6g} dB')
    print(f'tolerance   {args.tol_db:g} dB')
    print('PASS' if passed else 'FAIL')
    if args.check and not passed:
        return EXIT_ANALYSIS
    return EXIT_OK

# parser

def build_parser():
    parser = WorkbenchArgumentParser(prog = 'bandstop-workbench', description = 'Tunable dual-mode bandstop filter workbench.')
    parser.add_argument('-v', '--verbose', action = 'count', default = 0)
    parser.add_argument('-q', '--quiet', action = 'store_true')
    sub = parser.add_subparsers(dest = 'command', required = True, parser_class = WorkbenchArgumentParser)

    p = sub.add_parser('synth', help = 'synthesize element values')
    p.add_argument('--f0', type = quantity, required = True)
    p.add_argument('--fbw', type = float, required = True)
    p.add_argument('--order', type = int, default = 2)
    p.add_argument('--z0', type = quantity, default = 50.0)
    p.add_argument('--cc', type = quantity, default = 2.2e-12)
    p.add_argument('--topology', default = TopologyId.PRACTICAL_FIG2_V1.value, choices = [t.value for t in TopologyId])
    p.add_argument('--select', action = 'store_true', help = 'pick the practical variant by simulation')
    p.add_argument('--out', default = 'design.json')
    p.set_defaults(func = cmd_synth)

    p = sub.add_parser('simulate', help = 'sweep a design and write a Touchstone file')
    p.add_argument('--design', required = True)
    p.add_argument('--topology', choices = [t.value for t in TopologyId])
    p.add_argument('--fmin', type = quantity, default = 0.3e9)
    p.add_argument('--fmax', type = quantity, default = 1.5e9)
    p.add_argument('--points', type = int, default = 1201)
    p.add_argument('--rs', type = quantity, help = 'varactor series resistance')
    p.add_argument('--q', type = float, help = 'inductor quality factor at f0')
    p.add_argument('--bias-network', action = 'store_true')
    p.add_argument('--timestamp', action = 'store_true', help = 'record the creation time in a comment')
    p.add_argument('--out', required = True)
    p.set_defaults(func = cmd_simulate)

    p = sub.add_parser('metrics', help = 'stopband figures of merit of a Touchstone file')
    p.add_argument('s2p')
    p.add_argument('--margin', type = float, default = 0.2)
    p.add_argument('--mode-threshold', type = float, default = 20.0)
    p.add_argument('--json', action = 'store_true')
    p.set_defaults(func = cmd_metrics)

    p = sub.add_parser('calibrate', help = 'fit C_a and C_b to a target')
    p.add_argument('--design', required = True)
    p.add_argument('--f0', type = quantity)
    p.add_argument('--fbw', type = float)
    p.add_argument('--weight', type = float, default = 0.25)
    p.add_argument('--ca-bounds', type = quantity, nargs = 2, metavar = ('LO', 'HI'))
    p.add_argument('--cb-bounds', type = quantity, nargs = 2, metavar = ('LO', 'HI'))
    p.add_argument('--max-evals', type = int, default = 500)
    p.add_argument('--out', help = 'defaults to rewriting --design')
    p.set_defaults(func = cmd_calibrate)

    p = sub.add_parser('tune', help = 'tuning curve over C_a or bias voltages')
    p.add_argument('--design', required = True)
    grid = p.add_mutually_exclusive_group()
    grid.add_argument('--ca-grid', type = quantity, nargs = 3, metavar = ('START', 'STOP', 'N'))
    grid.add_argument('--bias', type = float, nargs = 2, action = 'append', metavar = ('V1', 'V2'))
    p.add_argument('--cb-rule', default = CbRule.RECALIBRATED.value, choices = [r.value for r in CbRule])
    p.add_argument('--profile', help = 'varactor profile JSON')
    p.add_argument('--out', help = 'CSV path, stdout when omitted')
    p.set_defaults(func = cmd_tune)

    p = sub.add_parser('compare', help = 'compare two Touchstone files')
    p.add_argument('a')
    p.add_argument('b')
    p.add_argument('--tol-db', type = float, default = 0.1)
    p.add_argument('--check', action = 'store_true', help = 'exit with 3 when the comparison fails')
    p.set_defaults(func = cmd_compare)

    return parser

def main(argv = None):
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.ERROR if args.quiet else [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level = level, format = '%(levelname)s %(name)s: %(message)s', stream = sys.stderr)
    args.progress = not args.quiet and sys.stderr.isatty()

    try:
        return args.func(args)
    except DesignError as e:
        print(f'error: {e}', file = sys.stderr)
        return EXIT_DESIGN
    except AnalysisError as e:
        print(f'error: {e}', file = sys.stderr)
        return EXIT_ANALYSIS
    except (FormatError, OSError, ValueError) as e:
        print(f'error: {e}', file = sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
