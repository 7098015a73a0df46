import argparse
import os
import sys
from pensiongap.common import (PensionGapError, InvalidParameter, NoSignChange,
                               BREAK_EVEN_PARAMETERS)
from pensiongap.params import RunConfig, parse_overrides
from pensiongap.main import (run_pensions, run_targets, run_simulation,
                             run_break_even, run_sweep_age)


def common_options():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--config', help='TOML file of parameters (key = value)')
    parser.add_argument('--mortality', help='Mortality table in CSV format (age,p or age,q); '
                        'if not provided, the annuity values are taken from the overrides')
    parser.add_argument('--annuity', action='append', default=[], metavar='AGE:VALUE',
                        help='Annuity value at a retirement age (may be repeated)')
    parser.add_argument('--outdir', help='Output directory')
    parser.add_argument('--salary-kind', choices=['exponential', 'linear', 'both'])
    parser.add_argument('--set', action='append', default=[], metavar='KEY=VALUE',
                        help='Set any parameter (may be repeated), '
                             'e.g. --set retirement_age=70')
    parser.add_argument('--overwrite', action='store_true',
                        help='Overwrite existing output files')
    parser.add_argument('--quiet', action='store_true')
    return parser


def simulation_options():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--seed', type=int, help='Master seed of the simulation')
    parser.add_argument('--scenarios', type=int, help='Number of scenarios')
    parser.add_argument('--multiprocessing', type=int,
                        help='Number of processes (0: single process, <0: all CPUs)')
    parser.add_argument('--force-riskless', action='store_true',
                        help='Invest the whole fund in the riskless asset')
    parser.add_argument('--bins', type=int, help='Number of bins of the pension histogram')
    return parser


def build_config(args):
    '''
    RunConfig from the defaults, the config file and the command line flags
    (by increasing precedence)
    '''
    kwargs = {}
    for item in args.set:
        if '=' not in item:
            raise InvalidParameter(item, 'expected KEY=VALUE')
        k, v = item.split('=', 1)
        kwargs[k.strip()] = v.strip()

    flags = {
        'mortality_file': args.mortality,
        'outdir': args.outdir,
        'salary_kind': args.salary_kind,
        'master_seed': getattr(args, 'seed', None),
        'n_scenarios': getattr(args, 'scenarios', None),
        'multiprocessing': getattr(args, 'multiprocessing', None),
        'n_bins': getattr(args, 'bins', None),
        }
    kwargs.update({k: v for k, v in flags.items() if v is not None})
    if getattr(args, 'force_riskless', False):
        kwargs['force_riskless'] = True
    if args.overwrite:
        kwargs['overwrite'] = True
    if args.quiet:
        kwargs['verbose'] = False

    if args.config is not None:
        config = RunConfig.from_file(args.config, **kwargs)
    else:
        config = RunConfig(**kwargs)

    if args.annuity:
        overrides = dict(config.annuity_overrides)
        overrides.update(parse_overrides(','.join(args.annuity)))
        config.update(annuity_overrides=overrides)
        config.finalize()

    return config


def parse_ages(value):
    try:
        return [int(x) for x in value.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma-separated integer ages (got "{}")'.format(value))


def main(args=None):

    parser = argparse.ArgumentParser(
        prog='pensiongap',
        description='''Pension gap filling with a defined contribution fund:
                       pensions, targets, optimal investment strategy, Monte Carlo
                       simulation of the fund, break-even points and retirement
                       age sweep. Results are written as CSV files.''')
    sub = parser.add_subparsers(dest='command', required=True)
    common = common_options()
    simul = simulation_options()

    sub.add_parser('pensions', parents=[common],
                   help='Old and new pensions, replacement ratios and r* (pensions.csv)')
    sub.add_parser('targets', parents=[common],
                   help='Yearly targets and value function coefficients (targets.csv)')
    sub.add_parser('simulate', parents=[common, simul],
                   help='Monte Carlo simulation (strategy_stats.csv, fund_stats.csv, pension_hist.csv)')
    p = sub.add_parser('break-even', parents=[common],
                       help='Break-even point of a parameter (break_even_<param>.csv)')
    p.add_argument('parameter', choices=list(BREAK_EVEN_PARAMETERS))
    p.add_argument('--bracket', nargs=2, type=float, metavar=('LO', 'HI'),
                   help='Search interval')
    p = sub.add_parser('sweep-age', parents=[common, simul],
                       help='Pensions for several retirement ages (age_sweep.csv)')
    p.add_argument('--ages', type=parse_ages, default=[60, 63, 65, 67, 70],
                   help='Comma-separated retirement ages (default: 60,63,65,67,70)')
    p.add_argument('--simulate', action='store_true',
                   help='Also simulate the fund for each age')

    args = parser.parse_args(args)

    try:
        config = build_config(args)
        if config.verbose:
            config.print_info()

        if args.command == 'pensions':
            run_pensions(config)
        elif args.command == 'targets':
            run_targets(config)
        elif args.command == 'simulate':
            run_simulation(config)
        elif args.command == 'break-even':
            run_break_even(config, args.parameter,
                           bracket=None if args.bracket is None else tuple(args.bracket))
        elif args.command == 'sweep-age':
            run_sweep_age(config, args.ages, simulate=args.simulate)
    except NoSignChange as e:
        print('Error: {}'.format(e), file=sys.stderr)
        print('Sampled gap curve written to {}'.format(
            os.path.join(config.outdir, 'break_even_{}.csv'.format(e.parameter))), file=sys.stderr)
        return 1
    except (PensionGapError, OSError) as e:
        print('Error: {}'.format(e), file=sys.stderr)
        return 1

    return 0
