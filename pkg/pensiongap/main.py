#!/usr/bin/env python
# encoding: utf-8

'''
Processing chains of the command line subcommands

Each run_* function takes a RunConfig, computes the artifacts for the
configured salary kind(s), writes them as CSV in config.outdir and returns
the tables (pandas DataFrames).
'''

from dataclasses import dataclass, asdict
from datetime import datetime
import numpy as np
import pandas as pd

from pensiongap.model import (salary_at, contribution_at, old_pension, old_replacement_ratio,
                              new_pension, replacement_ratios)
from pensiongap.actuarial import conversion_coefficient
from pensiongap.targets import final_target, build_schedule, interim_target
from pensiongap.control import solve_riccati, gamma_at, value_function, optimal_fraction
from pensiongap.simulation import simulate_paths, ensemble_stats, final_pension_distribution
from pensiongap.analysis import (BreakEvenQuery, break_even, gap_curve, age_sweep,
                                 histogram, pension_summary)
from pensiongap.common import NoSignChange
from pensiongap.output import CSVOutput


@dataclass
class Calibration:
    '''
    Pensions, final target and interim target schedule of one salary kind
    '''
    kind: str
    T: int
    S_T: float
    annuity: float
    beta: float
    P_o: float
    P_n: float
    Pi_o: float
    Pi_n: float
    F_T: float
    r_star: float
    sched: object


def calibrate(config, kind):
    spec = config.salary(kind)
    rules = config.rules()
    T = config.horizon
    annuity, beta = conversion_coefficient(config.annuity_source(), config.retirement_age,
                                           config.annuity_rate)

    S_T = float(salary_at(spec, T))
    P_o = float(old_pension(rules, T, S_T))
    P_n = float(new_pension(spec, rules, T, beta))
    Pi_o = old_replacement_ratio(rules, T)
    Pi_n = replacement_ratios(P_o, P_n, S_T)[1]
    F_T = float(final_target(P_o, P_n, annuity))

    sched = build_schedule(config.x0, spec, T, F_T, guess=config.r)

    if config.verbose:
        print('{} salary: P_o={:.4g}, P_n={:.4g}, F(T)={:.4g}, r*={:.4g}'.format(
            kind, P_o, P_n, F_T, sched.r_star))

    return Calibration(kind=kind, T=T, S_T=S_T, annuity=annuity, beta=beta,
                       P_o=P_o, P_n=P_n, Pi_o=Pi_o, Pi_n=Pi_n, F_T=F_T,
                       r_star=sched.r_star, sched=sched)


def fraction_on_target(sol, t, F):
    '''
    Unconstrained optimal fraction at x = F(t), NaN where F(t) = 0
    '''
    y = np.full_like(F, np.nan)
    nz = F != 0
    if nz.any():
        y[nz] = optimal_fraction(sol, t[nz], F[nz])
    return y


def start(config, what):
    t0 = datetime.now()
    if config.verbose:
        print('Starting {} at {}'.format(what, t0))
    return t0


def done(config, t0):
    if config.verbose:
        print('Done in {}'.format(datetime.now()-t0))


def run_pensions(config):
    '''
    Old and new pensions, replacement ratios, r* and final salary
    -> pensions.csv
    '''
    t0 = start(config, 'pensions')
    rows = []
    for kind in config.salary_kinds():
        cal = calibrate(config, kind)
        rows.append({'salary_kind': kind, 'P_o': cal.P_o, 'P_n': cal.P_n,
                     'Pi_o': cal.Pi_o, 'Pi_n': cal.Pi_n, 'r_star': cal.r_star,
                     'S_T': cal.S_T, 'annuity': cal.annuity, 'F_T': cal.F_T})
    df = pd.DataFrame(rows)

    with CSVOutput(config.outdir, overwrite=config.overwrite, verbose=config.verbose) as out:
        out.write('pensions.csv', df)

    done(config, t0)
    return df


def run_targets(config):
    '''
    Yearly targets, value function coefficients and optimal fraction on target
    -> targets.csv
    '''
    t0 = start(config, 'targets')
    tables = []
    for kind in config.salary_kinds():
        cal = calibrate(config, kind)
        sol = solve_riccati(config.market(), cal.sched, mode=config.riccati_mode,
                            verbose=config.verbose)
        t = np.arange(cal.T + 1, dtype='float64')
        F = interim_target(cal.sched, t)
        df = pd.DataFrame({
            'salary_kind': kind,
            't': t,
            'salary': salary_at(cal.sched.spec, t),
            'contribution': contribution_at(cal.sched.spec, t),
            'F': F,
            'alpha': sol.alpha(t),
            'beta': sol.beta(t),
            'gamma': gamma_at(sol, t),
            'value_at_target': value_function(sol, t, F),
            'y_at_target': fraction_on_target(sol, t, F),
            })
        df['beta_form'] = sol.beta_reading
        tables.append(df)
    df = pd.concat(tables, ignore_index=True)

    with CSVOutput(config.outdir, overwrite=config.overwrite, verbose=config.verbose) as out:
        out.write('targets.csv', df)

    done(config, t0)
    return df


def run_simulation(config):
    '''
    Monte Carlo simulation of the fund under the clamped strategy
    -> strategy_stats.csv, fund_stats.csv, pension_hist.csv

    Returns a dict {kind: {'calibration', 'ensemble', 'stats', 'P_tot',
    'histogram', 'summary'}} and the three tables.
    '''
    t0 = start(config, 'simulation')
    market = config.market()
    results = {}
    strategy, fund, hist = [], [], []
    for kind in config.salary_kinds():
        cal = calibrate(config, kind)
        sol = solve_riccati(market, cal.sched, mode=config.riccati_mode,
                            verbose=config.verbose)
        ens = simulate_paths(config.simulation_config(cal.T), sol, cal.sched.spec,
                             market, verbose=config.verbose)
        stats = ensemble_stats(ens, config.percentiles)
        P_tot = final_pension_distribution(ens, cal.P_n, cal.annuity)
        h = histogram(P_tot, config.n_bins)
        summary = pension_summary(P_tot, cal.P_o)

        if config.verbose:
            print('{} salary: P_tot median {:.4g}, mean {:.4g}, 5-95% [{:.4g}, {:.4g}], '
                  'P(P_tot >= P_o={:.4g}) = {:.3g}'.format(
                      kind, summary['median'], summary['mean'], summary['p5'],
                      summary['p95'], cal.P_o, summary['prob_reach_P_o']))

        for var, lst in [('y', strategy), ('X', fund)]:
            df = stats.to_dataframe(var)
            df.insert(0, 'salary_kind', kind)
            lst.append(df)
        hist.append(pd.DataFrame({'salary_kind': kind,
                                  'bin_lo': h.edges[:-1],
                                  'bin_hi': h.edges[1:],
                                  'count': h.counts,
                                  'total': h.total}))

        results[kind] = {'calibration': cal, 'ensemble': ens, 'stats': stats,
                         'P_tot': P_tot, 'histogram': h, 'summary': summary}

    strategy = pd.concat(strategy, ignore_index=True)
    fund = pd.concat(fund, ignore_index=True)
    hist = pd.concat(hist, ignore_index=True)

    with CSVOutput(config.outdir, overwrite=config.overwrite, verbose=config.verbose) as out:
        out.write('strategy_stats.csv', strategy)
        out.write('fund_stats.csv', fund)
        out.write('pension_hist.csv', hist)

    done(config, t0)
    return results, (strategy, fund, hist)


def run_break_even(config, parameter, bracket=None, n_samples=101):
    '''
    Break-even point of the parameter ('beta', 'w' or 'g') and the gap curve
    P_o - P_n on the bracket
    -> break_even_<parameter>.csv

    When the gap does not change sign on the bracket, the sampled curve is
    still written (with an empty break-even value) before NoSignChange is
    raised.
    '''
    t0 = start(config, 'break-even in {}'.format(parameter))
    src = config.annuity_source()
    _, beta = conversion_coefficient(src, config.retirement_age, config.annuity_rate)
    tables = []
    failed = None
    for kind in config.salary_kinds():
        q = BreakEvenQuery(parameter=parameter, spec=config.salary(kind),
                           rules=config.rules(), T=config.horizon,
                           beta=beta, bracket=bracket)
        try:
            root = break_even(q)
        except NoSignChange as e:
            failed = failed or e
            root = np.nan
        values, gaps = gap_curve(q, n_samples)
        pensions = np.array([q.pensions(v) for v in values])
        tables.append(pd.DataFrame({'salary_kind': kind,
                                    'parameter': parameter,
                                    'value': values,
                                    'P_o': pensions[:, 0],
                                    'P_n': pensions[:, 1],
                                    'gap': gaps,
                                    'break_even': root}))
        if config.verbose:
            print('{} salary: break-even {} = {:.6g}'.format(kind, parameter, root))
    df = pd.concat(tables, ignore_index=True)

    with CSVOutput(config.outdir, overwrite=config.overwrite, verbose=config.verbose) as out:
        out.write('break_even_{}.csv'.format(parameter), df)

    if failed is not None:
        raise failed

    done(config, t0)
    return df


def run_sweep_age(config, ages, simulate=False):
    '''
    Pensions and replacement ratios for several retirement ages, one row
    per age and one group of columns per salary kind
    -> age_sweep.csv
    '''
    t0 = start(config, 'retirement age sweep')
    rows = age_sweep(ages, config, simulate=simulate)

    long = pd.DataFrame([asdict(r) for r in rows])
    per_kind = ['P_o', 'P_n', 'Pi_o', 'Pi_n', 'r_star', 'note']
    if simulate:
        per_kind += ['P_tot_median', 'P_tot_mean', 'prob_reach_P_o']
    wide = long.pivot(index=['age', 'T', 'annuity', 'beta'], columns='kind', values=per_kind)
    kinds = [k for k in config.salary_kinds()]
    wide = wide.reindex(columns=[(v, k) for k in kinds for v in per_kind])
    wide.columns = ['{}_{}'.format(v, k) for v, k in wide.columns]
    for col in wide.columns:
        if not col.startswith('note_'):
            wide[col] = wide[col].astype('float64')
    wide = wide.reset_index()

    with CSVOutput(config.outdir, overwrite=config.overwrite, verbose=config.verbose) as out:
        out.write('age_sweep.csv', wide)

    done(config, t0)
    return wide
