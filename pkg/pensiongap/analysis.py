#!/usr/bin/env python
# -*- coding: utf-8 -*-

'''
Break-even points, retirement age sweeps and pension distributions
'''

from dataclasses import dataclass, field
import warnings
import numpy as np
from scipy import optimize

from pensiongap.common import (NoSignChange, EmptySamples, NonPositiveGap,
                               InvalidParameter, BREAK_EVEN_PARAMETERS,
                               BREAK_EVEN_BRACKETS)
from pensiongap.model import (SalarySpec, PensionRules, salary_at, old_pension,
                              old_replacement_ratio, new_pension, replacement_ratios)
from pensiongap.actuarial import conversion_coefficient
from pensiongap.targets import final_target, solve_r_star, TargetSchedule
from pensiongap.control import solve_riccati
from pensiongap.simulation import simulate_paths, final_pension_distribution


BREAK_EVEN_XTOL = 1e-8


@dataclass(frozen=True)
class BreakEvenQuery:
    '''
    parameter: 'beta' (conversion coefficient), 'w' (GDP growth) or
               'g' (salary growth)
    All the other parameters are pinned to the values of `spec`, `rules`,
    `T` and `beta`.
    '''
    parameter: str
    spec: SalarySpec
    rules: PensionRules
    T: float
    beta: float
    bracket: tuple = None

    def __post_init__(self):
        if self.parameter not in BREAK_EVEN_PARAMETERS:
            raise InvalidParameter('parameter', 'expected one of {} (got "{}")'.format(
                list(BREAK_EVEN_PARAMETERS), self.parameter))
        if self.bracket is None:
            object.__setattr__(self, 'bracket', BREAK_EVEN_BRACKETS[self.parameter])
        lo, hi = self.bracket
        if not lo < hi:
            raise InvalidParameter('bracket', 'expected lo < hi (got {})'.format(self.bracket))

    def pensions(self, value):
        '''
        (P_o, P_n) when the parameter is set to `value`
        '''
        spec, rules, beta = self.spec, self.rules, self.beta
        if self.parameter == 'beta':
            beta = value
        elif self.parameter == 'w':
            rules = rules.with_gdp_growth(value)
        else:
            spec = spec.with_growth(value)
        P_o = old_pension(rules, self.T, salary_at(spec, self.T))
        P_n = new_pension(spec, rules, self.T, beta)
        return float(P_o), float(P_n)

    def gap(self, value):
        P_o, P_n = self.pensions(value)
        return P_o - P_n


def gap_curve(q, n=101):
    '''
    P_o - P_n sampled on n points of the bracket

    Returns (values, gaps)
    '''
    values = np.linspace(q.bracket[0], q.bracket[1], n)
    gaps = np.array([q.gap(v) for v in values])
    return values, gaps


def break_even(q):
    '''
    Parameter value at which the old and new pensions coincide, by bisection
    '''
    lo, hi = q.bracket
    f_lo, f_hi = q.gap(lo), q.gap(hi)
    if f_lo*f_hi > 0:
        values, gaps = gap_curve(q)
        raise NoSignChange(q.parameter, q.bracket, values, gaps, kind=q.spec.kind)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi

    return optimize.bisect(q.gap, lo, hi, xtol=BREAK_EVEN_XTOL)


@dataclass
class AgeSweepRow:
    age: int
    T: int
    annuity: float
    beta: float
    kind: str
    P_o: float
    P_n: float
    Pi_o: float
    Pi_n: float
    r_star: float = np.nan
    P_tot_median: float = np.nan
    P_tot_mean: float = np.nan
    prob_reach_P_o: float = np.nan
    note: str = ''


def age_sweep(ages, config, simulate=False):
    '''
    One row per retirement age and salary kind

    Arguments:
        * ages: retirement ages
        * config: RunConfig providing all the other parameters
        * simulate: also run the Monte Carlo simulation for each age and
          report the distribution of the total pension
    '''
    src = config.annuity_source()
    market = config.market()
    rules = config.rules()
    rows = []
    for age in ages:
        T = age - config.entry_age
        if not T > 0:
            raise InvalidParameter('ages', 'retirement age {} must be greater than the entry age {}'.format(
                age, config.entry_age))
        annuity, beta = conversion_coefficient(src, age, config.annuity_rate)

        for kind in config.salary_kinds():
            spec = config.salary(kind)
            S_T = float(salary_at(spec, T))
            P_o = float(old_pension(rules, T, S_T))
            P_n = float(new_pension(spec, rules, T, beta))
            Pi_o = old_replacement_ratio(rules, T)
            Pi_n = replacement_ratios(P_o, P_n, S_T)[1]
            row = AgeSweepRow(age=age, T=T, annuity=annuity, beta=beta, kind=kind,
                              P_o=P_o, P_n=P_n, Pi_o=Pi_o, Pi_n=Pi_n)

            F_T = final_target(P_o, P_n, annuity)
            try:
                row.r_star = solve_r_star(config.x0, spec, T, F_T, guess=market.r)
            except NonPositiveGap:
                row.note = 'gap already closed'
                warnings.warn('Retirement age {}, {} salary: gap already closed'.format(age, kind))
                rows.append(row)
                continue

            if simulate:
                sched = TargetSchedule(x0=config.x0, r_star=row.r_star, T=T,
                                       final_target=F_T, spec=spec)
                sol = solve_riccati(market, sched, mode=config.riccati_mode)
                ens = simulate_paths(config.simulation_config(T), sol, spec, market)
                summary = pension_summary(final_pension_distribution(ens, P_n, annuity), P_o)
                row.P_tot_median = summary['median']
                row.P_tot_mean = summary['mean']
                row.prob_reach_P_o = summary['prob_reach_P_o']

            if config.verbose:
                print('Age {} ({} salary): P_o={:.4g} P_n={:.4g} r*={:.4g}'.format(
                    age, kind, P_o, P_n, row.r_star))
            rows.append(row)

    return rows


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    total: int

    @property
    def centers(self):
        return 0.5*(self.edges[1:] + self.edges[:-1])


def histogram(samples, n_bins):
    '''
    Equal-width bins over [min, max], the last bin being right-closed

    When all the samples are equal, the bins have zero width and the last
    one holds all the samples.
    '''
    samples = np.asarray(samples, dtype='float64').ravel()
    if samples.size == 0:
        raise EmptySamples()
    if not n_bins >= 1:
        raise InvalidParameter('n_bins', 'must be >= 1 (got {})'.format(n_bins))
    lo, hi = samples.min(), samples.max()
    if lo == hi:
        edges = np.full(int(n_bins) + 1, lo)
        counts = np.zeros(int(n_bins), dtype='int64')
        counts[-1] = samples.size
    else:
        counts, edges = np.histogram(samples, bins=int(n_bins), range=(lo, hi))
    return Histogram(edges=edges, counts=counts, total=int(samples.size))


def pension_summary(samples, P_o):
    '''
    Summary of the distribution of the total pension
    '''
    samples = np.asarray(samples, dtype='float64')
    if samples.size == 0:
        raise EmptySamples()
    return {
        'median': float(np.median(samples)),
        'mean': float(np.mean(samples)),
        'p5': float(np.percentile(samples, 5)),
        'p95': float(np.percentile(samples, 95)),
        'prob_reach_P_o': float(np.mean(samples >= P_o)),
        }
