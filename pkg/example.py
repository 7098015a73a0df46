#!/usr/bin/env python
# -*- coding: utf-8 -*-

from pensiongap.params import RunConfig
from pensiongap.main import (run_pensions, run_targets, run_simulation,
                             run_break_even, run_sweep_age)


def example_base_case():
    """
    Base case: a worker entering the job market at 30 and retiring at 65,
    with the two salary paths (exponential and linear)

    Writes pensions.csv and targets.csv in the current directory
    """
    config = RunConfig(outdir='.', overwrite=True)
    print(run_pensions(config))
    run_targets(config)


def example_simulation():
    """
    Monte Carlo simulation of the fund, using all the CPUs

    Writes strategy_stats.csv, fund_stats.csv and pension_hist.csv
    """
    run_simulation(RunConfig(
        outdir='out/',
        n_scenarios=10000,
        multiprocessing=-1,   # activate multiprocessing
        ))

    # NOTES:
    # * the simulation is reproducible for a given master_seed, whatever the
    #   number of processes and the block size
    # * force_riskless=True gives the reference fund invested only in the
    #   riskless asset


def example_mortality_table():
    """
    Annuity values computed from a mortality table, instead of the default
    values at 60, 63, 65, 67 and 70

    The table is a CSV file with header "age,p" (one-year survival
    probabilities) or "age,q" (death probabilities), for contiguous ages
    """
    run_pensions(RunConfig(
        mortality_file='mortality.csv',
        annuity_rate=0.015,
        salary_kind='linear',
        ))


def example_break_even():
    """
    Values of the conversion coefficient, GDP growth and salary growth
    for which the new pension equals the old one
    """
    config = RunConfig(outdir='out/', overwrite=True)
    for parameter in ['beta', 'w', 'g']:
        df = run_break_even(config, parameter)
        print(df.groupby('salary_kind').break_even.first())


def example_retirement_age():
    """
    Pensions and replacement ratios for retirement ages between 60 and 70
    """
    run_sweep_age(RunConfig(outdir='out/', overwrite=True),
                  [60, 63, 65, 67, 70],
                  simulate=True)
