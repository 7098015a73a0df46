#!/usr/bin/env python
# -*- coding: utf-8 -*-

from collections import OrderedDict
from fractions import Fraction
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
import numpy as np

from pensiongap.common import (InvalidParameter, SALARY_KINDS, RICCATI_MODES,
                               DEFAULT_PERCENTILES)
from pensiongap.model import MarketModel, PreferenceParams, SalarySpec, PensionRules
from pensiongap.actuarial import AnnuitySource, load_mortality_table
from pensiongap.simulation import SimulationConfig


FLOAT_FIELDS = ['x0', 'c', 'w', 'r', 'mu', 'sigma', 'rho', 's0',
                'g_exponential', 'k_exponential', 'g_linear', 'k_linear',
                'accrual', 'dt']
OPTIONAL_FLOAT_FIELDS = ['g', 'k', 'annuity_rate']
INT_FIELDS = ['entry_age', 'retirement_age', 'n_scenarios', 'master_seed',
              'block_size', 'multiprocessing', 'n_bins']
BOOL_FIELDS = ['overwrite', 'verbose', 'force_riskless']


class RunConfig(object):
    '''
    A class to store the run parameters

    Defaults are the base case: a worker entering the job market at 30 and
    retiring at 65, with exponential and linear salary paths.
    Parameters are passed as keyword arguments, or read from a flat TOML
    file with `RunConfig.from_file`.
    '''
    def __init__(self, **kwargs):

        # store attributes in an OrderedDict
        self.__dict__['_odict'] = OrderedDict()

        # define base case parameters
        self.common()

        # setup custom parameters
        self.update(**kwargs)

        # finalization
        self.finalize()

    @classmethod
    def from_file(cls, filename, **kwargs):
        '''
        Read parameters from a TOML file (key = value lines); the keyword
        arguments take precedence over the file
        '''
        with open(filename, 'rb') as fp:
            try:
                params = tomllib.load(fp)
            except tomllib.TOMLDecodeError as e:
                raise InvalidParameter('config', 'cannot parse "{}" ({})'.format(filename, e))
        params.update(kwargs)
        return cls(**params)

    def common(self):
        '''
        define base case parameters
        '''
        # financial market
        self.r = 0.015       # riskless rate
        self.mu = 0.06       # drift of the risky asset
        self.sigma = 0.12    # volatility of the risky asset
        self.rho = 0.03      # intertemporal discount rate

        # worker
        self.x0 = 1.         # initial fund
        self.entry_age = 30
        self.retirement_age = 65
        self.s0 = 1.         # initial salary

        # salary kind: 'exponential', 'linear' or 'both'
        self.salary_kind = 'both'
        self.g_exponential = 0.06    # salary growth
        self.k_exponential = 0.10    # fraction of the salary paid to the fund
        self.g_linear = 0.08
        self.k_linear = 0.04
        self.g = None        # if provided, override g and k for both kinds
        self.k = None

        # public pension
        self.accrual = 0.02  # accrual rate of the old pension
        self.c = 0.33        # contribution percentage of the new pension
        self.w = 0.015       # mean real GDP growth

        # annuities: table mode if mortality_file is provided, otherwise the
        # annuity values at retirement ages are taken from annuity_overrides
        self.mortality_file = None
        self.annuity_rate = None     # defaults to r
        self.annuity_overrides = {60: 20.95, 63: 19.11, 65: 17.875, 67: 16.64, 70: 14.81}

        # value function coefficients: 'closed_form' or 'numerical_ode'
        self.riccati_mode = 'closed_form'

        # Monte Carlo simulation
        self.dt = 1/26.
        self.n_scenarios = 1000
        self.master_seed = 20190101
        self.block_size = 100
        self.multiprocessing = 0     # number of processes to use for the simulation
                                     #   N = 0: single process (multiprocessing disactivated)
                                     #   N < 0: use as many processes as there are CPUs
        self.force_riskless = False  # invest the whole fund in the riskless asset

        # outputs
        self.percentiles = list(DEFAULT_PERCENTILES)
        self.n_bins = 30
        self.outdir = '.'
        self.overwrite = False
        self.verbose = True

    def print_info(self):
        print(self.__class__)
        for k, v in self.items():
            print('*', k, ':', v)

    def update(self, **kwargs):
        for k in kwargs:
            if k not in self.__dict__['_odict']:
                raise InvalidParameter(k, 'unknown parameter')
        self.__dict__['_odict'].update(kwargs)

    def __getattr__(self, key):
        try:
            return self.__dict__['_odict'][key]
        except KeyError:
            raise AttributeError(key)

    def __setattr__(self, key, value):
        self.__dict__['_odict'][key] = value

    def items(self):
        return self.__dict__['_odict'].items()

    def __getstate__(self):
        # make this class picklable
        return dict(self.__dict__['_odict'])

    def __setstate__(self, state):
        # make this class picklable
        self.__dict__['_odict'] = state

    def finalize(self):
        '''
        Convert and validate the parameters
        '''
        for k in FLOAT_FIELDS:
            setattr(self, k, to_float(k, getattr(self, k)))
        for k in OPTIONAL_FLOAT_FIELDS:
            if getattr(self, k) is not None:
                setattr(self, k, to_float(k, getattr(self, k)))
        for k in INT_FIELDS:
            setattr(self, k, to_int(k, getattr(self, k)))
        for k in BOOL_FIELDS:
            setattr(self, k, to_bool(k, getattr(self, k)))

        if self.g is not None:
            self.g_exponential = self.g_linear = self.g
        if self.k is not None:
            self.k_exponential = self.k_linear = self.k
        if self.annuity_rate is None:
            self.annuity_rate = self.r

        self.annuity_overrides = parse_overrides(self.annuity_overrides)
        if isinstance(self.percentiles, str):
            self.percentiles = [to_float('percentiles', x) for x in self.percentiles.split(',')]
        if any(not 0 <= p <= 100 for p in self.percentiles):
            raise InvalidParameter('percentiles', 'must be in [0, 100] (got {})'.format(self.percentiles))

        if self.salary_kind not in SALARY_KINDS + ('both', ):
            raise InvalidParameter('salary_kind', 'expected one of {} or "both" (got "{}")'.format(
                SALARY_KINDS, self.salary_kind))
        if self.riccati_mode not in RICCATI_MODES:
            raise InvalidParameter('riccati_mode', 'expected one of {} (got "{}")'.format(
                RICCATI_MODES, self.riccati_mode))
        if not self.retirement_age > self.entry_age:
            raise InvalidParameter('retirement_age', 'must be greater than the entry age {} (got {})'.format(
                self.entry_age, self.retirement_age))
        if not self.x0 >= 0:
            raise InvalidParameter('x0', 'initial fund must be >= 0 (got {})'.format(self.x0))
        if not self.n_bins >= 1:
            raise InvalidParameter('n_bins', 'must be >= 1 (got {})'.format(self.n_bins))

        # the model classes check their own fields
        self.market()
        self.preferences()
        self.rules()
        for kind in SALARY_KINDS:
            self.salary(kind)
        self.simulation_config(self.horizon)

    @property
    def horizon(self):
        ''' number of working years T '''
        return self.retirement_age - self.entry_age

    def salary_kinds(self):
        if self.salary_kind == 'both':
            return SALARY_KINDS
        return (self.salary_kind, )

    def market(self):
        return MarketModel(r=self.r, mu=self.mu, sigma=self.sigma, rho=self.rho)

    def preferences(self):
        return PreferenceParams(rho=self.rho)

    def salary(self, kind):
        return SalarySpec(kind=kind, s0=self.s0,
                          g=getattr(self, 'g_'+kind), k=getattr(self, 'k_'+kind))

    def rules(self):
        return PensionRules(accrual=self.accrual, c=self.c, w=self.w)

    def annuity_source(self):
        if self.mortality_file is not None:
            return AnnuitySource.from_table(load_mortality_table(self.mortality_file),
                                            self.annuity_rate)
        return AnnuitySource.from_overrides(self.annuity_overrides)

    def simulation_config(self, T):
        return SimulationConfig(T=T, x0=self.x0, dt=self.dt,
                                n_scenarios=self.n_scenarios,
                                master_seed=self.master_seed,
                                block_size=self.block_size,
                                multiprocessing=self.multiprocessing,
                                force_riskless=self.force_riskless)


def to_float(field, value):
    '''
    accepts numbers and strings, including fractions like "1/26"
    '''
    try:
        if isinstance(value, str):
            return float(Fraction(value.strip()))
        return float(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise InvalidParameter(field, 'expected a number (got "{}")'.format(value))


def to_int(field, value):
    '''
    accepts integers, integral strings (parsed exactly) and integral numbers
    '''
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    try:
        v = to_float(field, value)
    except InvalidParameter:
        raise InvalidParameter(field, 'expected an integer (got "{}")'.format(value))
    if not np.isfinite(v) or v != int(v):
        raise InvalidParameter(field, 'expected an integer (got "{}")'.format(value))
    return int(v)


def to_bool(field, value):
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in ('true', 'yes', '1'):
        return True
    if isinstance(value, str) and value.strip().lower() in ('false', 'no', '0'):
        return False
    if isinstance(value, int) and value in (0, 1):
        return bool(value)
    raise InvalidParameter(field, 'expected a boolean (got "{}")'.format(value))


def parse_overrides(value):
    '''
    Annuity overrides as a dict {age: value}, from a dict or a string
    "age:value,age:value"
    '''
    if isinstance(value, str):
        items = []
        for item in value.split(','):
            if not item.strip():
                continue
            if ':' not in item:
                raise InvalidParameter('annuity_overrides',
                                       'expected "age:value" (got "{}")'.format(item.strip()))
            items.append(item.split(':', 1))
    elif isinstance(value, dict):
        items = value.items()
    else:
        raise InvalidParameter('annuity_overrides', 'expected a mapping (got {})'.format(value))

    overrides = {}
    for age, v in items:
        age = to_int('annuity_overrides', age)
        v = to_float('annuity_overrides', v)
        if not v > 0:
            raise InvalidParameter('annuity_overrides',
                                   'annuity at age {} must be > 0 (got {})'.format(age, v))
        overrides[age] = v
    return overrides
