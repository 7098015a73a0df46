#!/usr/bin/env python
# -*- coding: utf-8 -*-

'''
Mortality tables and lifetime annuity factors

An annuity source is either a one-year survival table discounted at a given
rate, or an explicit map age -> annuity value (used when the mortality data
is not available, the published annuity values being used directly).
'''

from dataclasses import dataclass
from io import BytesIO
import numpy as np
import pandas as pd

from pensiongap.common import (MalformedRow, NonContiguousAges,
                               ProbabilityOutOfRange, AgeOutOfTable,
                               InvalidParameter)


@dataclass(frozen=True, eq=False)
class MortalityTable:
    '''
    One-year survival probabilities p_x for the contiguous ages
    min_age..max_age (max_age is the limiting age omega)
    '''
    min_age: int
    p: np.ndarray

    @property
    def max_age(self):
        return self.min_age + len(self.p) - 1

    omega = max_age

    @property
    def ages(self):
        return np.arange(self.min_age, self.max_age + 1)

    def survival(self, age):
        return self.p[age - self.min_age]

    def __str__(self):
        return 'MortalityTable(ages {}-{})'.format(self.min_age, self.max_age)


@dataclass(frozen=True)
class AnnuitySource:
    '''
    Use the class methods `from_table` or `from_overrides`
    '''
    table: MortalityTable = None
    rate: float = None
    overrides: dict = None

    def __post_init__(self):
        if (self.table is None) == (self.overrides is None):
            raise ValueError('AnnuitySource requires either a mortality table or overrides')
        if self.overrides is not None:
            for age, value in self.overrides.items():
                if not value > 0:
                    raise InvalidParameter('annuity_overrides',
                                           'annuity at age {} must be > 0 (got {})'.format(age, value))

    @classmethod
    def from_table(cls, table, rate):
        return cls(table=table, rate=rate)

    @classmethod
    def from_overrides(cls, overrides):
        return cls(overrides={int(k): float(v) for k, v in overrides.items()})

    @property
    def mode(self):
        return 'override' if self.overrides is not None else 'table'

    def coverage(self):
        ''' human-readable description of the ages covered '''
        if self.mode == 'override':
            return 'overrides at ages {}'.format(sorted(self.overrides))
        return 'table ages {}-{}'.format(self.table.min_age, self.table.max_age)


def load_mortality_table(source):
    '''
    Read a mortality table in CSV format

    source: path, bytes or binary file-like object
    The header is either `age,p` (one-year survival probability) or `age,q`
    (one-year death probability, p = 1-q). Ages are ascending and contiguous.
    '''
    if isinstance(source, (bytes, bytearray)):
        source = BytesIO(source)

    try:
        df = pd.read_csv(source, dtype=str, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise MalformedRow(0, str(e))

    df.columns = [c.strip().lower() for c in df.columns]
    if 'age' not in df.columns:
        raise MalformedRow(0, 'missing "age" column in header {}'.format(list(df.columns)))
    if 'p' in df.columns:
        column = 'p'
    elif 'q' in df.columns:
        column = 'q'
    else:
        raise MalformedRow(0, 'header must contain a "p" or "q" column (got {})'.format(
            list(df.columns)))
    if len(df) == 0:
        raise MalformedRow(0, 'empty table')

    ages = pd.to_numeric(df['age'], errors='coerce')
    values = pd.to_numeric(df[column], errors='coerce')

    # rows are numbered from 1, after the header
    for i in range(len(df)):
        if np.isnan(ages[i]) or np.isnan(values[i]):
            raise MalformedRow(i+1, 'cannot parse "{}"'.format(
                ','.join(str(x) for x in df.iloc[i].values)))
        if ages[i] != int(ages[i]):
            raise MalformedRow(i+1, 'non-integer age {}'.format(ages[i]))

    ages = ages.values.astype('int64')
    if np.any(np.diff(ages) != 1):
        raise NonContiguousAges(ages)

    values = values.values.astype('float64')
    bad = (values < 0) | (values > 1)
    if bad.any():
        i = np.argmax(bad)
        raise ProbabilityOutOfRange(int(ages[i]), values[i])

    p = values if column == 'p' else 1. - values

    return MortalityTable(min_age=int(ages[0]), p=p)


def annuity_factor(src, age, rate=None):
    '''
    Annuity factor at integer `age`

    Table mode: sum_{n=1}^{omega-x} npx (1+rate)^(-n), with
    npx = p_x * p_{x+1} * ... * p_{x+n-1}.
    `rate` defaults to the rate of the source.

    Override mode: the stored value (rate is ignored).
    '''
    if src.mode == 'override':
        if age not in src.overrides:
            raise AgeOutOfTable(age, src.coverage())
        return src.overrides[age]

    table = src.table
    if rate is None:
        rate = src.rate
    if rate is None:
        raise ValueError('No discount rate provided for the table mode annuity factor')
    if not (table.min_age <= age <= table.max_age):
        raise AgeOutOfTable(age, src.coverage())

    nmax = table.max_age - age
    if nmax == 0:
        return 0.

    npx = np.cumprod(table.p[age - table.min_age:][:nmax])
    v = (1. + rate)**(-np.arange(1, nmax+1))

    return float(np.sum(npx*v))


def conversion_coefficient(src, age, rate=None):
    '''
    Returns (annuity, beta) at `age`, beta = 1/annuity being the coefficient
    converting the notional capital into the new pension
    '''
    annuity = annuity_factor(src, age, rate)
    if not annuity > 0:
        raise InvalidParameter('annuity', 'annuity factor at age {} must be > 0 to convert '
                               'a capital into a pension (got {})'.format(age, annuity))
    return annuity, 1./annuity
