#!/usr/bin/env python
# -*- coding: utf-8 -*-

'''
Market, salary and public pension primitives

All rates are real, per-year decimals. Currency is normalized so that the
initial salary is 1 in the base case, which is not enforced.
'''

from dataclasses import dataclass
import numpy as np

from pensiongap.common import InvalidParameter, SALARY_KINDS
from pensiongap.exppoly import ExpPoly, phi1, phi2


# below this value, |g-w| and |w| switch to the analytic limits
EPS_RATE = 1e-9


@dataclass(frozen=True)
class MarketModel:
    '''
    Riskless asset dB = rB dt and risky asset dZ = mu Z dt + sigma Z dW

    rho (intertemporal discount rate) is supplied so that the Riccati
    constants a and a_tilde can be derived.
    '''
    r: float
    mu: float
    sigma: float
    rho: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidParameter('sigma', 'volatility must be > 0 (got {})'.format(self.sigma))
        if not self.rho > 0:
            raise InvalidParameter('rho', 'discount rate must be > 0 (got {})'.format(self.rho))

    @property
    def sharpe(self):
        ''' Sharpe ratio lambda = (mu-r)/sigma '''
        return (self.mu - self.r)/self.sigma

    @property
    def a(self):
        return self.rho + self.sharpe**2 - 2*self.r

    @property
    def a_tilde(self):
        return self.a + self.r


@dataclass(frozen=True)
class PreferenceParams:
    rho: float

    def __post_init__(self):
        if not self.rho > 0:
            raise InvalidParameter('rho', 'discount rate must be > 0 (got {})'.format(self.rho))


@dataclass(frozen=True)
class SalarySpec:
    '''
    Salary path S(t) and fund contribution c(t) = k S(t)

    kind: 'linear' (S0(1+gt)) or 'exponential' (S0 exp(gt))
    '''
    kind: str
    s0: float
    g: float
    k: float

    def __post_init__(self):
        if self.kind not in SALARY_KINDS:
            raise InvalidParameter('salary_kind', 'expected one of {} (got "{}")'.format(
                SALARY_KINDS, self.kind))
        if not self.s0 > 0:
            raise InvalidParameter('s0', 'initial salary must be > 0 (got {})'.format(self.s0))
        if not 0 < self.k < 1:
            raise InvalidParameter('k', 'contribution fraction must be in (0, 1) (got {})'.format(self.k))
        if not self.g >= 0:
            raise InvalidParameter('g', 'salary growth must be >= 0 (got {})'.format(self.g))

    def salary_poly(self):
        '''
        S(t) as an ExpPoly
        '''
        if self.kind == 'linear':
            return ExpPoly([(self.s0, 0, 0.), (self.s0*self.g, 1, 0.)])
        else:
            return ExpPoly([(self.s0, 0, self.g)])

    def contribution_poly(self):
        return self.k*self.salary_poly()

    def with_growth(self, g):
        return SalarySpec(self.kind, self.s0, g, self.k)


@dataclass(frozen=True)
class PensionRules:
    '''
    accrual: accrual rate of the salary-related (old) pension
    c: contribution percentage of the contribution-based (new) pension
    w: mean real GDP growth
    '''
    accrual: float = 0.02
    c: float = 0.33
    w: float = 0.015

    def __post_init__(self):
        if not self.accrual > 0:
            raise InvalidParameter('accrual', 'must be > 0 (got {})'.format(self.accrual))
        if not 0 < self.c < 1:
            raise InvalidParameter('c', 'must be in (0, 1) (got {})'.format(self.c))

    def with_gdp_growth(self, w):
        return PensionRules(self.accrual, self.c, w)


def salary_at(spec, t):
    if spec.kind == 'linear':
        return spec.s0*(1 + spec.g*np.asarray(t))
    else:
        return spec.s0*np.exp(spec.g*np.asarray(t))


def contribution_at(spec, t):
    return spec.k*salary_at(spec, t)


def old_pension(rules, T, final_salary):
    '''
    Salary-related pension: accrual * T * S(T)
    '''
    return rules.accrual*T*final_salary


def old_replacement_ratio(rules, T):
    '''
    Replacement ratio of the old pension, accrual * T (independent of the salary)
    '''
    return rules.accrual*T


def revalued_salary_mass(spec, w, T):
    '''
    Integral of S(t) exp(w(T-t)) over [0, T]
    '''
    if spec.kind == 'exponential':
        if abs(spec.g - w) < EPS_RATE:
            return spec.s0*T*np.exp(w*T)
        return spec.s0*np.exp(w*T)*np.expm1((spec.g - w)*T)/(spec.g - w)
    else:
        if abs(w) < EPS_RATE:
            return spec.s0*(T + spec.g*T**2/2.)
        # s0 e^{wT} [(1-e^{-wT})/w + g(1-(1+wT)e^{-wT})/w^2], written without cancellation
        return spec.s0*(T*phi1(w*T) + spec.g*T**2*phi2(w*T))


def new_pension(spec, rules, T, beta):
    '''
    Contribution-based pension, continuous form:
    beta * c * integral_0^T S(t) exp(w(T-t)) dt
    '''
    return beta*rules.c*revalued_salary_mass(spec, rules.w, T)


def new_pension_discrete(spec, rules, T, beta):
    '''
    Contribution-based pension, yearly sum:
    beta * c * sum_{t=0}^{T-1} S(t) (1+w)^(T-t)

    Kept for comparison with the continuous form; not used by the pipeline.
    '''
    if int(T) != T:
        raise ValueError('The yearly sum requires an integer number of years (got {})'.format(T))
    t = np.arange(int(T))
    return beta*rules.c*np.sum(salary_at(spec, t)*(1 + rules.w)**(T - t))


def replacement_ratios(P_o, P_n, final_salary):
    '''
    Returns (Pi_o, Pi_n), the net replacement ratios
    '''
    if not final_salary > 0:
        raise ValueError('final salary must be > 0 (got {})'.format(final_salary))
    return P_o/final_salary, P_n/final_salary
