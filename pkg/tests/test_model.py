#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np
import pytest
from scipy.integrate import quad

from pensiongap.common import InvalidParameter
from pensiongap.model import (MarketModel, SalarySpec, PensionRules, salary_at,
                              contribution_at, old_pension, new_pension,
                              new_pension_discrete, revalued_salary_mass,
                              replacement_ratios)
from tests.conftest import BASE_ANNUITY


def test_market_constants(market):
    assert market.sharpe == pytest.approx(0.375)
    assert market.a == pytest.approx(0.140625)
    assert market.a_tilde == pytest.approx(0.155625)


@pytest.mark.parametrize('kwargs,field', [
    ({'sigma': 0.}, 'sigma'),
    ({'rho': -0.01}, 'rho'),
])
def test_market_invalid(kwargs, field):
    params = dict(r=0.015, mu=0.06, sigma=0.12, rho=0.03)
    params.update(kwargs)
    with pytest.raises(InvalidParameter) as e:
        MarketModel(**params)
    assert e.value.field == field


@pytest.mark.parametrize('kwargs,field', [
    ({'k': 1.}, 'k'),
    ({'k': 0.}, 'k'),
    ({'s0': 0.}, 's0'),
    ({'g': -0.01}, 'g'),
    ({'kind': 'quadratic'}, 'salary_kind'),
])
def test_salary_invalid(kwargs, field):
    params = dict(kind='linear', s0=1., g=0.08, k=0.04)
    params.update(kwargs)
    with pytest.raises(InvalidParameter) as e:
        SalarySpec(**params)
    assert e.value.field == field


def test_rules_invalid():
    with pytest.raises(InvalidParameter):
        PensionRules(c=1.)
    with pytest.raises(InvalidParameter):
        PensionRules(accrual=0.)


@pytest.mark.parametrize('kind,S_T', [
    ('exponential', 8.166),
    ('linear', 3.8),
])
def test_final_salary(kind, S_T):
    spec = SalarySpec(kind, 1., {'exponential': 0.06, 'linear': 0.08}[kind], 0.05)
    assert salary_at(spec, 35) == pytest.approx(S_T, rel=5e-3)
    assert salary_at(spec, 0) == 1.
    assert contribution_at(spec, 35) == pytest.approx(0.05*salary_at(spec, 35))


def test_salary_poly(spec):
    t = np.linspace(0, 35, 11)
    assert np.allclose(spec.salary_poly()(t), salary_at(spec, t), rtol=1e-14)
    assert np.allclose(spec.contribution_poly()(t), contribution_at(spec, t), rtol=1e-14)


@pytest.mark.parametrize('kind,P_o,P_n', [
    ('exponential', 5.716, 2.657),
    ('linear', 2.66, 1.936),
])
def test_base_case_pensions(kind, P_o, P_n, rules):
    """
    Old and new pensions of the base case, retirement at 65
    """
    spec = SalarySpec(kind, 1., {'exponential': 0.06, 'linear': 0.08}[kind], 0.1)
    T = 35
    S_T = salary_at(spec, T)
    assert old_pension(rules, T, S_T) == pytest.approx(P_o, rel=5e-3)
    assert new_pension(spec, rules, T, 1/BASE_ANNUITY) == pytest.approx(P_n, rel=5e-3)

    Pi_o, Pi_n = replacement_ratios(old_pension(rules, T, S_T),
                                    new_pension(spec, rules, T, 1/BASE_ANNUITY), S_T)
    assert Pi_o == pytest.approx(0.7)
    assert Pi_n == pytest.approx({'exponential': 0.325, 'linear': 0.509}[kind], rel=5e-3)


@pytest.mark.parametrize('w', [0.015, 0.06, 0.06 + 1e-11, 0., 1e-12, -0.01])
def test_revalued_salary_mass(spec, w):
    """
    Closed forms against adaptive quadrature, including the limits g = w and w = 0
    """
    T = 35.
    ref, _ = quad(lambda t: salary_at(spec, t)*np.exp(w*(T - t)), 0, T,
                  epsabs=0, epsrel=1e-13)
    assert revalued_salary_mass(spec, w, T) == pytest.approx(ref, rel=1e-9)


def test_new_pension_discrete(spec, rules):
    """
    The yearly sum is close to the continuous form
    """
    P_c = new_pension(spec, rules, 35, 1/BASE_ANNUITY)
    P_d = new_pension_discrete(spec, rules, 35, 1/BASE_ANNUITY)
    assert P_d == pytest.approx(P_c, rel=0.05)

    with pytest.raises(ValueError):
        new_pension_discrete(spec, rules, 35.5, 1/BASE_ANNUITY)


def test_replacement_ratios_invalid():
    with pytest.raises(ValueError):
        replacement_ratios(1., 1., 0.)
