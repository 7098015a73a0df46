#!/usr/bin/env python
# -*- coding: utf-8 -*-

'''
Value function coefficients and optimal investment strategy

The value function of the quadratic-loss accumulation problem is
    V(t, x) = exp(-rho t) (alpha(t) x^2 + beta(t) x + gamma(t))
where (alpha, beta, gamma) solve, backwards from
alpha(T) = 1, beta(T) = -2F(T), gamma(T) = F(T)^2:

    alpha' = a alpha - 1
    beta'  = a_tilde beta + 2F - 2c alpha
    gamma' = rho gamma - F^2 - c beta + lambda^2 beta^2 / (4 alpha)

The optimal fraction of the fund invested in the risky asset is
    y*(t, x) = -(lambda/sigma) (1 + beta(t) / (2 alpha(t) x))

The backward fourth-order Runge-Kutta integration of the system is always
performed and serves as reference: the closed forms of beta are accepted only
if they agree with it.
'''

from dataclasses import dataclass
import warnings
import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicHermiteSpline

from pensiongap.common import (ClosedFormMismatch, ZeroWealth, ConfigMismatch,
                               InvalidParameter, RICCATI_MODES)
from pensiongap.exppoly import ExpPoly, backward_linear, phi1
from pensiongap.model import contribution_at
from pensiongap.targets import interim_target


ORACLE_STEPS = 10000
VALIDATION_NODES = 1001
CLOSED_FORM_RTOL = 1e-6

# below these thresholds, switch to the limit of alpha and to the
# variation-of-constants form of beta
ALPHA_LIMIT = 1e-12
DEGENERATE_DENOMINATOR = 1e-6

# candidate readings of the lag in the second term of the linear closed form
BETA_READINGS = {
        'linear': ('T-t', 't-t'),
        'exponential': ('printed', ),
        }


def integrate_riccati(market, rho, target, contribution, T, F_T, n=ORACLE_STEPS):
    '''
    Backward integration of the (alpha, beta, gamma) system with a
    fixed-step fourth-order Runge-Kutta scheme, from T to 0 in n steps

    target, contribution: vectorized functions of t
    Returns (t, Y, dY), Y and dY of shape (n+1, 3)
    '''
    a, a_tilde, lam2 = market.a, market.a_tilde, market.sharpe**2
    h = T/n

    # nodes and mid-points
    tt = np.linspace(0., T, 2*n+1)
    F = np.broadcast_to(np.asarray(target(tt), dtype='float64'), tt.shape)
    c = np.broadcast_to(np.asarray(contribution(tt), dtype='float64'), tt.shape)
    Fl, cl = F.tolist(), c.tolist()

    def rhs(j, al, be, ga):
        return (a*al - 1.,
                a_tilde*be + 2*Fl[j] - 2*cl[j]*al,
                rho*ga - Fl[j]**2 - cl[j]*be + lam2*be**2/(4*al))

    Y = np.zeros((n+1, 3), dtype='float64')
    y = (1., -2.*F_T, F_T**2)
    Y[n] = y
    for i in range(n-1, -1, -1):
        k1 = rhs(2*i+2, *y)
        k2 = rhs(2*i+1, *[yy - 0.5*h*kk for yy, kk in zip(y, k1)])
        k3 = rhs(2*i+1, *[yy - 0.5*h*kk for yy, kk in zip(y, k2)])
        k4 = rhs(2*i, *[yy - h*kk for yy, kk in zip(y, k3)])
        y = tuple(yy - h/6.*(q1 + 2*q2 + 2*q3 + q4)
                  for yy, q1, q2, q3, q4 in zip(y, k1, k2, k3, k4))
        Y[i] = y

    al, be, ga = Y[:, 0], Y[:, 1], Y[:, 2]
    Fn, cn = F[::2], c[::2]
    dY = np.stack([a*al - 1.,
                   a_tilde*be + 2*Fn - 2*cn*al,
                   rho*ga - Fn**2 - cn*be + lam2*be**2/(4*al)], axis=1)

    return tt[::2], Y, dY


def alpha_closed_form(a, T, t):
    '''
    alpha(t) = (1-1/a) exp(-a(T-t)) + 1/a
             = exp(-a tau) + tau phi1(-a tau), tau = T-t
    '''
    tau = T - np.asarray(t, dtype='float64')
    if abs(a) < ALPHA_LIMIT:
        return (1. + tau)[()]
    return (np.exp(-a*tau) + tau*phi1(-a*tau))[()]


def closed_form_constants(market, sched):
    '''
    Constants of the closed forms of beta (NaN when undefined)
    '''
    spec = sched.spec
    a, r, rs, g = market.a, market.r, sched.r_star, spec.g
    k1 = 2*spec.k*spec.s0

    def div(x, y):
        return x/y if y != 0 else np.nan

    k2 = div(k1, rs)
    cst = {
        'a_tilde': market.a_tilde,
        'k1': k1,
        'k2': k2,
        'k3': 2*sched.x0 + k2 + div(2*spec.k*g*spec.s0, rs**2),
        'k4': k1 - div(k1, a),
        'k5': div(k1, a) + k2*(1 + div(g, rs)),
        'k2_tilde': div(k1, g - rs),
        }
    cst['k3_tilde'] = 2*sched.x0 - cst['k2_tilde']
    cst['k4_tilde'] = div(k1, a) - cst['k2_tilde']
    return cst


def degenerate_denominators(market, sched):
    '''
    Names of the denominators of the closed form of beta that are too close to 0
    '''
    a, at, r, rs, g = market.a, market.a_tilde, market.r, sched.r_star, sched.spec.g
    if sched.spec.kind == 'linear':
        dens = {'r': r, 'a': a, 'a_tilde': at, 'r*': rs, 'r*-a_tilde': rs - at}
    else:
        dens = {'a': a, 'g-r': g - r, 'g-a_tilde': g - at,
                'r*-a_tilde': rs - at, 'g-r*': g - rs}
    return [name for name, x in dens.items() if abs(x) < DEGENERATE_DENOMINATOR]


def beta_linear_closed_form(market, sched, t, reading='T-t'):
    cst = closed_form_constants(market, sched)
    k1, k2, k3, k4, k5 = [cst[x] for x in ('k1', 'k2', 'k3', 'k4', 'k5')]
    a, at, r, rs = market.a, market.a_tilde, market.r, sched.r_star
    g, T, F_T = sched.spec.g, sched.T, sched.final_target

    t = np.asarray(t, dtype='float64')
    lag = (T - t) if reading == 'T-t' else np.zeros_like(t)
    decay = np.exp(-at*(T - t))

    beta = (-2*F_T*decay
            + k4/r*(1 + g/r)*np.exp((r - at)*lag)
            + (k5 + k1*g/(a*at) + k2*g/at)/at
            + k4*g/r*t*np.exp((r - at)*(T - t))
            + g/at*(k1/a + k2)*t
            + k3/(rs - at)*(np.exp(rs*t) - np.exp(at*t + (rs - at)*T))
            - (k4/r + k5/at + k4*g/r**2 + k1*g/(a*at**2) + k2*g/at**2
               + (k4*g/r + k1*g/(a*at) + k2*g/at)*T)*decay)
    return beta[()]


def beta_exponential_closed_form(market, sched, t, reading='printed'):
    cst = closed_form_constants(market, sched)
    k4, k3t, k4t = cst['k4'], cst['k3_tilde'], cst['k4_tilde']
    a, at, r, rs = market.a, market.a_tilde, market.r, sched.r_star
    g, T, F_T = sched.spec.g, sched.T, sched.final_target

    t = np.asarray(t, dtype='float64')
    beta = (-2*F_T*np.exp(-at*(T - t))
            - k4/(g - r)*np.exp((g + a)*t - a*T)
            - k4t/(g - at)*np.exp(g*t)
            + (k4/(g - r) + k4t/(g - at))*np.exp(at*t + (g - at)*T)
            - k3t/(rs - at)*(np.exp(at*t + (rs - at)*T) - np.exp(rs*t)))
    return beta[()]


def variation_of_constants(market, sched):
    '''
    alpha and beta as ExpPoly, by variation of constants

    Valid for any value of the rates, including those where the
    closed forms have a vanishing denominator.
    '''
    T = sched.T
    c = sched.spec.contribution_poly()
    F = sched.poly()
    alpha = backward_linear(market.a, ExpPoly.constant(1.), 1., T)
    beta = backward_linear(market.a_tilde, 2*c*alpha - 2*F, -2*sched.final_target, T)
    return alpha, beta


class RiccatiSolution(object):
    '''
    Coefficients alpha, beta, gamma of the value function over [0, T]

    Arguments:
        * market: MarketModel
        * rho: intertemporal discount rate (must be the rate of the market model)
        * sched: TargetSchedule
        * mode: 'closed_form' or 'numerical_ode'
        * oracle_steps: number of steps of the backward Runge-Kutta integration

    Attributes:
        * beta_reading: the form of beta in use ('T-t' or 't-t' for the
          linear salary, 'printed' for the exponential salary,
          'variation_of_constants' when a closed-form denominator vanishes,
          'numerical_ode' in numerical mode)
        * oracle_error: maximum deviation of the closed forms from the
          Runge-Kutta reference, relative to the maximum of |reference|
        * constants: constants of the closed forms
    '''
    def __init__(self, market, rho, sched, mode='closed_form', oracle_steps=ORACLE_STEPS,
                 verbose=False):
        if mode not in RICCATI_MODES:
            raise InvalidParameter('riccati_mode', 'expected one of {} (got "{}")'.format(
                RICCATI_MODES, mode))
        if rho != market.rho:
            raise ConfigMismatch('Discount rate {} differs from the one of the market model ({})'.format(
                rho, market.rho))

        self.market = market
        self.rho = rho
        self.sched = sched
        self.spec = sched.spec
        self.T = sched.T
        self.mode = mode
        self.constants = closed_form_constants(market, sched)

        t, Y, dY = integrate_riccati(
                market, rho,
                lambda t: interim_target(sched, t),
                lambda t: contribution_at(sched.spec, t),
                sched.T, sched.final_target, n=oracle_steps)
        self.oracle = CubicHermiteSpline(t, Y, dY, axis=0)

        nodes = np.linspace(0., self.T, VALIDATION_NODES)
        ref = self.oracle(nodes)
        self.oracle_error = {'alpha': max_deviation(alpha_closed_form(market.a, self.T, nodes),
                                                    ref[:, 0])}

        if mode == 'numerical_ode':
            self.beta_reading = 'numerical_ode'
            self.oracle_error['beta'] = 0.
        else:
            self.select_closed_form(nodes, ref[:, 1])

        if verbose:
            print('Riccati coefficients: beta form "{}" (deviation from the ODE '
                  'integration {:.2g})'.format(self.beta_reading, self.oracle_error['beta']))

    def select_closed_form(self, nodes, ref):
        '''
        Select the first form of beta that agrees with the reference
        '''
        degenerate = degenerate_denominators(self.market, self.sched)
        if degenerate:
            warnings.warn('Vanishing denominators {} in the closed form of beta, '
                          'using the variation of constants'.format(degenerate))
            self.beta_poly = variation_of_constants(self.market, self.sched)[1]
            readings = ['variation_of_constants']
        else:
            readings = BETA_READINGS[self.spec.kind]

        errors = []
        for reading in readings:
            self.beta_reading = reading
            err = max_deviation(self.beta(nodes), ref)
            errors.append(err)
            if err <= CLOSED_FORM_RTOL:
                self.oracle_error['beta'] = err
                return

        raise ClosedFormMismatch('beta', min(errors), readings)

    def alpha(self, t):
        return alpha_closed_form(self.market.a, self.T, t)

    def beta(self, t):
        t = np.asarray(t, dtype='float64')
        if self.beta_reading == 'numerical_ode':
            return self.oracle(t)[..., 1][()]
        elif self.beta_reading == 'variation_of_constants':
            return self.beta_poly(t)
        elif self.spec.kind == 'linear':
            return beta_linear_closed_form(self.market, self.sched, t, self.beta_reading)
        else:
            return beta_exponential_closed_form(self.market, self.sched, t, self.beta_reading)

    def gamma(self, t):
        return gamma_at(self, t)

    def gamma_oracle(self, t):
        return self.oracle(np.asarray(t, dtype='float64'))[..., 2][()]

    def __str__(self):
        return 'RiccatiSolution(T={}, mode={}, beta form {})'.format(
            self.T, self.mode, self.beta_reading)


def max_deviation(x, ref):
    scale = np.amax(np.abs(ref))
    if scale == 0:
        return float(np.amax(np.abs(x)))
    return float(np.amax(np.abs(x - ref))/scale)


def solve_riccati(market, sched, rho=None, mode='closed_form', verbose=False):
    '''
    Build the RiccatiSolution for a market model and a target schedule
    '''
    if rho is None:
        rho = market.rho
    return RiccatiSolution(market, rho, sched, mode=mode, verbose=verbose)


def alpha_at(sol, t):
    return sol.alpha(t)


def beta_at(sol, t):
    return sol.beta(t)


def gamma_at(sol, t):
    '''
    gamma(t) = F(T)^2 exp(-rho(T-t))
               + integral_t^T exp(-rho(s-t)) [F^2 + c beta - lambda^2 beta^2/(4 alpha)] ds

    evaluated by adaptive quadrature
    '''
    F_T, T, rho = sol.sched.final_target, sol.T, sol.rho
    lam2 = sol.market.sharpe**2

    def integrand(s, t0):
        al, be = sol.alpha(s), sol.beta(s)
        F = interim_target(sol.sched, s)
        c = contribution_at(sol.spec, s)
        return np.exp(-rho*(s - t0))*(F**2 + c*be - lam2*be**2/(4*al))

    t = np.asarray(t, dtype='float64')
    res = np.zeros_like(t)
    for idx, t0 in np.ndenumerate(t):
        integral, _ = quad(integrand, t0, T, args=(t0,), epsabs=0., epsrel=1e-11, limit=200)
        res[idx] = F_T**2*np.exp(-rho*(T - t0)) + integral

    return res[()]


def value_function(sol, t, x):
    '''
    exp(-rho t) (alpha x^2 + beta x + gamma)
    '''
    return np.exp(-sol.rho*t)*(sol.alpha(t)*x**2 + sol.beta(t)*x + gamma_at(sol, t))


@dataclass(frozen=True)
class StrategyPoint:
    t: float
    x: float
    y_unconstrained: float
    y_clamped: float


def optimal_fraction(sol, t, x):
    '''
    Unconstrained optimal fraction y*(t, x) = -(lambda/sigma) (1 + beta/(2 alpha x))
    '''
    x = np.asarray(x, dtype='float64')
    if np.any(x == 0):
        raise ZeroWealth(t)
    m = sol.market
    return (-(m.sharpe/m.sigma)*(1 + sol.beta(t)/(2*sol.alpha(t)*x)))[()]


def clamp_fraction(y):
    '''
    Truncate the fraction to [0, 1]

    A ZeroWealth error (or its class) maps to 1.
    '''
    if isinstance(y, ZeroWealth) or y is ZeroWealth:
        return 1.
    return np.clip(y, 0., 1.)[()]


def feedback_fraction(market, alpha, beta, x):
    '''
    Clamped fraction for precomputed alpha(t), beta(t); 1 where x <= 0
    '''
    x = np.asarray(x, dtype='float64')
    positive = x > 0
    with np.errstate(divide='ignore', invalid='ignore'):
        y = -(market.sharpe/market.sigma)*(1 + beta/(2*alpha*x))
    return np.where(positive, np.clip(y, 0., 1.), 1.)[()]


def strategy_fraction(sol, t, x):
    return feedback_fraction(sol.market, sol.alpha(t), sol.beta(t), x)


def strategy_point(sol, t, x):
    try:
        y = optimal_fraction(sol, t, x)
    except ZeroWealth as e:
        return StrategyPoint(t, x, np.nan, clamp_fraction(e))
    if x < 0:
        return StrategyPoint(t, x, float(y), 1.)
    return StrategyPoint(t, x, float(y), float(clamp_fraction(y)))
