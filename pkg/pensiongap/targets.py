#!/usr/bin/env python
# -*- coding: utf-8 -*-

'''
Final and interim targets of the pension fund

The final target F(T) is the capital whose annuity closes the gap between the
old and the new pension. Interim targets F(t) compound the initial fund and
the contributions at the rate r*, calibrated so that F(t) -> F(T) as t -> T.
'''

from dataclasses import dataclass
import warnings
import numpy as np
from scipy import optimize

from pensiongap.common import NonPositiveGap, NoConvergence, InvalidParameter
from pensiongap.exppoly import ExpPoly, phi1, phi2
from pensiongap.model import SalarySpec


EPS_RATE = 1e-9

NEWTON_TOL = 1e-12
NEWTON_MAXITER = 100

# initial bracket of the bisection fallback, grown geometrically
BISECTION_BRACKET = (-0.5, 1.0)
BISECTION_MAXGROW = 60


@dataclass(frozen=True)
class TargetSchedule:
    x0: float
    r_star: float
    T: float
    final_target: float
    spec: SalarySpec

    def __post_init__(self):
        if not self.final_target > 0:
            raise NonPositiveGap(self.final_target)

    def poly(self):
        '''
        F(t) as an ExpPoly
        '''
        return accumulation_poly(self.x0, self.spec, self.r_star, self.T)

    def __call__(self, t):
        return interim_target(self, t)


def final_target(P_o, P_n, annuity):
    '''
    (P_o - P_n) * annuity

    The result may be <= 0, in which case the calibration of r* fails.
    '''
    return (P_o - P_n)*annuity


def final_target_from_ratios(Pi_o, Pi_n, final_salary, annuity):
    '''
    Final target expressed with the replacement ratios:
    (Pi_o - Pi_n) * S(T) * annuity
    '''
    return (Pi_o - Pi_n)*final_salary*annuity


def accumulated_value(x0, spec, rate, t):
    '''
    Initial fund and contributions compounded at `rate` up to t:

        x0 exp(rate t) + integral_0^t k S(s) exp(rate (t-s)) ds
    '''
    t = np.asarray(t, dtype='float64')
    ks0 = spec.k*spec.s0
    if spec.kind == 'linear':
        # kS0 [t phi1(rate t) + g t^2 phi2(rate t)]
        contrib = ks0*(t*phi1(rate*t) + spec.g*t**2*phi2(rate*t))
    else:
        if abs(spec.g - rate) < EPS_RATE:
            return ((x0 + ks0*t)*np.exp(rate*t))[()]
        # kS0/(g-rate) [exp(gt) - exp(rate t)]
        contrib = ks0*np.exp(rate*t)*t*phi1((spec.g - rate)*t)

    return (x0*np.exp(rate*t) + contrib)[()]


def accumulation_poly(x0, spec, rate, T):
    '''
    The accumulated value as a function of t in [0, T], as an ExpPoly
    '''
    H = spec.contribution_poly().exp_shift(-rate).antiderivative(T)
    return ExpPoly([(x0, 0, rate)]) + H.exp_shift(rate)


def accumulated_value_derivative(x0, spec, rate, T):
    '''
    Derivative of the accumulated value at T with respect to the rate:

        x0 T exp(rate T) + integral_0^T k S(s) (T-s) exp(rate (T-s)) ds
    '''
    c = spec.contribution_poly()
    integrand = (c*ExpPoly([(T, 0, 0.), (-1., 1, 0.)])).exp_shift(-rate)
    return x0*T*np.exp(rate*T) + np.exp(rate*T)*integrand.integral(0., T)


def solve_r_star(x0, spec, T, F_T, guess=0.):
    '''
    Calibrate r* such that the accumulated value at T equals F_T

    Newton-Raphson with analytic derivative, falling back to bisection on a
    geometrically grown bracket. The accumulated value is increasing in the
    rate, so the root is unique.
    '''
    if not F_T > 0:
        raise NonPositiveGap(F_T)
    if not x0 >= 0:
        raise InvalidParameter('x0', 'initial fund must be >= 0 (got {})'.format(x0))

    tol_residual = 1e-10*max(1., F_T)

    def residual(rate):
        return accumulated_value(x0, spec, rate, T) - F_T

    def derivative(rate):
        return accumulated_value_derivative(x0, spec, rate, T)

    try:
        with np.errstate(over='raise'):
            r_star = optimize.newton(residual, guess, fprime=derivative,
                                     tol=NEWTON_TOL, maxiter=NEWTON_MAXITER)
        if abs(residual(r_star)) < tol_residual:
            return float(r_star)
        warnings.warn('Newton residual {:.3g} above tolerance, '
                      'switching to bisection'.format(residual(r_star)))
    except (RuntimeError, FloatingPointError, OverflowError) as e:
        warnings.warn('Newton iteration failed for r* ({}), switching to bisection'.format(e))

    return bisect_r_star(residual, tol_residual)


def bisect_r_star(residual, tol_residual):
    lo, hi = BISECTION_BRACKET
    with np.errstate(over='ignore'):
        for _ in range(BISECTION_MAXGROW):
            if residual(lo) <= 0:
                break
            lo *= 2
        else:
            raise NoConvergence('r* bracketing', '(lower bound {})'.format(lo))
        for _ in range(BISECTION_MAXGROW):
            if residual(hi) >= 0:
                break
            hi *= 2
        else:
            raise NoConvergence('r* bracketing', '(upper bound {})'.format(hi))

    r_star, res = optimize.bisect(residual, lo, hi, xtol=1e-15, maxiter=500,
                                  full_output=True, disp=False)
    if not res.converged or abs(residual(r_star)) >= tol_residual:
        raise NoConvergence('r* bisection', '(residual {:.3g})'.format(residual(r_star)))

    return float(r_star)


def interim_target(sched, t):
    '''
    F(t), 0 <= t <= T

    At t = T, returns the final target.
    '''
    t = np.asarray(t, dtype='float64')
    F = accumulated_value(sched.x0, sched.spec, sched.r_star, t)
    return np.where(t >= sched.T, sched.final_target, F)[()]


def build_schedule(x0, spec, T, F_T, guess=0.):
    '''
    Calibrate r* and return the TargetSchedule
    '''
    r_star = solve_r_star(x0, spec, T, F_T, guess=guess)
    return TargetSchedule(x0=x0, r_star=r_star, T=T, final_target=F_T, spec=spec)
