#!/usr/bin/env python
# -*- coding: utf-8 -*-

'''
Exponential-polynomials: finite sums of terms coef * s**m * exp(q*s)

Salaries, contributions, targets and the value-function coefficients of the
accumulation problem all belong to this family, which is closed under
products and integration. Integrals are evaluated in closed form, switching
to the power series of exp when q*s is small so that the degenerate rates
(q -> 0) are handled without cancellation.

Provides:
    - phi1(u) = (exp(u) - 1)/u and phi2(u) = (exp(u) - 1 - u)/u**2
    - ExpPoly class
    - backward_linear: solution of y' = p*y - f(t), y(T) = y_T, for an
      ExpPoly forcing f
'''

from math import factorial
import numpy as np


# below this value of |q|*max(|lo|, |hi|), integrals use the series of exp
SERIES_THRESHOLD = 1e-2
SERIES_TERMS = 16

# below this value of |u|, phi1 returns its analytic limit
PHI1_LIMIT = 1e-9


def phi1(u):
    '''
    (exp(u) - 1)/u, with value 1 at u = 0
    '''
    u = np.asarray(u, dtype='float64')
    small = np.abs(u) < PHI1_LIMIT
    safe = np.where(small, 1., u)
    return np.where(small, 1. + u/2., np.expm1(safe)/safe)[()]


def phi2(u):
    '''
    (exp(u) - 1 - u)/u**2, with value 1/2 at u = 0
    '''
    u = np.asarray(u, dtype='float64')
    small = np.abs(u) < SERIES_THRESHOLD
    safe = np.where(small, 1., u)
    series = sum(u**n/factorial(n+2) for n in range(10))
    return np.where(small, series, (np.expm1(safe) - safe)/safe**2)[()]


def int_monomial_exp(m, q, lo, hi):
    '''
    Integral of s**m * exp(q*s) between lo and hi (broadcast arrays)
    '''
    lo = np.asarray(lo, dtype='float64')
    hi = np.asarray(hi, dtype='float64')
    scale = np.maximum(np.abs(lo), np.abs(hi))
    small = abs(q)*scale < SERIES_THRESHOLD

    # power series of exp(q*s)
    series = np.zeros(np.broadcast(lo, hi).shape)
    for n in range(SERIES_TERMS):
        p = m + n + 1
        series = series + q**n/factorial(n) * (hi**p - lo**p)/p

    if q == 0.:
        return series[()]

    # antiderivative exp(q*s) * sum_j (-1)^j m!/(m-j)! s^(m-j) / q^(j+1)
    def antiderivative(s):
        acc = np.zeros_like(s)
        for j in range(m+1):
            acc = acc + (-1)**j * factorial(m)/factorial(m-j) * s**(m-j) / q**(j+1)
        return np.exp(q*s)*acc

    with np.errstate(over='ignore', invalid='ignore'):
        exact = antiderivative(hi) - antiderivative(lo)

    return np.where(small, series, exact)[()]


class ExpPoly(object):
    '''
    A finite sum of terms coef * s**m * exp(q*s)

    Arguments:
        * terms: iterable of (coef, m, q) tuples, m a non-negative integer
          Terms sharing the same (m, q) are merged.

    Example
    -------
    Contribution of a linear salary k*s0*(1+g*s):
    >>> c = ExpPoly([(k*s0, 0, 0.), (k*s0*g, 1, 0.)])
    >>> c(10.)
    Its value compounded at rate r from 0 to T:
    >>> (c.exp_shift(-r)*np.exp(r*T)).integral(0, T)
    '''
    # numpy scalars defer to the reflected operators
    __array_ufunc__ = None

    def __init__(self, terms=()):
        merged = {}
        for coef, m, q in terms:
            key = (int(m), float(q))
            merged[key] = merged.get(key, 0.) + float(coef)
        self.terms = tuple((c, m, q) for (m, q), c in merged.items() if c != 0.)

    @classmethod
    def constant(cls, value):
        return cls([(value, 0, 0.)])

    def __call__(self, s):
        s = np.asarray(s, dtype='float64')
        res = np.zeros_like(s)
        for c, m, q in self.terms:
            res = res + c * s**m * np.exp(q*s)
        return res[()]

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.constant(other)
        return ExpPoly(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return self * (-1.)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return ExpPoly([(c1*c2, m1+m2, q1+q2)
                            for (c1, m1, q1) in self.terms
                            for (c2, m2, q2) in other.terms])
        return ExpPoly([(c*other, m, q) for (c, m, q) in self.terms])

    __rmul__ = __mul__

    def exp_shift(self, dq):
        '''
        Multiply by exp(dq*s)
        '''
        return ExpPoly([(c, m, q+dq) for (c, m, q) in self.terms])

    def derivative(self):
        terms = []
        for c, m, q in self.terms:
            if m > 0:
                terms.append((c*m, m-1, q))
            terms.append((c*q, m, q))
        return ExpPoly(terms)

    def antiderivative(self, scale):
        '''
        The ExpPoly G such that G(0) = 0 and G' = self

        scale: bound of |s| over which G will be evaluated. Terms with
        |q|*scale below SERIES_THRESHOLD are expanded as polynomials.
        '''
        terms = []
        for c, m, q in self.terms:
            if abs(q)*scale < SERIES_THRESHOLD:
                for n in range(SERIES_TERMS):
                    p = m + n + 1
                    terms.append((c*q**n/factorial(n)/p, p, 0.))
            else:
                for j in range(m+1):
                    terms.append(((-1)**j * c*factorial(m)/factorial(m-j)/q**(j+1), m-j, q))
                terms.append((-(-1)**m * c*factorial(m)/q**(m+1), 0, 0.))
        return ExpPoly(terms)

    def integral(self, lo, hi):
        '''
        Integral between lo and hi (lo and hi may be arrays)
        '''
        res = np.zeros(np.broadcast(np.asarray(lo), np.asarray(hi)).shape)
        for c, m, q in self.terms:
            res = res + c*int_monomial_exp(m, q, lo, hi)
        return res[()]

    def __str__(self):
        return ' + '.join('{:.6g}*s^{}*exp({:.6g}*s)'.format(c, m, q)
                          for (c, m, q) in self.terms) or '0'


def backward_linear(p, f, y_T, T):
    '''
    Solution of y'(t) = p*y(t) - f(t) on [0, T] with y(T) = y_T:

        y(t) = y_T exp(-p(T-t)) + exp(pt) * integral_t^T exp(-ps) f(s) ds

    f is an ExpPoly, and so is the returned solution.
    '''
    G = f.exp_shift(-p).antiderivative(T)
    return ExpPoly([(y_T*np.exp(-p*T), 0, p)]) + (float(G(T)) - G).exp_shift(p)
