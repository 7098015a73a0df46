#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np
import pytest
from scipy.integrate import quad

from pensiongap.exppoly import ExpPoly, phi1, phi2, int_monomial_exp, backward_linear


@pytest.mark.parametrize('u', [-2., -1e-3, -1e-10, 0., 1e-10, 5e-3, 0.5, 3.])
def test_phi(u):
    if u == 0:
        assert phi1(u) == 1.
        assert phi2(u) == 0.5
    else:
        assert phi1(u) == pytest.approx(np.expm1(u)/u, rel=1e-12)
        if abs(u) > 1e-3:
            assert phi2(u) == pytest.approx((np.expm1(u) - u)/u**2, rel=1e-9)
        else:
            assert phi2(u) == pytest.approx(0.5 + u/6 + u**2/24, rel=1e-9)


@pytest.mark.parametrize('m,q', [(0, 0.), (1, 0.), (2, 0.05), (1, -0.14), (0, 1e-6), (3, 2e-4)])
def test_int_monomial_exp(m, q):
    ref, _ = quad(lambda s: s**m*np.exp(q*s), 2., 35., epsabs=0, epsrel=1e-13)
    assert int_monomial_exp(m, q, 2., 35.) == pytest.approx(ref, rel=1e-11)


def test_arithmetic():
    p = ExpPoly([(1., 0, 0.06)])
    s = np.linspace(0, 35, 8)
    assert np.allclose((p + 1)(s), np.exp(0.06*s) + 1)
    assert np.allclose((2 - p)(s), 2 - np.exp(0.06*s))
    assert np.allclose((p*p)(s), np.exp(0.12*s))
    assert np.allclose((np.float64(3.) - p)(s), 3 - np.exp(0.06*s))
    assert np.allclose(p.exp_shift(-0.06)(s), 1.)
    assert (p - p).terms == ()
    assert str(ExpPoly()) == '0'


def test_derivative_antiderivative():
    p = ExpPoly([(0.1, 0, 0.06), (0.3, 1, 0.), (-2., 2, -0.14), (1., 1, 1e-5)])
    G = p.antiderivative(35.)
    s = np.linspace(0, 35, 15)
    assert G(0.) == pytest.approx(0., abs=1e-10)
    assert np.allclose(G.derivative()(s), p(s), rtol=1e-10)
    assert G(35.) == pytest.approx(p.integral(0., 35.), rel=1e-10)


@pytest.mark.parametrize('p', [0.140625, -0.09, 1e-9])
def test_backward_linear(p):
    """
    y' = p y - f with y(T) = y_T, against the explicit integral
    """
    T = 35.
    f = ExpPoly([(1., 0, 0.), (0.08, 1, 0.06)])
    y = backward_linear(p, f, 3., T)
    assert y(T) == pytest.approx(3., rel=1e-12)
    s = np.linspace(0, T, 8)
    assert np.allclose(y.derivative()(s), p*y(s) - f(s), rtol=1e-9, atol=1e-9)
