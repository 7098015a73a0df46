#!/usr/bin/env python
# -*- coding: utf-8 -*-


# salary path families
SALARY_KINDS = ('exponential', 'linear')

# parameters for which a break-even point can be searched
BREAK_EVEN_PARAMETERS = {
        'beta'  : 'conversion coefficient',
        'w'     : 'mean real GDP growth',
        'g'     : 'mean real salary growth',
        }

# default brackets of the break-even search
BREAK_EVEN_BRACKETS = {
        'beta'  : (0.01, 0.3),
        'w'     : (0., 0.15),
        'g'     : (0., 0.1),
        }

DEFAULT_PERCENTILES = [5, 25, 50, 75, 95]

RICCATI_MODES = ('closed_form', 'numerical_ode')


class PensionGapError(Exception):
    '''
    Base class of all the errors raised by pensiongap
    '''
    pass


class InvalidParameter(PensionGapError):
    def __init__(self, field, message):
        self.field = field
        self.message = message
    def __str__(self):
        return 'Invalid parameter "{}": {}'.format(self.field, self.message)


class MalformedRow(PensionGapError):
    def __init__(self, row, message):
        self.row = row
        self.message = message
    def __str__(self):
        return 'Malformed mortality row {}: {}'.format(self.row, self.message)


class NonContiguousAges(PensionGapError):
    def __init__(self, ages):
        self.ages = list(ages)
    def __str__(self):
        return 'Mortality table ages are not contiguous and ascending: {}'.format(self.ages)


class ProbabilityOutOfRange(PensionGapError):
    def __init__(self, age, value):
        self.age = age
        self.value = value
    def __str__(self):
        return 'Probability {} at age {} is outside [0, 1]'.format(self.value, self.age)


class AgeOutOfTable(PensionGapError):
    def __init__(self, age, available):
        self.age = age
        self.available = available
    def __str__(self):
        return 'Age {} is not covered by the annuity source ({})'.format(
            self.age, self.available)


class NonPositiveGap(PensionGapError):
    def __init__(self, final_target):
        self.final_target = final_target
    def __str__(self):
        return ('Final target {:.6g} is not positive: the new pension already '
                'covers the old one (gap already closed)'.format(self.final_target))


class NoConvergence(PensionGapError):
    def __init__(self, what, detail=''):
        self.what = what
        self.detail = detail
    def __str__(self):
        return 'No convergence in {} {}'.format(self.what, self.detail).strip()


class ClosedFormMismatch(PensionGapError):
    def __init__(self, coefficient, max_error, readings):
        self.coefficient = coefficient
        self.max_error = max_error
        self.readings = readings
    def __str__(self):
        return ('Closed form of {} disagrees with the backward ODE integration '
                '(max relative error {:.3g}, readings tried: {})'.format(
                    self.coefficient, self.max_error, ', '.join(self.readings)))


class ZeroWealth(PensionGapError):
    def __init__(self, t):
        self.t = t
    def __str__(self):
        return 'Optimal fraction undefined for zero wealth at t={}'.format(self.t)


class ConfigMismatch(PensionGapError):
    def __init__(self, message):
        self.message = message
    def __str__(self):
        return self.message


class NoSignChange(PensionGapError):
    '''
    The gap P_o - P_n has the same sign at both ends of the bracket

    `values` and `gaps` hold the gap curve sampled on the bracket
    '''
    def __init__(self, parameter, bracket, values=None, gaps=None, kind=None):
        self.parameter = parameter
        self.kind = kind
        self.bracket = bracket
        self.values = values
        self.gaps = gaps
    def __str__(self):
        s = 'No sign change of P_o - P_n for "{}"'.format(self.parameter)
        if self.kind is not None:
            s += ' ({} salary)'.format(self.kind)
        s += ' in [{}, {}]'.format(*self.bracket)
        if self.gaps is not None:
            s += ' (gap ranges from {:.6g} to {:.6g})'.format(min(self.gaps), max(self.gaps))
        return s


class EmptySamples(PensionGapError):
    def __str__(self):
        return 'Cannot build a histogram from an empty sample'


class OutputExists(PensionGapError):
    def __init__(self, filename):
        self.filename = filename
    def __str__(self):
        return 'File "{}" exists'.format(self.filename)
