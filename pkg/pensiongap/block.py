#!/usr/bin/env python
# encoding: utf-8

from collections import OrderedDict
import numpy as np


class ScenarioBlock(object):
    '''
    A contiguous slice of scenarios of the Monte Carlo ensemble

    size: number of scenarios
    offset: index of the first scenario in the ensemble
    '''
    def __init__(self, size, offset=0):

        self.size = size
        self.offset = offset
        self.attributes = OrderedDict()

    def __str__(self):
        return 'block: size {}, offset {}'.format(self.size, self.offset)

    @property
    def scenarios(self):
        ''' indices of the scenarios in the ensemble '''
        return np.arange(self.offset, self.offset + self.size)

    @property
    def slice(self):
        return slice(self.offset, self.offset + self.size)
