#!/usr/bin/env python
# -*- coding: utf-8 -*-


'''
A basic command line interface for pensiongap
'''

from pensiongap import cli
import sys

if __name__ == "__main__":

    sys.exit(cli.main(sys.argv[1:]))
