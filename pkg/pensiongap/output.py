#!/usr/bin/env python
# encoding: utf-8

import os
from os.path import exists, join
import tempfile

from pensiongap.common import OutputExists


# CSV dialect of all the artifacts
FLOAT_FORMAT = '%.12g'


class CSVOutput(object):
    '''
    Transactional writer of CSV artifacts, to use in a context manager

    Each table is first written to a temporary file in the output directory.
    The temporary files are moved to their destination upon successful
    exit of the context, and removed otherwise, so that no partial artifact
    is left behind.

    Example:

        with CSVOutput('/data/out/') as out:
            out.write('pensions.csv', df)
    '''
    def __init__(self, outdir='.', overwrite=False, verbose=False):
        self.outdir = outdir
        self.overwrite = overwrite
        self.verbose = verbose
        self.list_out = []   # list of (tmpfile, target output)

    def __enter__(self):
        os.makedirs(self.outdir, exist_ok=True)
        return self

    def __exit__(self, type, value, traceback):
        if type is None:
            self.finish()
        else:
            self.cleanup()

    def target(self, name):
        return join(self.outdir, name)

    def write(self, name, df):
        '''
        Write pandas DataFrame `df` to a temporary file, to be moved to
        `outdir`/`name`
        '''
        filename = self.target(name)
        if exists(filename) and not self.overwrite:
            raise OutputExists(filename)
        if filename in [f for _, f in self.list_out]:
            raise ValueError('Output "{}" is written twice'.format(filename))

        fd, tmpfile = tempfile.mkstemp(dir=self.outdir, prefix='.'+name+'.', suffix='.tmp')
        os.close(fd)
        os.chmod(tmpfile, 0o644)
        self.list_out.append((tmpfile, filename))

        df.to_csv(tmpfile, index=False, float_format=FLOAT_FORMAT,
                  lineterminator='\n', encoding='utf-8')

        return filename

    def finish(self):
        '''
        move all output files to their destination
        '''
        for tmpfile, filename in self.list_out:
            os.replace(tmpfile, filename)
            if self.verbose:
                print('Written', filename)
        self.list_out = []

    def cleanup(self):
        for tmpfile, _ in self.list_out:
            if exists(tmpfile):
                os.remove(tmpfile)
        self.list_out = []
