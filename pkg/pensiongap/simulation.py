#!/usr/bin/env python
# encoding: utf-8

'''
Monte Carlo evolution of the pension fund under the clamped feedback strategy

The fund dynamics
    dX = {[(mu-r) y + r] X + c(t)} dt + sigma y X dW
are discretized with the Euler-Maruyama scheme. Scenarios are processed by
blocks, serially or in a pool of processes; each scenario draws its normal
variates from its own generator seeded by (master_seed, scenario index), so
that the ensemble does not depend on the block size nor on the number of
processes.
'''

from dataclasses import dataclass
from datetime import datetime
from multiprocessing import Pool
import warnings
import numpy as np
import xarray as xr

from pensiongap.block import ScenarioBlock
from pensiongap.common import ConfigMismatch, InvalidParameter, DEFAULT_PERCENTILES
from pensiongap.control import feedback_fraction
from pensiongap.model import contribution_at


@dataclass(frozen=True)
class SimulationConfig:
    '''
    T: horizon (years)
    x0: initial fund
    dt: time step (years); T/dt is rounded to the nearest integer number of steps
    n_scenarios: number of scenarios
    master_seed: seed of the whole ensemble
    block_size: number of scenarios per processing block
    multiprocessing: 0 for serial processing, N > 0 processes, N < 0 all CPUs
    force_riskless: if True, the whole fund is invested in the riskless asset
    '''
    T: float
    x0: float
    dt: float = 1/26.
    n_scenarios: int = 1000
    master_seed: int = 20190101
    block_size: int = 100
    multiprocessing: int = 0
    force_riskless: bool = False

    def __post_init__(self):
        if not self.T > 0:
            raise InvalidParameter('T', 'horizon must be > 0 (got {})'.format(self.T))
        if not self.dt > 0:
            raise InvalidParameter('dt', 'time step must be > 0 (got {})'.format(self.dt))
        if self.steps < 1:
            raise InvalidParameter('dt', 'time step {} exceeds the horizon {}'.format(self.dt, self.T))
        if not self.n_scenarios >= 1:
            raise InvalidParameter('n_scenarios', 'must be >= 1 (got {})'.format(self.n_scenarios))
        if not self.block_size >= 1:
            raise InvalidParameter('block_size', 'must be >= 1 (got {})'.format(self.block_size))
        if not self.x0 >= 0:
            raise InvalidParameter('x0', 'initial fund must be >= 0 (got {})'.format(self.x0))
        if not 0 <= self.master_seed < 2**64:
            raise InvalidParameter('master_seed', 'must be an unsigned 64-bit integer (got {})'.format(
                self.master_seed))

    @property
    def steps(self):
        return int(round(self.T/self.dt))

    @property
    def grid(self):
        ''' time grid, aligned on T '''
        return np.linspace(0., self.T, self.steps+1)

    def rng(self, scenario):
        '''
        Generator of the scenario, independent of the other scenarios
        '''
        return np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(self.master_seed, spawn_key=(int(scenario),))))


class PathEnsemble(object):
    '''
    Fund values X (scenario x time) and applied fractions y (scenario x step)

    Stored as an xarray Dataset `ds`; the step coordinate is the start time
    of each step.
    '''
    def __init__(self, cfg, X, y):
        if X.shape != (cfg.n_scenarios, cfg.steps+1) or y.shape != (cfg.n_scenarios, cfg.steps):
            raise ValueError('Inconsistent ensemble shapes {} and {}'.format(X.shape, y.shape))
        self.config = cfg
        grid = cfg.grid
        self.ds = xr.Dataset(
            {'X': (('scenario', 'time'), X),
             'y': (('scenario', 'step'), y)},
            coords={'scenario': np.arange(cfg.n_scenarios),
                    'time': grid,
                    'step': grid[:-1]},
            attrs={'master_seed': cfg.master_seed,
                   'dt': cfg.T/cfg.steps,
                   'T': cfg.T,
                   'x0': cfg.x0,
                   'force_riskless': int(cfg.force_riskless)})

    @property
    def master_seed(self):
        return self.config.master_seed

    @property
    def time(self):
        return self.ds.time.values

    @property
    def X(self):
        return self.ds.X.values

    @property
    def y(self):
        return self.ds.y.values

    @property
    def final_values(self):
        return self.ds.X.isel(time=-1).values

    def __len__(self):
        return self.config.n_scenarios

    def __str__(self):
        return 'PathEnsemble({} scenarios, {} steps, seed {})'.format(
            self.config.n_scenarios, self.config.steps, self.master_seed)


class EnsembleStats(object):
    '''
    Per-step percentiles, mean and standard deviation of X and y

    ds variables: X_percentile (percentile, time), X_mean, X_std (time),
                  y_percentile (percentile, step), y_mean, y_std (step)
    '''
    def __init__(self, ds):
        self.ds = ds

    @property
    def percentiles(self):
        return list(self.ds.percentile.values)

    def to_dataframe(self, var):
        '''
        Table with one row per time step: t, p<percentile>..., mean, std
        '''
        dim = 'time' if var == 'X' else 'step'
        df = self.ds['{}_percentile'.format(var)].to_pandas().T
        df.columns = ['p{:g}'.format(p) for p in df.columns]
        df['mean'] = self.ds['{}_mean'.format(var)].values
        df['std'] = self.ds['{}_std'.format(var)].values
        df.index.name = 't'
        df = df.reset_index()
        assert len(df) == self.ds.sizes[dim]
        return df


def block_iterator(cfg):
    for offset in range(0, cfg.n_scenarios, cfg.block_size):
        yield ScenarioBlock(min(cfg.block_size, cfg.n_scenarios - offset), offset)


def process_block(args):
    '''
    Simulate the scenarios of one block
    '''
    (block, cfg, sol, spec, market) = args

    grid = cfg.grid
    dt = cfg.T/cfg.steps
    sqrt_dt = np.sqrt(dt)
    t = grid[:-1]

    # deterministic inputs on the grid
    alpha = sol.alpha(t)
    beta = sol.beta(t)
    contrib = contribution_at(spec, t)

    Z = np.stack([cfg.rng(i).standard_normal(cfg.steps) for i in block.scenarios])

    X = np.zeros((block.size, cfg.steps+1), dtype='float64')
    y = np.zeros((block.size, cfg.steps), dtype='float64')
    X[:, 0] = cfg.x0
    for n in range(cfg.steps):
        x = X[:, n]
        if not cfg.force_riskless:
            y[:, n] = feedback_fraction(market, alpha[n], beta[n], x)
        yn = y[:, n]
        X[:, n+1] = (x + (((market.mu - market.r)*yn + market.r)*x + contrib[n])*dt
                     + market.sigma*yn*x*sqrt_dt*Z[:, n])

    block.X = X
    block.y = y
    block.attributes['nonpositive'] = int(np.sum(np.any(X <= 0, axis=1)))

    return block


def simulate_paths(cfg, sol, spec, market, verbose=False):
    '''
    Run the Monte Carlo simulation and return a PathEnsemble

    Arguments:
        * cfg: SimulationConfig
        * sol: RiccatiSolution built over the same horizon and salary
        * spec: SalarySpec
        * market: MarketModel
    '''
    if abs(sol.T - cfg.T) > 1e-9:
        raise ConfigMismatch('Simulation horizon {} differs from the horizon of the '
                             'strategy ({})'.format(cfg.T, sol.T))
    if sol.spec != spec:
        raise ConfigMismatch('Salary {} differs from the salary of the strategy ({})'.format(
            spec, sol.spec))
    if sol.market != market:
        raise ConfigMismatch('Market {} differs from the market of the strategy ({})'.format(
            market, sol.market))

    t0 = datetime.now()
    X = np.zeros((cfg.n_scenarios, cfg.steps+1), dtype='float64')
    y = np.zeros((cfg.n_scenarios, cfg.steps), dtype='float64')

    args = ((block, cfg, sol, spec, market) for block in block_iterator(cfg))
    if cfg.multiprocessing != 0:
        if cfg.multiprocessing < 0:
            nproc = None  # use as many processes as there are CPUs
        else:
            nproc = cfg.multiprocessing
        pool = Pool(nproc)
        block_iter = pool.imap_unordered(process_block, args)
    else:
        pool = None
        block_iter = map(process_block, args)

    nonpositive = 0
    try:
        for block in block_iter:
            if verbose:
                print('Processed', block)
            X[block.slice] = block.X
            y[block.slice] = block.y
            nonpositive += block.attributes['nonpositive']
    finally:
        if pool is not None:
            pool.terminate()

    if nonpositive:
        warnings.warn('{} scenarios reached a non-positive fund value'.format(nonpositive))

    if verbose:
        print('Simulated {} scenarios in {}'.format(cfg.n_scenarios, datetime.now()-t0))

    return PathEnsemble(cfg, X, y)


def ensemble_stats(ens, percentiles=DEFAULT_PERCENTILES):
    '''
    Per-step percentiles (linear interpolation), mean and standard deviation
    (normalized by the number of scenarios) of X and y
    '''
    q = np.array(percentiles, dtype='float64')/100.
    stats = xr.Dataset()
    for var in ['X', 'y']:
        da = ens.ds[var]
        pc = da.quantile(q, dim='scenario', method='linear')
        pc = pc.assign_coords(quantile=np.array(percentiles, dtype='float64')).rename(
            {'quantile': 'percentile'})
        stats['{}_percentile'.format(var)] = pc
        stats['{}_mean'.format(var)] = da.mean(dim='scenario')
        stats['{}_std'.format(var)] = da.std(dim='scenario', ddof=0)
    stats.attrs['master_seed'] = ens.master_seed

    return EnsembleStats(stats)


def final_pension_distribution(ens, P_n, annuity):
    '''
    Samples of the total pension P_n + X(T)/annuity
    '''
    if not annuity > 0:
        raise InvalidParameter('annuity', 'must be > 0 (got {})'.format(annuity))
    return P_n + ens.final_values/annuity
