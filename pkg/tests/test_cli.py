#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import os
import pickle
import numpy as np
import pandas as pd
import pytest

from pensiongap.common import InvalidParameter, OutputExists
from pensiongap.params import RunConfig
from pensiongap.output import CSVOutput
from pensiongap.main import run_pensions, run_targets, run_simulation
from pensiongap import cli
from tests.test_actuarial import gompertz_csv, zero_survival_csv


def test_config_defaults():
    config = RunConfig()
    assert config.horizon == 35
    assert config.salary_kinds() == ('exponential', 'linear')
    assert config.annuity_rate == config.r == 0.015
    assert config.annuity_overrides[65] == 17.875
    assert config.percentiles == [5, 25, 50, 75, 95]
    assert config.simulation_config(35).steps == 910


def test_config_coercion():
    config = RunConfig(dt='1/52', n_scenarios='200', force_riskless='yes',
                       percentiles='10,90', annuity_overrides='65:18,70:15',
                       g='0.05', salary_kind='linear')
    assert config.dt == pytest.approx(1/52.)
    assert config.n_scenarios == 200
    assert config.force_riskless is True
    assert config.percentiles == [10., 90.]
    assert config.annuity_overrides == {65: 18., 70: 15.}
    assert config.g_exponential == config.g_linear == 0.05
    assert config.salary_kinds() == ('linear', )


@pytest.mark.parametrize('kwargs,field', [
    ({'sigma': 0.}, 'sigma'),
    ({'k_linear': 1.5}, 'k'),
    ({'retirement_age': 30}, 'retirement_age'),
    ({'n_scenarios': 0}, 'n_scenarios'),
    ({'n_scenarios': 2.5}, 'n_scenarios'),
    ({'x0': 'abc'}, 'x0'),
    ({'salary_kind': 'flat'}, 'salary_kind'),
    ({'riccati_mode': 'exact'}, 'riccati_mode'),
    ({'annuity_overrides': '65=17'}, 'annuity_overrides'),
    ({'percentiles': '5,150'}, 'percentiles'),
    ({'verbose': 'maybe'}, 'verbose'),
    ({'volatility': 0.1}, 'volatility'),
    ({'master_seed': -1}, 'master_seed'),
    ({'master_seed': 2**64}, 'master_seed'),
    ({'master_seed': '1.5'}, 'master_seed'),
])
def test_config_invalid(kwargs, field):
    with pytest.raises(InvalidParameter) as e:
        RunConfig(**kwargs)
    assert e.value.field == field


def test_config_integers():
    """
    Integers are parsed exactly, beyond the float mantissa
    """
    assert RunConfig(master_seed=2**63+1).master_seed == 2**63+1
    assert RunConfig(master_seed='9007199254740993').master_seed == 9007199254740993
    assert RunConfig(master_seed=np.uint64(2**63+1)).master_seed == 2**63+1
    assert RunConfig(n_scenarios='1e3').n_scenarios == 1000
    assert RunConfig(n_scenarios=200.).n_scenarios == 200


def test_config_from_file(tmp_path):
    filename = tmp_path/'run.toml'
    filename.write_text('retirement_age = 70\n'
                        'salary_kind = "linear"\n'
                        'annuity_overrides = {70 = 14.81}\n')
    config = RunConfig.from_file(str(filename), verbose=False)
    assert config.horizon == 40
    assert config.annuity_overrides == {70: 14.81}
    assert config.verbose is False

    filename.write_text('retirement_age = \n')
    with pytest.raises(InvalidParameter):
        RunConfig.from_file(str(filename))


def test_config_pickle():
    config = RunConfig(salary_kind='linear', verbose=False)
    other = pickle.loads(pickle.dumps(config))
    assert other.salary_kind == 'linear'
    assert dict(other.items()) == dict(config.items())


def test_csv_output(tmp_path):
    df = pd.DataFrame({'t': [0., 1.], 'x': [1/3., 2.]})
    with CSVOutput(str(tmp_path)) as out:
        out.write('a.csv', df)
        assert not (tmp_path/'a.csv').exists()
    assert (tmp_path/'a.csv').read_text() == 't,x\n0,0.333333333333\n1,2\n'

    with pytest.raises(OutputExists):
        with CSVOutput(str(tmp_path)) as out:
            out.write('a.csv', df)

    # no partial output on error
    with pytest.raises(RuntimeError):
        with CSVOutput(str(tmp_path)) as out:
            out.write('b.csv', df)
            raise RuntimeError()
    assert sorted(os.listdir(tmp_path)) == ['a.csv']


def test_run_pensions(config):
    """
    Base case pensions, replacement ratios, r* and final salary
    """
    df = run_pensions(config).set_index('salary_kind')
    expected = {
        'exponential': (5.716, 2.657, 0.7, 0.325, 0.078, 8.166),
        'linear': (2.66, 1.936, 0.7, 0.509, 0.049, 3.8),
    }
    for kind, (P_o, P_n, Pi_o, Pi_n, r_star, S_T) in expected.items():
        row = df.loc[kind]
        assert row.P_o == pytest.approx(P_o, rel=5e-3)
        assert row.P_n == pytest.approx(P_n, rel=5e-3)
        assert row.Pi_o == pytest.approx(Pi_o, rel=5e-3)
        assert row.Pi_n == pytest.approx(Pi_n, rel=5e-3)
        assert row.r_star == pytest.approx(r_star, abs=2e-3)
        assert row.S_T == pytest.approx(S_T, rel=5e-3)
    assert os.path.exists(os.path.join(config.outdir, 'pensions.csv'))


def test_run_targets(config):
    df = run_targets(config)
    assert len(df) == 2*36
    for kind, form in [('exponential', 'printed'), ('linear', 'T-t')]:
        sub = df[df.salary_kind == kind]
        assert (sub.beta_form == form).all()
        assert sub.F.iloc[0] == pytest.approx(1.)
        assert sub.alpha.iloc[-1] == 1.
        assert sub.beta.iloc[-1] == pytest.approx(-2*sub.F.iloc[-1], rel=1e-6)
        assert sub.gamma.iloc[-1] == pytest.approx(sub.F.iloc[-1]**2)


def test_run_simulation_riskless(tmp_path):
    """
    Linear salary, retirement at 70, riskless investment
    """
    config = RunConfig(retirement_age=70, salary_kind='linear', force_riskless=True,
                       n_scenarios=3, outdir=str(tmp_path), verbose=False)
    results, (strategy, fund, hist) = run_simulation(config)
    P_tot = results['linear']['P_tot']
    assert np.all(P_tot == P_tot[0])
    assert P_tot[0] == pytest.approx(3.464, rel=5e-3)
    assert P_tot[0] > results['linear']['calibration'].P_o
    assert (strategy['mean'] == 0).all()
    assert hist['count'].sum() == 3
    assert len(fund) == 40*26 + 1


def run_cli(*args):
    return cli.main(list(args) + ['--quiet'])


def test_cli_pensions(tmp_path, capsys):
    outdir = str(tmp_path)
    assert run_cli('pensions', '--outdir', outdir) == 0
    assert os.path.exists(os.path.join(outdir, 'pensions.csv'))

    # existing output
    assert run_cli('pensions', '--outdir', outdir) == 1
    assert capsys.readouterr().err.startswith('Error: ')
    assert run_cli('pensions', '--outdir', outdir, '--overwrite') == 0


@pytest.mark.parametrize('args', [
    ['--set', 'sigma=0'],
    ['--set', 'unknown=1'],
    ['--set', 'sigma'],
    ['--set', 'retirement_age=66'],
    ['--mortality', '/nonexistent/mortality.csv'],
    ['--annuity', '65'],
])
def test_cli_errors(tmp_path, capsys, args):
    assert run_cli('pensions', '--outdir', str(tmp_path), *args) == 1
    assert 'Error: ' in capsys.readouterr().err
    assert os.listdir(tmp_path) == []


def test_cli_annuity_and_mortality(tmp_path):
    assert run_cli('pensions', '--outdir', str(tmp_path/'a'),
                   '--set', 'retirement_age=66', '--annuity', '66:17.2') == 0
    df = pd.read_csv(tmp_path/'a'/'pensions.csv')
    assert (df.annuity == 17.2).all()

    filename = tmp_path/'mortality.csv'
    filename.write_bytes(gompertz_csv())
    assert run_cli('pensions', '--outdir', str(tmp_path/'b'),
                   '--mortality', str(filename), '--salary-kind', 'exponential') == 0
    df = pd.read_csv(tmp_path/'b'/'pensions.csv')
    assert list(df.salary_kind) == ['exponential']
    assert 5 < df.annuity[0] < 30


def test_cli_break_even(tmp_path, capsys):
    assert run_cli('break-even', 'w', '--outdir', str(tmp_path)) == 0
    df = pd.read_csv(tmp_path/'break_even_w.csv')
    assert list(df.columns) == ['salary_kind', 'parameter', 'value', 'P_o', 'P_n',
                                'gap', 'break_even']
    roots = df.groupby('salary_kind').break_even.first()
    assert roots['exponential'] == pytest.approx(0.065, rel=0.1)
    assert roots['linear'] == pytest.approx(0.035, rel=0.1)

    # no sign change in the bracket: the sampled curve is written anyway
    assert run_cli('break-even', 'beta', '--outdir', str(tmp_path),
                   '--bracket', '0.2', '0.3') == 1
    err = capsys.readouterr().err
    assert err.startswith('Error: No sign change')
    assert 'break_even_beta.csv' in err
    df = pd.read_csv(tmp_path/'break_even_beta.csv')
    assert len(df) == 2*101
    assert df.break_even.isna().all()
    assert df.value.min() == 0.2 and df.value.max() == 0.3
    assert (df.gap < 0).all()


def test_cli_sweep_age(tmp_path):
    assert run_cli('sweep-age', '--ages', '60,65,70', '--outdir', str(tmp_path)) == 0
    df = pd.read_csv(tmp_path/'age_sweep.csv')
    assert list(df.age) == [60, 65, 70]
    assert list(df['T']) == [30, 35, 40]
    assert df.P_o_linear.iloc[-1] == pytest.approx(3.36)
    assert df.P_n_linear.iloc[-1] == pytest.approx(2.98, rel=0.01)
    assert 'P_tot_median_linear' not in df.columns


def test_cli_simulate_deterministic(tmp_path):
    """
    Identical runs give identical files, serial or parallel
    """
    args = ['simulate', '--scenarios', '30', '--seed', '5', '--salary-kind', 'exponential']
    assert run_cli(*args, '--outdir', str(tmp_path/'a')) == 0
    assert run_cli(*args, '--outdir', str(tmp_path/'b'), '--multiprocessing', '2') == 0
    files = ['strategy_stats.csv', 'fund_stats.csv', 'pension_hist.csv']
    for name in files:
        assert (tmp_path/'a'/name).read_bytes() == (tmp_path/'b'/name).read_bytes()
    assert sorted(os.listdir(tmp_path/'a')) == sorted(files)


def test_run_pensions_old_ratio(tmp_path):
    """
    The old replacement ratio does not depend on the salary growth
    """
    ratios = set()
    for i, g in enumerate([0.04, 0.05, 0.06, 0.07, 0.08]):
        config = RunConfig(g=g, salary_kind='exponential', outdir=str(tmp_path/str(i)),
                           verbose=False)
        ratios.update(run_pensions(config).Pi_o)
    assert ratios == {0.02*35}


@pytest.mark.parametrize('args', [
    ['pensions'],
    ['break-even', 'w'],
    ['sweep-age', '--ages', '65'],
])
def test_cli_zero_annuity(tmp_path, capsys, args):
    filename = tmp_path/'mortality.csv'
    filename.write_bytes(zero_survival_csv(65))
    outdir = tmp_path/'out'
    assert run_cli(*args, '--mortality', str(filename), '--outdir', str(outdir)) == 1
    assert 'annuity' in capsys.readouterr().err
    assert not outdir.exists() or os.listdir(outdir) == []
