#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Shared fixtures, and extra information in the reports generated by pytest-html

- Generate images with matplotlib and use conftest.savefig(request)
  instead of matplotlib's savefig:

    def test_with_image(request):
        plt.plot(...)
        conftest.savefig(request)

- Run pytest with the following options:
    --html=tests/test_report.html --self-contained-html

The ini option `img_size` sets the width of the embedded images
(ex: 100%, 250px (default)).
"""

import base64
import io
import pytest
import matplotlib
matplotlib.use('Agg')
from matplotlib import pyplot as plt

from pensiongap.params import RunConfig
from pensiongap.model import MarketModel, SalarySpec, PensionRules


# annuity value at 65 used throughout the base case
BASE_ANNUITY = 17.875


@pytest.fixture
def config(tmp_path):
    """
    Base case configuration, writing in a temporary directory
    """
    return RunConfig(outdir=str(tmp_path), verbose=False)


@pytest.fixture
def market():
    return MarketModel(r=0.015, mu=0.06, sigma=0.12, rho=0.03)


@pytest.fixture
def rules():
    return PensionRules(accrual=0.02, c=0.33, w=0.015)


@pytest.fixture(params=['exponential', 'linear'])
def spec(request):
    """
    Base case salary of each kind
    """
    if request.param == 'exponential':
        return SalarySpec('exponential', s0=1., g=0.06, k=0.10)
    else:
        return SalarySpec('linear', s0=1., g=0.08, k=0.04)


def add_image_to_report(request, fp):
    """
    Appends image data (BytesIO) to request.node.images
    """
    if not hasattr(request.node, 'images'):
        request.node.images = []
    fp.seek(0)
    request.node.images.insert(0, fp.read())


def savefig(request, **kwargs):
    """
    Wraps matplotlib's savefig to add image data to the report

    `kwargs` are passed to `plt.savefig`
    """
    fp = io.BytesIO()
    plt.savefig(fp, **kwargs)
    add_image_to_report(request, fp)
    plt.close('all')


def pytest_addoption(parser):
    parser.addini('img_size',
                  'Image size in the report. Ex: 100%, 250px (default)')


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item):
    pytest_html = item.config.pluginmanager.getplugin('html')
    outcome = yield
    report = outcome.get_result()
    extra = getattr(report, 'extra', [])
    img_size = item.config.getini('img_size') or '250px'
    if (report.when == 'call') and (pytest_html is not None):
        # add docstring
        doc = getattr(item, 'function', None).__doc__
        if doc is not None:
            extra.append(pytest_html.extras.html(f'<pre>{doc}</pre>'))

        img_content = ''
        for image in getattr(item, 'images', []):
            b64data = base64.b64encode(image).decode('ascii')
            img_content += f'<img src="data:image/png;base64,{b64data}" style="max-width:{img_size};">'
        if img_content:
            extra.append(pytest_html.extras.html(
                f'<details open><summary>Images</summary>{img_content}</details>'))

        report.extra = extra
