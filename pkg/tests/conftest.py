# -*- coding: utf-8 -*-

# Import python libs
import logging

# Import 3rd-party libs
import pytest

# Import spikingrl libs
import spikingrl.utils.log  # pylint: disable=unused-import
from spikingrl.autodiff import get_tape


pytest_plugins = 'spikingrl.fixtures.numerics', 'spikingrl.fixtures.ports', 'spikingrl.fixtures.runs'


@pytest.fixture(autouse=True)
def clean_tape():
    '''
    Every test starts with an empty, recording tape
    '''
    tape = get_tape()
    tape.clear()
    tape.enabled = True
    yield
    tape.clear()


def pytest_configure(config):
    config._inicache['log_format'] = '%(asctime)s,%(msecs)04.0f [%(name)-5s:%(lineno)-4d][%(processName)-8s][%(levelname)-8s] %(message)s'
    logging.getLogger('matplotlib').setLevel(logging.WARNING)
