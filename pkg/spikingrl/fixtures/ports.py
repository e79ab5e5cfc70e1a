# -*- coding: utf-8 -*-
'''
spikingrl.fixtures.ports
~~~~~~~~~~~~~~~~~~~~~~~~

Port fixtures
'''

# Import python libs
from __future__ import absolute_import

# Import 3rd-party libs
import pytest

# Import spikingrl libs
from spikingrl.utils import get_unused_localhost_port


@pytest.fixture
def log_server_port():
    '''
    Returns an unused localhost port for a log server
    '''
    return get_unused_localhost_port()


@pytest.hookimpl(trylast=True)
def pytest_configure(config):  # pylint: disable=unused-argument
    pytest.helpers.utils.register(get_unused_localhost_port)
