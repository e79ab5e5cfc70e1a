# -*- coding: utf-8 -*-
'''
spikingrl.fixtures.runs
~~~~~~~~~~~~~~~~~~~~~~~

Run configuration fixtures and the ``experiment`` marker.

Tests marked ``experiment`` train agents at full budget and only run with
``--run-experiments``.
'''
# pylint: disable=redefined-outer-name

# Import python libs
from __future__ import absolute_import
import copy
import logging

# Import 3rd-party libs
import pytest

# Import spikingrl libs
from spikingrl.harness.config import load_config

log = logging.getLogger(__name__)

SMALL_RUN_OPTIONS = {
    'algorithm': 'dqn',
    'env': 'chain',
    'T': 2,
    'hidden_sizes': [8],
    'batch_size': 8,
    'buffer_size': 200,
    'warmup_steps': 10,
    'epsilon_decay_steps': 50,
    'target_update_period': 10,
    'total_steps': 60,
    'eval_every': 30,
    'eval_episodes': 2,
    'seeds': [0],
    'workers': 1,
    'lr': 1e-3,
}


def pytest_addoption(parser):
    '''
    Add the spikingrl plugin options
    '''
    group = parser.getgroup('Spiking RL Options')
    group.addoption(
        '--run-experiments',
        default=False,
        action='store_true',
        help='Run the tests marked as experiment, which train agents at full budget'
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption('--run-experiments'):
        return
    skip = pytest.mark.skip(reason='Pass --run-experiments to run')
    for item in items:
        if 'experiment' in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def small_run_options():
    '''
    Options of a run small enough for a unit test: DQN on the chain for 60 steps
    '''
    return copy.deepcopy(SMALL_RUN_OPTIONS)


@pytest.fixture
def small_run_config(small_run_options):
    return load_config(overrides=small_run_options)


@pytest.fixture
def run_dir(tmp_path):
    '''
    An empty run directory
    '''
    path = tmp_path / 'run'
    path.mkdir()
    return str(path)


@pytest.hookimpl(trylast=True)
def pytest_configure(config):
    config.addinivalue_line('markers', 'experiment: trains agents at full budget, needs --run-experiments')
