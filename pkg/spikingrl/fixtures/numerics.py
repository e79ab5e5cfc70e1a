# -*- coding: utf-8 -*-
'''
spikingrl.fixtures.numerics
~~~~~~~~~~~~~~~~~~~~~~~~~~~

Random number, neuron parameter and gradient checking fixtures
'''
# pylint: disable=redefined-outer-name

# Import python libs
from __future__ import absolute_import

# Import 3rd-party libs
import numpy as np
import pytest

# Import spikingrl libs
from spikingrl.spiking import LifParams


def numerical_gradient(func, values, eps=1e-6):
    '''
    Central difference gradient of the scalar ``func`` at ``values``
    '''
    values = np.array(values, dtype=np.float64)
    grad = np.zeros_like(values)
    flat = values.reshape(-1)
    flat_grad = grad.reshape(-1)
    for index in range(flat.size):
        saved = flat[index]
        flat[index] = saved + eps
        upper = float(func(values))
        flat[index] = saved - eps
        lower = float(func(values))
        flat[index] = saved
        flat_grad[index] = (upper - lower) / (2 * eps)
    return grad


def max_relative_error(actual, expected, floor=1e-8):
    '''
    Largest ``|actual - expected| / max(|actual|, |expected|, floor)``
    '''
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    scale = np.maximum(np.maximum(np.abs(actual), np.abs(expected)), floor)
    return float(np.max(np.abs(actual - expected) / scale)) if actual.size else 0.0


@pytest.fixture
def rng():
    '''
    Seeded random generator, a fresh one per test
    '''
    return np.random.default_rng(1234)


@pytest.fixture
def lif_params():
    '''
    The default neuron: decay 0.5, threshold 1, reset 0, surrogate width 2
    '''
    return LifParams()


@pytest.hookimpl(trylast=True)
def pytest_configure(config):  # pylint: disable=unused-argument
    pytest.helpers.numerics.register(numerical_gradient)
    pytest.helpers.numerics.register(max_relative_error)
