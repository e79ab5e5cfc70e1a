# -*- coding: utf-8 -*-
'''
spikingrl.spiking.lif
~~~~~~~~~~~~~~~~~~~~~

Discrete leaky integrate-and-fire dynamics.

One step charges the membrane, fires, and resets::

    V_t = beta * H_{t-1} + I_t
    O_t = g(V_t)
    H_t = V_t * (1 - O_t) + V_reset

``V_reset`` is added unconditionally, as written. With the default ``V_reset = 0`` this is
the usual reset-to-zero.
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import namedtuple
from operator import itemgetter

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.autodiff import Tensor, as_tensor, add, sub, mul, scale, spike_fire
from spikingrl.exceptions import DimensionError, DomainError

log = logging.getLogger(__name__)


class LifParams(namedtuple('LifParams', ('beta', 'v_threshold', 'v_reset', 'alpha', 'smooth'))):
    '''
    Parameters of a population of LIF neurons.

    ``smooth`` switches the firing function to the smooth surrogate in the forward pass
    (gradient-check mode); training leaves it off.
    '''
    __slots__ = ()

    def __new__(cls, beta=0.5, v_threshold=1.0, v_reset=0.0, alpha=2.0, smooth=False):
        if not 0 < beta <= 1:
            raise DomainError('The decay factor beta must lie in (0, 1], got {}'.format(beta))
        if alpha <= 0:
            raise DomainError('The surrogate width alpha must be positive, got {}'.format(alpha))
        if v_threshold <= v_reset:
            raise DomainError(
                'The threshold {} must lie above the reset voltage {}'.format(v_threshold, v_reset)
            )
        return super(LifParams, cls).__new__(cls, float(beta), float(v_threshold), float(v_reset),
                                             float(alpha), bool(smooth))

    def replace(self, **kwargs):
        return LifParams(**dict(self._asdict(), **kwargs))


class LifState(namedtuple('LifState', ('h', 'v'))):
    '''
    Membrane voltage after reset (``h``) and before reset (``v``) of a population
    '''
    __slots__ = ()

    h = property(itemgetter(0), doc='Membrane voltage after resetting, H_t')
    v = property(itemgetter(1), doc='Membrane voltage before resetting, V_t')


class SpikeTrain(object):
    '''
    Spikes of a population over the simulation window, shaped (T, batch, width).

    Trains produced in gradient-check mode carry the smooth surrogate instead of binary
    values, and the non-firing output mode carries input currents.
    '''

    def __init__(self, data):
        data = as_tensor(data)
        if data.ndim != 3:
            raise DimensionError('A spike train is shaped (T, batch, width), got {}'.format(data.shape))
        self.data = data

    @property
    def shape(self):
        return self.data.shape

    @property
    def T(self):  # pylint: disable=invalid-name
        return self.data.shape[0]

    @property
    def batch(self):
        return self.data.shape[1]

    @property
    def width(self):
        return self.data.shape[2]

    def numpy(self):
        return self.data.values

    def is_binary(self):
        values = self.data.values
        return bool(np.all((values == 0.0) | (values == 1.0)))

    def __repr__(self):
        return 'SpikeTrain(shape={})'.format(self.shape)


def initial_state(shape, params):
    '''
    Return a resting state: every voltage at V_reset
    '''
    rest = np.full(shape, params.v_reset, dtype=np.float64)
    return LifState(Tensor(rest), Tensor(rest))


def lif_step(current, state, params):
    '''
    Advance a population by one timestep, returning ``(spikes, new_state)``
    '''
    current = as_tensor(current)
    if current.shape != state.h.shape:
        raise DimensionError('Input current {} does not match the state {}'.format(current.shape, state.h.shape))
    v = add(scale(state.h, params.beta), current)
    spikes = spike_fire(v, params.v_threshold, params.alpha, smooth=params.smooth)
    h = sub(v, mul(v, spikes))
    if params.v_reset != 0.0:
        h = add(h, params.v_reset)
    return spikes, LifState(h, v)


def lif_integrate(current, state, params):
    '''
    Advance a non-firing population by one timestep: V_t = beta * V_{t-1} + I_t
    '''
    current = as_tensor(current)
    if current.shape != state.h.shape:
        raise DimensionError('Input current {} does not match the state {}'.format(current.shape, state.h.shape))
    v = add(scale(state.h, params.beta), current)
    return LifState(v, v)


def psp_kernel(dt, tau_m, tau_s, v0=1.0):
    '''
    Post synaptic potential K(dt) = V0 * (exp(-dt / tau_m) - exp(-dt / tau_s)).

    Reference for the continuous-time neuron; the discrete networks never call it.
    '''
    if tau_s <= 0 or tau_m <= tau_s:
        raise DomainError('Time constants need tau_m > tau_s > 0, got tau_m={}, tau_s={}'.format(tau_m, tau_s))
    dt = np.asarray(dt, dtype=np.float64)
    if np.any(dt < 0):
        raise DomainError('The elapsed time must be non-negative')
    kernel = v0 * (np.exp(-dt / tau_m) - np.exp(-dt / tau_s))
    if kernel.ndim == 0:
        return float(kernel)
    return kernel
