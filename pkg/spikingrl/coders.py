# -*- coding: utf-8 -*-
'''
spikingrl.coders
~~~~~~~~~~~~~~~~

Temporal encoders and decoders.

The encoder expands a real state over the simulation window with one learnable weight per
timestep and drives a layer of LIF neurons with it. The decoders compress a spike train
back into real values with one learnable weight per timestep (optionally one per timestep
and output neuron).

Three frozen constructions reproduce the classical coders exactly:

* repeat encoding: ``w_e = (1, ..., 1)``
* rate decoding: ``w_d = (1/T, ..., 1/T)``
* accumulated voltage decoding: ``w_d = (beta^(T-1), ..., beta, 1)``
'''

# Import python libs
from __future__ import absolute_import
import logging

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.autodiff import (
    Module, Tensor, as_tensor, mul, reshape, reduce_sum, scale, stack, tanh
)
from spikingrl.exceptions import ContractError, DimensionError, DomainError, InputError
from spikingrl.spiking.lif import LifParams, SpikeTrain, initial_state, lif_step

log = logging.getLogger(__name__)

DECODER_MODES = ('value', 'action')


def _check_window(T):  # pylint: disable=invalid-name
    if int(T) != T or T < 1:
        raise ContractError('The simulation window must be a positive integer, got {!r}'.format(T))
    return int(T)


class EncoderWeights(Module):
    '''
    Temporal expansion weights ``w_e`` (one per timestep) and the encoding neurons' parameters
    '''

    def __init__(self, w_e, lif=None, trainable=True):
        values = np.asarray(w_e, dtype=np.float64)
        if values.ndim != 1 or values.size < 1:
            raise DimensionError('Encoder weights are a vector of length T, got shape {}'.format(values.shape))
        self.w_e = Tensor(values, requires_grad=trainable, name='w_e')
        self.lif = lif if lif is not None else LifParams()

    @property
    def T(self):  # pylint: disable=invalid-name
        return self.w_e.shape[0]

    @property
    def trainable(self):
        return self.w_e.requires_grad


class DecoderWeights(Module):
    '''
    Temporal compression weights ``w_d``.

    Shaped (T,) the weights are shared across output neurons; shaped (T, width) every output
    neuron gets its own.
    '''

    def __init__(self, w_d, mode='value', trainable=True):
        if mode not in DECODER_MODES:
            raise ContractError('Unknown decoder mode {!r}'.format(mode))
        values = np.asarray(w_d, dtype=np.float64)
        if values.ndim not in (1, 2) or values.shape[0] < 1:
            raise DimensionError('Decoder weights are shaped (T,) or (T, width), got {}'.format(values.shape))
        self.w_d = Tensor(values, requires_grad=trainable, name='w_d')
        self.mode = mode

    @property
    def T(self):  # pylint: disable=invalid-name
        return self.w_d.shape[0]

    @property
    def per_neuron(self):
        return self.w_d.ndim == 2

    @property
    def trainable(self):
        return self.w_d.requires_grad


def _check_state(state):
    state = as_tensor(state)
    if state.ndim != 2:
        raise DimensionError('States are shaped (batch, D), got {}'.format(state.shape))
    if not np.all(np.isfinite(state.values)):
        raise InputError('The state contains NaN or Inf values')
    return state


def expand(state, enc):
    '''
    Temporal expansion ``S^tau[t] = w_e[t] * S`` shaped (T, batch, D), before any neuron
    '''
    state = _check_state(state)
    batch, width = state.shape
    return mul(reshape(enc.w_e, (enc.T, 1, 1)), reshape(state, (1, batch, width)))


def encode(state, enc):
    '''
    Encode a batch of states shaped (batch, D) into a spike train shaped (T, batch, D)
    '''
    expanded = expand(state, enc)
    lif_state = initial_state(expanded.shape[1:], enc.lif)
    spikes = []
    for t in range(enc.T):
        out, lif_state = lif_step(expanded[t], lif_state, enc.lif)
        spikes.append(out)
    return SpikeTrain(stack(spikes, axis=0))


def decode_value(spikes, dec):
    '''
    Compress a train shaped (T, batch, width) into values shaped (batch, width):
    ``Q[b, j] = sum_t w_d[t] * Q^tau[t, b, j]``
    '''
    data = spikes.data if isinstance(spikes, SpikeTrain) else as_tensor(spikes)
    if data.ndim != 3:
        raise DimensionError('Expected a train shaped (T, batch, width), got {}'.format(data.shape))
    if data.shape[0] != dec.T:
        raise DimensionError('The train spans {} timesteps, the decoder {}'.format(data.shape[0], dec.T))
    if dec.per_neuron:
        if dec.w_d.shape[1] != data.shape[2]:
            raise DimensionError(
                'Per-neuron decoder has {} outputs, the train {}'.format(dec.w_d.shape[1], data.shape[2])
            )
        weights = reshape(dec.w_d, (dec.T, 1, dec.w_d.shape[1]))
    else:
        weights = reshape(dec.w_d, (dec.T, 1, 1))
    return reduce_sum(mul(weights, data), axis=0)


def decode_action(spikes, dec, max_action):
    '''
    Decode like :func:`decode_value`, then squash into ``[-max_action, max_action]``
    '''
    if max_action <= 0:
        raise DomainError('max_action must be positive, got {}'.format(max_action))
    return scale(tanh(decode_value(spikes, dec)), max_action)


def make_repeat_encoder(T, lif=None):  # pylint: disable=invalid-name
    return EncoderWeights(np.ones(_check_window(T)), lif=lif, trainable=False)


def make_rate_decoder(T, mode='value'):  # pylint: disable=invalid-name
    T = _check_window(T)
    return DecoderWeights(np.full(T, 1.0 / T), mode=mode, trainable=False)


def make_accumulate_decoder(T, beta, mode='value'):  # pylint: disable=invalid-name
    '''
    Frozen decoder weighting the spike emitted ``j`` steps before the end by ``beta**j``
    '''
    T = _check_window(T)
    if not 0 < beta <= 1:
        raise DomainError('beta must lie in (0, 1], got {}'.format(beta))
    return DecoderWeights(np.power(float(beta), np.arange(T - 1, -1, -1)), mode=mode, trainable=False)


def init_adaptive(T, rng=None, lif=None, mode='value', width=None, jitter=0.0):  # pylint: disable=invalid-name
    '''
    Trainable coder pair starting from repeat encoding and rate decoding.

    ``width`` gives a per-neuron decoder shaped (T, width). A non-zero ``jitter`` adds Gaussian
    noise of that scale to both weight vectors, drawn from ``rng`` (a generator or a seed).
    '''
    T = _check_window(T)
    if jitter and rng is None:
        raise ContractError('Jittered coders need a generator or a seed')
    rng = np.random.default_rng(rng)
    w_e = np.ones(T)
    w_d = np.full(T if width is None else (T, int(width)), 1.0 / T)
    if jitter:
        w_e = w_e + jitter * rng.standard_normal(w_e.shape)
        w_d = w_d + jitter * rng.standard_normal(w_d.shape)
    log.debug('Adaptive coders initialised: T=%d, per-neuron=%s, jitter=%s', T, width is not None, jitter)
    return EncoderWeights(w_e, lif=lif, trainable=True), DecoderWeights(w_d, mode=mode, trainable=True)
