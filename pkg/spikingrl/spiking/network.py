# -*- coding: utf-8 -*-
'''
spikingrl.spiking.network
~~~~~~~~~~~~~~~~~~~~~~~~~

Spiking fully connected networks unrolled over the simulation window.

At every timestep the input slice is propagated through all layers (weights, then LIF),
and every layer carries its membrane state to the next timestep. The whole unroll is
recorded on the tape so BPTT follows both the spatial and the temporal edges.
'''

# Import python libs
from __future__ import absolute_import
import logging
import contextlib
from collections import namedtuple

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.autodiff import Module, Linear, as_tensor, stack
from spikingrl.exceptions import ContractError, DimensionError
from spikingrl.spiking.lif import LifParams, SpikeTrain, initial_state, lif_integrate, lif_step

log = logging.getLogger(__name__)

OUTPUT_MODES = ('spike', 'current')


class SpikingMlpConfig(namedtuple('SpikingMlpConfig', ('widths', 'lif', 'T', 'output_mode', 'bias_last'))):
    '''
    Shape of a spiking MLP.

    ``widths`` runs from the input width to the output width and must contain at least one
    hidden layer. ``lif`` is either one LifParams shared by every layer or one per layer.
    ``output_mode='current'`` turns the output layer into a non-firing integrator whose
    input currents are returned instead of spikes.
    '''
    __slots__ = ()

    def __new__(cls, widths, lif=None, T=4, output_mode='spike', bias_last=True):
        widths = tuple(int(width) for width in widths)
        if len(widths) < 3:
            raise ContractError('A spiking MLP needs at least one hidden layer, got widths {}'.format(widths))
        if any(width <= 0 for width in widths):
            raise DimensionError('Layer widths must be positive, got {}'.format(widths))
        if T < 1:
            raise ContractError('The simulation window must hold at least one timestep')
        if output_mode not in OUTPUT_MODES:
            raise ContractError('Unknown output mode {!r}'.format(output_mode))
        if lif is None:
            lif = LifParams()
        if isinstance(lif, LifParams):
            lif = (lif,) * (len(widths) - 1)
        lif = tuple(lif)
        if len(lif) != len(widths) - 1:
            raise ContractError('Expected {} LIF parameter sets, got {}'.format(len(widths) - 1, len(lif)))
        return super(SpikingMlpConfig, cls).__new__(cls, widths, lif, int(T), output_mode, bool(bias_last))


class SpikingMlp(Module):
    '''
    Fully connected LIF layers. Only the last layer carries a bias.
    '''

    def __init__(self, config, rng=None):
        rng = rng if rng is not None else np.random.default_rng()
        self.config = config
        widths = config.widths
        last = len(widths) - 2
        self.layers = [
            Linear(i, o, bias=config.bias_last and index == last, rng=rng)
            for index, (i, o) in enumerate(zip(widths[:-1], widths[1:]))
        ]
        self._states = [None] * len(self.layers)
        self._recording = False
        self._recordings = []

    @property
    def widths(self):
        return self.config.widths

    @property
    def T(self):  # pylint: disable=invalid-name
        return self.config.T

    def reset_state(self, batch_size=None):
        '''
        Put every neuron back to V_reset
        '''
        if batch_size is None:
            batch_size = self._states[0].h.shape[0] if self._states[0] is not None else 1
        self._states = [
            initial_state((batch_size, layer.out_dim), params)
            for layer, params in zip(self.layers, self.config.lif)
        ]

    @property
    def states(self):
        return list(self._states)

    @contextlib.contextmanager
    def recording(self):
        '''
        Record, per forward call, the spikes every layer sends to the next one
        '''
        self._recording = True
        self._recordings = []
        try:
            yield self
        finally:
            self._recording = False

    @property
    def recordings(self):
        '''
        Per-layer spike recordings concatenated over every recorded forward call.

        Entry ``l`` is shaped (T, inferences, width) and holds the spikes feeding
        layer ``l``, entry 0 being the input train.
        '''
        if not self._recordings:
            return []
        return [
            np.concatenate([call[index] for call in self._recordings], axis=1)
            for index in range(len(self._recordings[0]))
        ]

    def forward_unroll(self, inputs):
        '''
        Propagate a temporal input shaped (T, batch, width_in) and return the output train
        '''
        data = inputs.data if isinstance(inputs, SpikeTrain) else as_tensor(inputs)
        if data.ndim != 3 or data.shape[0] != self.T or data.shape[2] != self.widths[0]:
            raise DimensionError(
                'Expected a temporal input shaped ({}, batch, {}), got {}'.format(self.T, self.widths[0], data.shape)
            )
        batch_size = data.shape[1]
        self.reset_state(batch_size)
        current_mode = self.config.output_mode == 'current'
        last = len(self.layers) - 1
        per_layer = [[] for _ in self.layers]
        outputs = []
        for t in range(self.T):
            x = data[t]
            per_layer[0].append(x.values)
            for index, (layer, params) in enumerate(zip(self.layers, self.config.lif)):
                current = layer(x)
                if index == last and current_mode:
                    # The voltage is tracked for inspection only; the decoder reads the currents
                    self._states[index] = lif_integrate(current.detach(), self._states[index], params)
                    x = current
                    continue
                x, self._states[index] = lif_step(current, self._states[index], params)
                if index < last:
                    per_layer[index + 1].append(x.values)
            outputs.append(x)
        if self._recording:
            self._recordings.append([np.stack(steps, axis=0) for steps in per_layer])
        if log.isEnabledFor(5):
            log.log(
                5, 'Unrolled %d steps, batch %d, mean firing %s', self.T, batch_size,
                [float(np.mean(steps)) for steps in per_layer[1:]]
            )
        return SpikeTrain(stack(outputs, axis=0))

    def forward(self, inputs):
        return self.forward_unroll(inputs)


def forward_unroll(net, temporal_input):
    return net.forward_unroll(temporal_input)


def reset_state(net):
    net.reset_state()
