# -*- coding: utf-8 -*-
'''
spikingrl.power
~~~~~~~~~~~~~~~

Synaptic operation (SynOps) counts as an energy proxy.

Spiking networks pay one operation per emitted spike and outgoing synapse::

    SynOps = sum_t sum_l sum_j fan_out(l) * s_j(l, t)

where the fan-out of a fully connected layer is the width of the next layer. Conventional
networks pay every neuron's full fan-in once per inference::

    SynOps = sum_l fan_in(l) * N(l)

Encoder and decoder multiplies are dense and reported apart in ``coder_ops``.
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import OrderedDict, namedtuple

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.exceptions import ContractError, DimensionError

log = logging.getLogger(__name__)

HEADER = (
    'SynOps: spiking layers count spikes x fan-out, conventional layers count fan-in x neurons; '
    'coder multiplies are counted separately as dense operations'
)


class SynOpsReport(namedtuple('SynOpsReport', ('variant', 'T', 'layer_counts', 'total', 'inferences',
                                               'spike_rates', 'coder_ops'))):
    '''
    Operation counts of one network.

    ``layer_counts`` and ``total`` add up over every recorded inference; ``per_inference``
    divides by their number.
    '''
    __slots__ = ()

    def __new__(cls, variant, T, layer_counts, inferences=1, spike_rates=None, coder_ops=0):  # pylint: disable=invalid-name
        layer_counts = tuple(int(count) for count in layer_counts)
        if any(count < 0 for count in layer_counts):
            raise ContractError('Operation counts must be non-negative')
        return super(SynOpsReport, cls).__new__(
            cls, variant, int(T), layer_counts, sum(layer_counts), int(inferences),
            tuple(spike_rates) if spike_rates is not None else (), int(coder_ops)
        )

    @property
    def per_inference(self):
        return float(self.total) / max(self.inferences, 1)

    @property
    def coder_ops_per_inference(self):
        return float(self.coder_ops) / max(self.inferences, 1)

    def as_dict(self):
        return OrderedDict([
            ('variant', self.variant),
            ('T', self.T),
            ('inferences', self.inferences),
            ('total', self.total),
            ('per_inference', self.per_inference),
            ('layer_counts', list(self.layer_counts)),
            ('spike_rates', list(self.spike_rates)),
            ('coder_ops', self.coder_ops),
        ])


def _widths(net):
    widths = getattr(net, 'widths', None)
    if widths is None:
        widths = getattr(net, 'sizes', None)
    if widths is None:
        widths = net
    widths = [int(width) for width in widths]
    if len(widths) < 2:
        raise DimensionError('A network needs at least an input and an output width')
    return widths


def synops_snn(net, recordings, T=None, coder_ops=0):  # pylint: disable=invalid-name
    '''
    Count the operations caused by recorded spikes.

    ``recordings[l]`` holds the spikes feeding layer ``l`` shaped (T, inferences, widths[l]);
    every layer except the output one needs a recording.
    '''
    widths = _widths(net)
    if recordings is None or len(recordings) != len(widths) - 1:
        raise ContractError('Expected spike recordings for {} layers, got {}'.format(
            len(widths) - 1, 0 if recordings is None else len(recordings)))
    counts = []
    rates = []
    window = T
    inferences = None
    for layer, spikes in enumerate(recordings):
        spikes = np.asarray(spikes, dtype=np.float64)
        if spikes.ndim != 3 or spikes.shape[2] != widths[layer]:
            raise DimensionError('Recording {} shaped {} does not match width {}'.format(layer, spikes.shape, widths[layer]))
        if window is None:
            window = spikes.shape[0]
        if spikes.shape[0] != window:
            raise ContractError('Recording {} covers {} timesteps, expected {}'.format(layer, spikes.shape[0], window))
        if inferences is None:
            inferences = spikes.shape[1]
        counts.append(int(round(spikes.sum())) * widths[layer + 1])
        rates.append(float(spikes.mean()) if spikes.size else 0.0)
    report = SynOpsReport('spiking', window, counts, inferences=inferences or 0, spike_rates=rates, coder_ops=coder_ops)
    log.debug('SNN SynOps %s per inference over %d inferences', report.per_inference, report.inferences)
    return report


def synops_ann(net, inferences=1, coder_ops=0, passes=1):
    '''
    Static count of a conventional network: every neuron pays its fan-in once per pass.

    A conventional MLP behind a temporal encoder runs once per timestep and takes ``passes=T``.
    '''
    if passes < 1:
        raise ContractError('A network runs at least once per inference, got passes={}'.format(passes))
    widths = _widths(net)
    counts = [fan_in * neurons * inferences * passes for fan_in, neurons in zip(widths[:-1], widths[1:])]
    return SynOpsReport('ann', passes, counts, inferences=inferences, coder_ops=coder_ops)


def coder_ops(body, inferences=1):
    '''
    Dense multiplies spent by a body's encoder and decoder over ``inferences`` inferences
    '''
    ops = 0
    if getattr(body, 'encoder', None) is not None:
        ops += body.encoder.T * body.sizes[0]
    if getattr(body, 'decoder', None) is not None:
        ops += body.decoder.T * body.sizes[-1]
    return ops * inferences


def mlp_passes(body):
    '''
    How many times a conventional body runs its MLP per inference
    '''
    encoder = getattr(body, 'encoder', None)
    return encoder.T if encoder is not None else 1


def body_report(body, inferences=1):
    '''
    Report for a coded body.

    Spiking bodies are counted from the spikes recorded inside ``body.net.recording()``;
    conventional ones statically over ``inferences`` inferences.
    '''
    if body.spiking:
        recordings = body.net.recordings
        if not recordings:
            raise ContractError('No spikes were recorded for this network')
        inferences = recordings[0].shape[1]
        return synops_snn(body.sizes, recordings, T=body.net.T, coder_ops=coder_ops(body, inferences))
    return synops_ann(body.sizes, inferences=inferences, coder_ops=coder_ops(body, inferences),
                      passes=mlp_passes(body))
