# -*- coding: utf-8 -*-
'''
spikingrl.algos.networks
~~~~~~~~~~~~~~~~~~~~~~~~

Function approximators shared by every algorithm.

Every network is built around a :class:`CodedBody`, which hides whether the
function is computed by a conventional MLP or by encoder, spiking MLP and decoder. The
algorithms only ever see ``(batch, in) -> (batch, out)`` so swapping the variant changes no
algorithm code.
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import namedtuple

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.autodiff import (
    Module, Linear, Mlp, Tensor, as_tensor, add, mul, exp, relu, tanh, scale, clip, concat, reshape
)
from spikingrl.coders import (
    decode_action, decode_value, encode, expand, init_adaptive,
    make_accumulate_decoder, make_rate_decoder, make_repeat_encoder
)
from spikingrl.exceptions import ContractError, InvariantViolation
from spikingrl.spiking import LifParams, SpikingMlp, SpikingMlpConfig

log = logging.getLogger(__name__)

VARIANTS = ('ann', 'spiking')
CODERS = ('adaptive', 'rate', 'accumulate', 'none')

LOG_STD_MIN = -4.0
LOG_STD_MAX = 15.0
LATENT_CLIP = 0.5


class BodyConfig(namedtuple('BodyConfig', ('variant', 'coder', 'T', 'lif', 'per_neuron_decoder'))):
    '''
    Which kind of function approximator to build.

    ``ann`` bodies take the ``none`` coder (plain MLP) or the ``adaptive`` coder (temporal
    expansion without neurons, the MLP applied per timestep, adaptive decoding). ``spiking``
    bodies take ``adaptive``, ``rate`` (repeat encoding and firing-rate decoding) or
    ``accumulate`` (repeat encoding and the final voltage of a non-firing output layer).
    '''
    __slots__ = ()

    def __new__(cls, variant='ann', coder='none', T=4, lif=None, per_neuron_decoder=False):
        if variant not in VARIANTS:
            raise ContractError('Unknown network variant {!r}'.format(variant))
        if coder not in CODERS:
            raise ContractError('Unknown coder {!r}'.format(coder))
        if variant == 'spiking' and coder == 'none':
            raise ContractError('A spiking network needs an encoder and a decoder')
        if variant == 'ann' and coder not in ('none', 'adaptive'):
            raise ContractError('The {} coder needs spiking neurons'.format(coder))
        return super(BodyConfig, cls).__new__(
            cls, variant, coder, int(T), lif if lif is not None else LifParams(), bool(per_neuron_decoder)
        )

    @classmethod
    def from_options(cls, options):
        lif = LifParams(
            beta=options.beta, v_threshold=options.v_threshold, v_reset=options.v_reset, alpha=options.alpha
        )
        return cls(options.variant, options.coder, options.T, lif, options.per_neuron_decoder)

    def replace(self, **kwargs):
        return BodyConfig(**dict(self._asdict(), **kwargs))


class CodedBody(Module):
    '''
    ``(batch, sizes[0]) -> (batch, sizes[-1])`` function approximator.

    With ``max_action`` set the output is squashed into ``[-max_action, max_action]``.
    '''

    def __init__(self, sizes, config, activation='relu', max_action=None, rng=None):
        rng = rng if rng is not None else np.random.default_rng()
        self.sizes = [int(size) for size in sizes]
        self.config = config
        self.max_action = max_action
        self.encoder = None
        self.decoder = None
        self.mlp = None
        self.net = None
        mode = 'value' if max_action is None else 'action'
        if config.coder == 'adaptive':
            width = self.sizes[-1] if config.per_neuron_decoder else None
            self.encoder, self.decoder = init_adaptive(config.T, rng=rng, lif=config.lif, mode=mode, width=width)
        elif config.coder == 'rate':
            self.encoder = make_repeat_encoder(config.T, lif=config.lif)
            self.decoder = make_rate_decoder(config.T, mode=mode)
        elif config.coder == 'accumulate':
            self.encoder = make_repeat_encoder(config.T, lif=config.lif)
            self.decoder = make_accumulate_decoder(config.T, config.lif.beta, mode=mode)
        if config.variant == 'spiking':
            output_mode = 'current' if config.coder == 'accumulate' else 'spike'
            self.net = SpikingMlp(SpikingMlpConfig(self.sizes, config.lif, config.T, output_mode), rng=rng)
        else:
            self.mlp = Mlp(self.sizes, activation=activation, rng=rng)

    @property
    def spiking(self):
        return self.net is not None

    def coder_parameters(self):
        params = []
        for coder in (self.encoder, self.decoder):
            if coder is not None:
                params.extend(coder.parameters())
        return params

    def _squash(self, out):
        return scale(tanh(out), self.max_action)

    def forward(self, x):
        x = as_tensor(x)
        if self.spiking:
            out = self.net.forward_unroll(encode(x, self.encoder))
            if self.max_action is not None:
                return decode_action(out, self.decoder, self.max_action)
            return decode_value(out, self.decoder)
        if self.encoder is None:
            out = self.mlp(x)
        else:
            expanded = expand(x, self.encoder)
            T, batch, width = expanded.shape  # pylint: disable=invalid-name
            flat = self.mlp(reshape(expanded, (T * batch, width)))
            out = decode_value(reshape(flat, (T, batch, self.sizes[-1])), self.decoder)
        if self.max_action is not None:
            return self._squash(out)
        return out


class QNetwork(Module):
    '''
    State to one value per discrete action
    '''

    def __init__(self, state_dim, n_actions, hidden_sizes, config, rng=None):
        self.body = CodedBody([state_dim] + list(hidden_sizes) + [n_actions], config, rng=rng)

    def forward(self, states):
        return self.body(states)


class CriticNetwork(Module):
    '''
    ``Q(s, a)`` over the concatenated state and action, shaped (batch,)
    '''

    def __init__(self, state_dim, action_dim, hidden_sizes, config, rng=None):
        self.body = CodedBody([state_dim + action_dim] + list(hidden_sizes) + [1], config, rng=rng)

    def forward(self, states, actions):
        out = self.body(concat([as_tensor(states), as_tensor(actions)], axis=1))
        return reshape(out, (out.shape[0],))


class ActorNetwork(Module):
    '''
    Deterministic policy bounded to ``[-max_action, max_action]``
    '''

    def __init__(self, state_dim, action_dim, hidden_sizes, max_action, config, rng=None):
        self.max_action = float(max_action)
        self.body = CodedBody(
            [state_dim] + list(hidden_sizes) + [action_dim], config, max_action=self.max_action, rng=rng
        )

    def forward(self, states):
        return self.body(states)


class PerturbationNetwork(Module):
    '''
    Bounded adjustment ``xi(s, a)`` in ``[-phi, phi]`` applied to sampled actions
    '''

    def __init__(self, state_dim, action_dim, hidden_sizes, max_action, phi, config, rng=None):
        self.max_action = float(max_action)
        self.phi = float(phi)
        self.body = CodedBody(
            [state_dim + action_dim] + list(hidden_sizes) + [action_dim], config, max_action=self.phi, rng=rng
        )

    def forward(self, states, actions):
        return self.body(concat([as_tensor(states), as_tensor(actions)], axis=1))

    def perturb(self, states, actions):
        '''
        Return ``clip(a + xi(s, a))`` inside the action bounds
        '''
        actions = as_tensor(actions)
        return clip(add(actions, self.forward(states, actions)), -self.max_action, self.max_action)


class VaeNetwork(Module):
    '''
    Conditional VAE over the actions of a dataset.

    The encoder maps ``(s, a)`` to a diagonal Gaussian over a latent of width ``latent_dim``;
    the decoder maps ``(s, z)`` back to a bounded action.
    '''

    def __init__(self, state_dim, action_dim, latent_dim, hidden_sizes, max_action, rng=None):
        rng = rng if rng is not None else np.random.default_rng()
        hidden_sizes = list(hidden_sizes)
        self.latent_dim = int(latent_dim)
        self.max_action = float(max_action)
        self.encoder = Mlp([state_dim + action_dim] + hidden_sizes, rng=rng)
        self.mean = Linear(hidden_sizes[-1], self.latent_dim, rng=rng)
        self.log_std = Linear(hidden_sizes[-1], self.latent_dim, rng=rng)
        self.decoder = Mlp([state_dim + self.latent_dim] + hidden_sizes + [action_dim], rng=rng)

    def encode(self, states, actions):
        '''
        Return ``(mean, log_std)`` of the posterior, ``log_std`` clipped into a safe range
        '''
        hidden = relu(self.encoder(concat([as_tensor(states), as_tensor(actions)], axis=1)))
        return self.mean(hidden), clip(self.log_std(hidden), LOG_STD_MIN, LOG_STD_MAX)

    def decode(self, states, z=None, rng=None):
        '''
        Decode a latent into an action; without ``z`` a clipped prior sample is drawn
        '''
        states = as_tensor(states)
        if z is None:
            rng = rng if rng is not None else np.random.default_rng()
            z = Tensor(np.clip(rng.standard_normal((states.shape[0], self.latent_dim)), -LATENT_CLIP, LATENT_CLIP))
        out = self.decoder(concat([states, as_tensor(z)], axis=1))
        return scale(tanh(out), self.max_action)

    def forward(self, states, actions, rng=None):
        '''
        Reparameterised pass returning ``(reconstruction, mean, log_std)``
        '''
        rng = rng if rng is not None else np.random.default_rng()
        mean, log_std = self.encode(states, actions)
        std = exp(log_std)
        if np.any(std.values <= 0):
            raise InvariantViolation('The posterior standard deviation must be positive')
        noise = Tensor(rng.standard_normal(mean.shape))
        z = add(mean, mul(std, noise))
        return self.decode(states, z), mean, log_std


class PolicyNetwork(Module):
    '''
    Behaviour cloning policy ``D_s-400-Tanh-300-Tanh-D_a`` with a linear output.

    Actions are clipped into the bounds only when acting.
    '''

    def __init__(self, state_dim, action_dim, hidden_sizes, max_action, config, rng=None):
        self.max_action = float(max_action)
        self.body = CodedBody([state_dim] + list(hidden_sizes) + [action_dim], config, activation='tanh', rng=rng)

    def forward(self, states):
        return self.body(states)
