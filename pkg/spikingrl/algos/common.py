# -*- coding: utf-8 -*-
'''
spikingrl.algos.common
~~~~~~~~~~~~~~~~~~~~~~

Pieces shared by the learning algorithms: target network updates, exploration,
optimizers and the agent interface the harness drives.
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import OrderedDict

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.algos.networks import CodedBody
from spikingrl.autodiff import AdamState, adam_step, no_grad
from spikingrl.exceptions import ContractError

log = logging.getLogger(__name__)


def soft_update(target, source, tau):
    '''
    ``target <- tau * source + (1 - tau) * target`` over every tensor of the two modules
    '''
    if not 0.0 <= tau <= 1.0:
        raise ContractError('tau must lie in [0, 1], got {}'.format(tau))
    target_tensors = list(target.named_tensors())
    source_tensors = list(source.named_tensors())
    if [name for name, _ in target_tensors] != [name for name, _ in source_tensors]:
        raise ContractError('Cannot update {} from {}: architectures differ'.format(
            type(target).__name__, type(source).__name__))
    for (name, dst), (_, src) in zip(target_tensors, source_tensors):
        if dst.shape != src.shape:
            raise ContractError('{}: shape {} does not match {}'.format(name, dst.shape, src.shape))
        if tau == 1.0:
            dst.values = src.values.copy()
        elif tau > 0.0:
            dst.values = tau * src.values + (1.0 - tau) * dst.values


def epsilon_greedy(q_values, epsilon, rng):
    '''
    Uniform random action with probability ``epsilon``, otherwise the greedy one with ties
    going to the lowest index
    '''
    q_values = np.asarray(q_values, dtype=np.float64).reshape(-1)
    if q_values.size == 0:
        raise ContractError('Cannot pick an action from an empty value vector')
    if not 0.0 <= epsilon <= 1.0:
        raise ContractError('epsilon must lie in [0, 1], got {}'.format(epsilon))
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(q_values.size))
    return int(np.argmax(q_values))


class LinearSchedule(object):
    '''
    Value moving linearly from ``start`` to ``end`` over ``steps`` calls, then constant
    '''

    def __init__(self, start, end, steps):
        self.start = float(start)
        self.end = float(end)
        self.steps = max(int(steps), 0)

    def __call__(self, step):
        if self.steps == 0 or step >= self.steps:
            return self.end
        return self.start + (self.end - self.start) * float(step) / self.steps


class Optimizer(object):
    '''
    Adam over the parameters of one or more modules.

    Coder weights (encoder and decoder) form their own group so they can get a separate
    learning rate.
    '''

    def __init__(self, modules, lr, coder_lr=None):
        body_params, coder_params = [], []
        for module in modules:
            for body in _coded_bodies(module):
                coder_params.extend(body.coder_parameters())
            coder_ids = set(id(param) for param in coder_params)
            body_params.extend(param for param in module.parameters() if id(param) not in coder_ids)
        self.groups = [(body_params, AdamState(body_params, lr=lr))]
        if coder_params:
            self.groups.append((coder_params, AdamState(coder_params, lr=coder_lr or lr)))

    @property
    def params(self):
        return [param for params, _ in self.groups for param in params]

    def zero_grad(self):
        for param in self.params:
            param.grad = None

    def step(self):
        for params, state in self.groups:
            adam_step(params, state)


def _coded_bodies(module):
    if isinstance(module, CodedBody):
        return [module]
    return [value for value in vars(module).values() if isinstance(value, CodedBody)]


class Agent(object):
    '''
    Interface every algorithm exposes to the harness.

    ``options`` is any object exposing the run configuration keys as attributes.
    '''
    name = None
    discrete = False
    offline = False

    def __init__(self, env_spec, options, rng):
        self.env_spec = env_spec
        self.options = options
        self.rng = rng
        self.updates = 0

    def modules(self):
        '''
        Every network of the agent, targets included, by name
        '''
        raise NotImplementedError

    def power_modules(self):
        '''
        The networks whose operations are counted when estimating power, by name
        '''
        raise NotImplementedError

    def act(self, state, explore=False, rng=None):
        raise NotImplementedError

    def update(self, batch):
        '''
        One learning iteration on ``batch``; returns the losses by name
        '''
        raise NotImplementedError

    def probe(self, states):
        '''
        Run every power-counted network on ``states`` without recording gradients
        '''
        raise NotImplementedError

    def state_dict(self):
        return OrderedDict((name, module.state_dict()) for name, module in self.modules().items())

    def load_state_dict(self, state):
        modules = self.modules()
        if sorted(state) != sorted(modules):
            raise ContractError('Checkpoint networks {} do not match {}'.format(sorted(state), sorted(modules)))
        for name, module in modules.items():
            module.load_state_dict(state[name])

    def _greedy(self, network, states):
        with no_grad():
            return network(np.atleast_2d(states)).values
