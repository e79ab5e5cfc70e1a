# -*- coding: utf-8 -*-
'''
spikingrl.algos.bc
~~~~~~~~~~~~~~~~~~

Behaviour cloning: supervised regression of dataset actions on states
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import OrderedDict

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.algos.common import Agent, Optimizer
from spikingrl.algos.networks import BodyConfig, PolicyNetwork
from spikingrl.autodiff import Tensor, backward, no_grad, reduce_mean, reduce_sum, scale, square, sub
from spikingrl.exceptions import ContractError

log = logging.getLogger(__name__)


def bc_loss(batch, policy):
    '''
    ``1/2 * mean_batch sum_i (P(s)_i - a_i)^2``
    '''
    if batch.size == 0:
        raise ContractError('The loss needs a non-empty batch')
    if batch.discrete:
        raise ContractError('Behaviour cloning needs continuous actions')
    errors = sub(policy(batch.states), Tensor(batch.actions))
    return scale(reduce_mean(reduce_sum(square(errors), axis=1)), 0.5)


class BcAgent(Agent):
    name = 'bc'
    offline = True

    def __init__(self, env_spec, options, rng):
        super(BcAgent, self).__init__(env_spec, options, rng)
        if env_spec.discrete:
            raise ContractError('Behaviour cloning needs a continuous action space')
        self.max_action = env_spec.max_action
        self.policy = PolicyNetwork(
            env_spec.state_dim, env_spec.action_dim, options.hidden_sizes, self.max_action,
            BodyConfig.from_options(options), rng=rng
        )
        self.optimizer = Optimizer([self.policy], options.lr, options.coder_lr)

    def modules(self):
        return OrderedDict([('policy', self.policy)])

    def power_modules(self):
        return OrderedDict([('policy', self.policy.body)])

    def act(self, state, explore=False, rng=None):
        return np.clip(self._greedy(self.policy, state)[0], -self.max_action, self.max_action)

    def update(self, batch):
        loss = bc_loss(batch, self.policy)
        backward(loss)
        self.optimizer.step()
        self.updates += 1
        return {'policy_loss': loss.item()}

    def probe(self, states):
        with no_grad():
            self.policy(np.atleast_2d(states))
