# -*- coding: utf-8 -*-
'''
spikingrl.algos.dqn
~~~~~~~~~~~~~~~~~~~

Deep Q-learning with a smooth L1 TD loss and a periodically copied target network
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import OrderedDict

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.algos.common import Agent, LinearSchedule, Optimizer, epsilon_greedy, soft_update
from spikingrl.algos.networks import BodyConfig, QNetwork
from spikingrl.autodiff import Tensor, backward, getitem, no_grad, reduce_mean, smooth_l1, sub
from spikingrl.exceptions import ContractError

log = logging.getLogger(__name__)


def dqn_target(batch, q_target, gamma):
    '''
    ``r + gamma * (1 - done) * max_a' Q_target(s', a')``, outside the tape
    '''
    with no_grad():
        next_q = q_target(batch.next_states).values.max(axis=1)
    return batch.rewards + gamma * (1.0 - batch.dones) * next_q


def dqn_loss(batch, q_current, q_target, gamma):
    '''
    Batch mean of the smooth L1 TD error of ``q_current`` against the target network
    '''
    if batch.size == 0:
        raise ContractError('The DQN loss needs a non-empty batch')
    if not batch.discrete:
        raise ContractError('DQN needs discrete actions')
    target = dqn_target(batch, q_target, gamma)
    q_values = q_current(batch.states)
    chosen = getitem(q_values, (np.arange(batch.size), batch.actions))
    return reduce_mean(smooth_l1(sub(Tensor(target), chosen)))


class DqnAgent(Agent):
    '''
    Epsilon-greedy Q-learning agent for discrete action spaces
    '''
    name = 'dqn'
    discrete = True

    def __init__(self, env_spec, options, rng):
        super(DqnAgent, self).__init__(env_spec, options, rng)
        if not env_spec.discrete:
            raise ContractError('DQN needs a discrete action space, {} is continuous'.format(env_spec.env_id))
        self.q = QNetwork(
            env_spec.state_dim, env_spec.action_dim, options.hidden_sizes, BodyConfig.from_options(options), rng=rng
        )
        self.q_target = self.q.clone()
        self.optimizer = Optimizer([self.q], options.lr, options.coder_lr)
        self.epsilon = LinearSchedule(options.epsilon_start, options.epsilon_end, options.epsilon_decay_steps)
        self.steps = 0

    def modules(self):
        return OrderedDict([('q', self.q), ('q_target', self.q_target)])

    def power_modules(self):
        return OrderedDict([('q', self.q.body)])

    def q_values(self, state):
        return self._greedy(self.q, state)[0]

    def act(self, state, explore=False, rng=None):
        rng = rng if rng is not None else self.rng
        if explore:
            epsilon = self.epsilon(self.steps)
            self.steps += 1
        else:
            epsilon = self.options.eval_epsilon
        return epsilon_greedy(self.q_values(state), epsilon, rng)

    def update(self, batch):
        loss = dqn_loss(batch, self.q, self.q_target, self.options.gamma)
        backward(loss)
        self.optimizer.step()
        self.updates += 1
        if self.updates % self.options.target_update_period == 0:
            soft_update(self.q_target, self.q, self.options.tau)
            log.debug('Target network updated after %d updates', self.updates)
        return {'q_loss': loss.item()}

    def probe(self, states):
        with no_grad():
            self.q(np.atleast_2d(states))
