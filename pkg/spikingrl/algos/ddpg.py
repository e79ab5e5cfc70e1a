# -*- coding: utf-8 -*-
'''
spikingrl.algos.ddpg
~~~~~~~~~~~~~~~~~~~~

Deterministic policy gradients with soft-updated actor and critic targets
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import OrderedDict

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.algos.common import Agent, Optimizer, soft_update
from spikingrl.algos.networks import ActorNetwork, BodyConfig, CriticNetwork
from spikingrl.autodiff import Tensor, backward, no_grad, reduce_mean, scale, square, sub
from spikingrl.exceptions import ContractError

log = logging.getLogger(__name__)


def _check_continuous(batch):
    if batch.size == 0:
        raise ContractError('The loss needs a non-empty batch')
    if batch.discrete:
        raise ContractError('This algorithm needs continuous actions')


def ddpg_critic_loss(batch, critic, critic_target, actor_target, gamma):
    '''
    Mean squared TD error against ``r + gamma * (1 - done) * Q_target(s', A_target(s'))``
    '''
    _check_continuous(batch)
    with no_grad():
        next_q = critic_target(batch.next_states, actor_target(batch.next_states)).values
    target = batch.rewards + gamma * (1.0 - batch.dones) * next_q
    return reduce_mean(square(sub(Tensor(target), critic(batch.states, batch.actions))))


def ddpg_actor_loss(batch, critic, actor):
    '''
    ``-mean Q(s, A(s))``; backpropagate it into the actor parameters only
    '''
    _check_continuous(batch)
    return scale(reduce_mean(critic(batch.states, actor(batch.states))), -1.0)


def ddpg_losses(batch, critic, critic_target, actor, actor_target, gamma):
    '''
    Return ``(critic_loss, actor_loss)`` recorded on the same tape.

    Differentiate the first with ``retain_tape=True`` before the second.
    '''
    return (
        ddpg_critic_loss(batch, critic, critic_target, actor_target, gamma),
        ddpg_actor_loss(batch, critic, actor),
    )


class DdpgAgent(Agent):
    '''
    Actor-critic agent for continuous actions with Gaussian exploration noise
    '''
    name = 'ddpg'

    def __init__(self, env_spec, options, rng):
        super(DdpgAgent, self).__init__(env_spec, options, rng)
        if env_spec.discrete:
            raise ContractError('DDPG needs a continuous action space, {} is discrete'.format(env_spec.env_id))
        config = BodyConfig.from_options(options)
        state_dim, action_dim = env_spec.state_dim, env_spec.action_dim
        self.max_action = env_spec.max_action
        self.actor = ActorNetwork(state_dim, action_dim, options.hidden_sizes, self.max_action, config, rng=rng)
        self.critic = CriticNetwork(state_dim, action_dim, options.hidden_sizes, config, rng=rng)
        self.actor_target = self.actor.clone()
        self.critic_target = self.critic.clone()
        self.actor_optimizer = Optimizer([self.actor], options.lr, options.coder_lr)
        self.critic_optimizer = Optimizer([self.critic], options.lr, options.coder_lr)

    def modules(self):
        return OrderedDict([
            ('actor', self.actor),
            ('actor_target', self.actor_target),
            ('critic', self.critic),
            ('critic_target', self.critic_target),
        ])

    def power_modules(self):
        return OrderedDict([('actor', self.actor.body), ('critic', self.critic.body)])

    def act(self, state, explore=False, rng=None):
        rng = rng if rng is not None else self.rng
        action = self._greedy(self.actor, state)[0]
        if explore and self.options.expl_noise > 0:
            noise = rng.normal(0.0, self.options.expl_noise * self.max_action, size=action.shape)
            action = np.clip(action + noise, -self.max_action, self.max_action)
        return action

    def update(self, batch):
        gamma, tau = self.options.gamma, self.options.tau
        critic_loss = ddpg_critic_loss(batch, self.critic, self.critic_target, self.actor_target, gamma)
        backward(critic_loss)
        self.critic_optimizer.step()

        actor_loss = ddpg_actor_loss(batch, self.critic, self.actor)
        backward(actor_loss, params=self.actor_optimizer.params)
        self.actor_optimizer.step()

        soft_update(self.critic_target, self.critic, tau)
        soft_update(self.actor_target, self.actor, tau)
        self.updates += 1
        return {'critic_loss': critic_loss.item(), 'actor_loss': actor_loss.item()}

    def probe(self, states):
        states = np.atleast_2d(states)
        with no_grad():
            self.critic(states, self.actor(states))
