# -*- coding: utf-8 -*-
'''
spikingrl.envs.chain
~~~~~~~~~~~~~~~~~~~~

Deterministic two-state chain with a known optimal action-value function.

States are one-hot. Action 0 stays, action 1 moves to the other state. Staying in
state 1 pays 1, everything else pays 0. With discount ``gamma``::

    Q*(1, stay) = 1 / (1 - gamma)
    Q*(0, move) = gamma / (1 - gamma)
    Q*(0, stay) = Q*(1, move) = gamma^2 / (1 - gamma)
'''

# Import python libs
from __future__ import absolute_import

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.algos.buffer import Transition
from spikingrl.envs.base import Env, EnvSpec


def chain_reward(position, action):
    return 1.0 if position == 1 and action == 0 else 0.0


def chain_next(position, action):
    return position if action == 0 else 1 - position


def one_hot(position):
    state = np.zeros(2)
    state[position] = 1.0
    return state


def optimal_q(gamma):
    '''
    Closed form fixed point of the Bellman optimality equation, shaped (state, action)
    '''
    top = 1.0 / (1.0 - gamma)
    return np.array([
        [gamma ** 2 * top, gamma * top],
        [top, gamma ** 2 * top],
    ])


def all_transitions():
    '''
    Every (state, action) pair exactly once
    '''
    return [
        Transition(one_hot(position), action, chain_reward(position, action),
                   one_hot(chain_next(position, action)), False)
        for position in (0, 1) for action in (0, 1)
    ]


class Chain(Env):
    spec = EnvSpec('chain', state_dim=2, action_dim=2, discrete=True, max_steps=20)

    def __init__(self):
        super(Chain, self).__init__()
        self.position = 0

    def _reset(self, rng):
        self.position = int(rng.integers(2))

    def _step(self, action):
        reward = chain_reward(self.position, action)
        self.position = chain_next(self.position, action)
        return reward, False

    def _observe(self):
        return one_hot(self.position)
