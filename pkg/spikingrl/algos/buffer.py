# -*- coding: utf-8 -*-
'''
spikingrl.algos.buffer
~~~~~~~~~~~~~~~~~~~~~~

Fixed capacity ring buffer of transitions with a seeded uniform sampler
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import namedtuple
from operator import itemgetter

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.exceptions import ContractError, DimensionError

log = logging.getLogger(__name__)


class Transition(namedtuple('Transition', ('state', 'action', 'reward', 'next_state', 'done'))):
    '''
    One environment step.

    ``done`` is the terminal flag used to mask bootstrapped targets; an episode cut by its
    step cap is not terminal.
    '''
    __slots__ = ()

    state = property(itemgetter(0))
    action = property(itemgetter(1))
    reward = property(itemgetter(2))
    next_state = property(itemgetter(3))
    done = property(itemgetter(4))


class Batch(namedtuple('Batch', ('states', 'actions', 'rewards', 'next_states', 'dones'))):
    '''
    Column-wise batch of transitions, every field a numpy array with the batch on axis 0
    '''
    __slots__ = ()

    @property
    def size(self):
        return self.states.shape[0]

    @property
    def discrete(self):
        return np.issubdtype(self.actions.dtype, np.integer)

    @classmethod
    def from_transitions(cls, transitions, discrete=False):
        transitions = list(transitions)
        if not transitions:
            raise ContractError('Cannot build a batch from zero transitions')
        return cls(
            np.array([t.state for t in transitions], dtype=np.float64),
            np.array([t.action for t in transitions], dtype=np.int64 if discrete else np.float64),
            np.array([t.reward for t in transitions], dtype=np.float64),
            np.array([t.next_state for t in transitions], dtype=np.float64),
            np.array([t.done for t in transitions], dtype=np.float64),
        )


class ReplayBuffer(object):
    '''
    Ring storage evicting the oldest transition first.

    Discrete actions are stored as integer indexes, continuous ones as float vectors of
    width ``action_dim``.
    '''

    def __init__(self, capacity, state_dim, action_dim, discrete=False, seed=None):
        if capacity < 1:
            raise ContractError('The buffer capacity must be positive, got {}'.format(capacity))
        self.capacity = int(capacity)
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.discrete = bool(discrete)
        self.states = np.zeros((self.capacity, self.state_dim))
        self.next_states = np.zeros((self.capacity, self.state_dim))
        if self.discrete:
            self.actions = np.zeros(self.capacity, dtype=np.int64)
        else:
            self.actions = np.zeros((self.capacity, self.action_dim))
        self.rewards = np.zeros(self.capacity)
        self.dones = np.zeros(self.capacity)
        self._cursor = 0
        self._size = 0
        self._rng = np.random.default_rng(seed)

    def __len__(self):
        return self._size

    def add(self, state, action, reward, next_state, done):
        state = np.asarray(state, dtype=np.float64)
        next_state = np.asarray(next_state, dtype=np.float64)
        if state.shape != (self.state_dim,) or next_state.shape != (self.state_dim,):
            raise DimensionError(
                'Expected states of width {}, got {} and {}'.format(self.state_dim, state.shape, next_state.shape)
            )
        index = self._cursor
        self.states[index] = state
        self.next_states[index] = next_state
        if self.discrete:
            self.actions[index] = int(action)
        else:
            action = np.asarray(action, dtype=np.float64).reshape(-1)
            if action.shape != (self.action_dim,):
                raise DimensionError('Expected actions of width {}, got {}'.format(self.action_dim, action.shape))
            self.actions[index] = action
        self.rewards[index] = reward
        self.dones[index] = float(done)
        self._cursor = (self._cursor + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def extend(self, states, actions, rewards, next_states, dones):
        for row in zip(states, actions, rewards, next_states, dones):
            self.add(*row)

    def _take(self, indexes):
        return Batch(
            self.states[indexes].copy(),
            self.actions[indexes].copy(),
            self.rewards[indexes].copy(),
            self.next_states[indexes].copy(),
            self.dones[indexes].copy(),
        )

    def sample(self, batch_size):
        '''
        Uniformly sample ``batch_size`` transitions with replacement
        '''
        if self._size == 0:
            raise ContractError('Cannot sample from an empty buffer')
        if batch_size < 1:
            raise ContractError('The batch size must be positive, got {}'.format(batch_size))
        return self._take(self._rng.integers(0, self._size, size=batch_size))

    def all(self):
        '''
        Every stored transition, oldest first
        '''
        if self._size == 0:
            raise ContractError('The buffer is empty')
        if self._size < self.capacity:
            indexes = np.arange(self._size)
        else:
            indexes = (np.arange(self.capacity) + self._cursor) % self.capacity
        return self._take(indexes)

    @classmethod
    def from_dataset(cls, dataset, seed=None):
        '''
        Load a whole offline dataset into a buffer sized to it
        '''
        buf = cls(max(len(dataset), 1), dataset.state_dim, dataset.action_dim, dataset.discrete, seed=seed)
        buf.extend(dataset.states, dataset.actions, dataset.rewards, dataset.next_states, dataset.dones)
        log.debug('Loaded %d transitions from dataset %s', len(buf), dataset.env_id)
        return buf
