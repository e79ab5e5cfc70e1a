# -*- coding: utf-8 -*-
'''
spikingrl.envs.base
~~~~~~~~~~~~~~~~~~~

Environment interface and bookkeeping shared by the control tasks
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import namedtuple
from operator import itemgetter

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.exceptions import ContractError

log = logging.getLogger(__name__)


class EnvSpec(namedtuple('EnvSpec', ('env_id', 'state_dim', 'action_dim', 'discrete', 'max_action', 'max_steps'))):
    '''
    Static description of an environment.

    ``action_dim`` is the number of actions for discrete spaces and the action width for
    continuous ones. ``max_action`` only applies to continuous spaces.
    '''
    __slots__ = ()

    def __new__(cls, env_id, state_dim, action_dim, discrete, max_action=None, max_steps=1000):
        if state_dim <= 0 or action_dim <= 0:
            raise ContractError('Environment dimensions must be positive')
        if not discrete and (max_action is None or max_action <= 0):
            raise ContractError('Continuous environments need a positive max_action')
        if max_steps < 1:
            raise ContractError('Episodes must allow at least one step')
        return super(EnvSpec, cls).__new__(
            cls, env_id, int(state_dim), int(action_dim), bool(discrete),
            None if discrete else float(max_action), int(max_steps)
        )


class StepResult(namedtuple('StepResult', ('state', 'reward', 'done', 'terminated'))):
    '''
    Outcome of one step. ``done`` ends the episode; ``terminated`` is set only when the
    episode ended in a terminal state rather than at the step cap.
    '''
    __slots__ = ()

    state = property(itemgetter(0))
    reward = property(itemgetter(1))
    done = property(itemgetter(2))
    terminated = property(itemgetter(3))

    @property
    def truncated(self):
        return self.done and not self.terminated


class Env(object):
    '''
    Base environment.

    Subclasses set ``spec`` and implement ``_reset(rng)`` returning the internal state and
    ``_step(action)`` returning ``(reward, terminated)``; ``_observe()`` maps the internal
    state to the observation vector.
    '''
    spec = None

    def __init__(self):
        self.steps = 0
        self.done = True
        self._started = False
        self._rng = np.random.default_rng()

    def reset(self, seed=None):
        self._rng = np.random.default_rng(seed)
        self._reset(self._rng)
        self.steps = 0
        self.done = False
        self._started = True
        return self._observe()

    def step(self, action):
        if not self._started:
            raise ContractError('Call reset() before step()')
        if self.done:
            raise ContractError('The episode is over, call reset() before stepping again')
        action = self._check_action(action)
        reward, terminated = self._step(action)
        self.steps += 1
        state = self._observe()
        if not np.all(np.isfinite(state)):
            raise ContractError('The environment produced a non-finite state')
        self.done = bool(terminated) or self.steps >= self.spec.max_steps
        return StepResult(state, float(reward), self.done, bool(terminated))

    def _check_action(self, action):
        spec = self.spec
        if spec.discrete:
            index = int(action)
            if index != action or not 0 <= index < spec.action_dim:
                raise ContractError('Action {!r} is not one of the {} discrete actions'.format(action, spec.action_dim))
            return index
        action = np.asarray(action, dtype=np.float64).reshape(-1)
        if action.shape != (spec.action_dim,):
            raise ContractError('Expected an action of width {}, got {}'.format(spec.action_dim, action.shape))
        if not np.all(np.isfinite(action)):
            raise ContractError('Actions must be finite')
        return np.clip(action, -spec.max_action, spec.max_action)

    def sample_action(self, rng):
        '''
        Uniformly random admissible action
        '''
        if self.spec.discrete:
            return int(rng.integers(self.spec.action_dim))
        return rng.uniform(-self.spec.max_action, self.spec.max_action, size=self.spec.action_dim)

    def _reset(self, rng):
        raise NotImplementedError

    def _step(self, action):
        raise NotImplementedError

    def _observe(self):
        raise NotImplementedError
