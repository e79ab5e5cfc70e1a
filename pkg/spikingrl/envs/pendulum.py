# -*- coding: utf-8 -*-
'''
spikingrl.envs.pendulum
~~~~~~~~~~~~~~~~~~~~~~~

Torque-limited pendulum swing-up.

The observation is ``(cos theta, sin theta, theta_dot)`` with ``theta = 0`` upright. The
reward is ``-(theta^2 + 0.1 * theta_dot^2 + 0.001 * u^2)`` with ``theta`` wrapped into
``[-pi, pi)``; episodes never terminate and are cut after 200 steps.
'''

# Import python libs
from __future__ import absolute_import
import math

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.envs.base import Env, EnvSpec

MAX_SPEED = 8.0
MAX_TORQUE = 2.0
DT = 0.05
GRAVITY = 10.0
MASS = 1.0
LENGTH = 1.0


def angle_normalize(theta):
    return ((theta + math.pi) % (2 * math.pi)) - math.pi


class Pendulum(Env):
    spec = EnvSpec('pendulum', state_dim=3, action_dim=1, discrete=False, max_action=MAX_TORQUE, max_steps=200)

    def __init__(self):
        super(Pendulum, self).__init__()
        self.theta = 0.0
        self.theta_dot = 0.0
        self._initial = None

    def reset(self, seed=None, initial_state=None):
        '''
        Start an episode; ``initial_state=(theta, theta_dot)`` overrides the random start
        '''
        self._initial = initial_state
        return super(Pendulum, self).reset(seed)

    def _reset(self, rng):
        if self._initial is not None:
            self.theta, self.theta_dot = float(self._initial[0]), float(self._initial[1])
        else:
            self.theta = rng.uniform(-math.pi, math.pi)
            self.theta_dot = rng.uniform(-1.0, 1.0)

    def _step(self, action):
        torque = float(np.clip(action[0], -MAX_TORQUE, MAX_TORQUE))
        theta, theta_dot = self.theta, self.theta_dot
        cost = angle_normalize(theta) ** 2 + 0.1 * theta_dot ** 2 + 0.001 * torque ** 2
        theta_dot = theta_dot + (3 * GRAVITY / (2 * LENGTH) * math.sin(theta) + 3.0 / (MASS * LENGTH ** 2) * torque) * DT
        theta_dot = min(max(theta_dot, -MAX_SPEED), MAX_SPEED)
        self.theta = theta + theta_dot * DT
        self.theta_dot = theta_dot
        return -cost, False

    def _observe(self):
        return np.array([math.cos(self.theta), math.sin(self.theta), self.theta_dot])
