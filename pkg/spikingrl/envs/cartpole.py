# -*- coding: utf-8 -*-
'''
spikingrl.envs.cartpole
~~~~~~~~~~~~~~~~~~~~~~~

Cart-pole balancing with Euler integration.

The state is ``(x, x_dot, theta, theta_dot)``. Action 0 pushes the cart left, action 1
right. Every step earns +1, the episode terminates when the pole leans beyond 12 degrees
or the cart leaves ``[-2.4, 2.4]``, and is cut after 500 steps.
'''

# Import python libs
from __future__ import absolute_import
import math

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.envs.base import Env, EnvSpec

GRAVITY = 9.8
CART_MASS = 1.0
POLE_MASS = 0.1
TOTAL_MASS = CART_MASS + POLE_MASS
HALF_POLE_LENGTH = 0.5
POLE_MASS_LENGTH = POLE_MASS * HALF_POLE_LENGTH
FORCE = 10.0
DT = 0.02
THETA_LIMIT = 12 * 2 * math.pi / 360
X_LIMIT = 2.4
RESET_BOUND = 0.05


class CartPole(Env):
    spec = EnvSpec('cartpole', state_dim=4, action_dim=2, discrete=True, max_steps=500)

    def __init__(self):
        super(CartPole, self).__init__()
        self.state = np.zeros(4)

    def _reset(self, rng):
        self.state = rng.uniform(-RESET_BOUND, RESET_BOUND, size=4)

    def _step(self, action):
        x, x_dot, theta, theta_dot = self.state
        force = FORCE if action == 1 else -FORCE
        cos_theta, sin_theta = math.cos(theta), math.sin(theta)
        temp = (force + POLE_MASS_LENGTH * theta_dot ** 2 * sin_theta) / TOTAL_MASS
        theta_acc = (GRAVITY * sin_theta - cos_theta * temp) / (
            HALF_POLE_LENGTH * (4.0 / 3.0 - POLE_MASS * cos_theta ** 2 / TOTAL_MASS)
        )
        x_acc = temp - POLE_MASS_LENGTH * theta_acc * cos_theta / TOTAL_MASS
        x = x + DT * x_dot
        x_dot = x_dot + DT * x_acc
        theta = theta + DT * theta_dot
        theta_dot = theta_dot + DT * theta_acc
        self.state = np.array([x, x_dot, theta, theta_dot])
        terminated = abs(x) > X_LIMIT or abs(theta) > THETA_LIMIT
        return 1.0, terminated

    def _observe(self):
        return self.state.copy()
