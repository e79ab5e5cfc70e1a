# -*- coding: utf-8 -*-
'''
spikingrl.envs.registry
~~~~~~~~~~~~~~~~~~~~~~~

Environments by id
'''

# Import python libs
from __future__ import absolute_import

# Import spikingrl libs
from spikingrl.envs.cartpole import CartPole
from spikingrl.envs.chain import Chain
from spikingrl.envs.pendulum import Pendulum

ENVIRONMENTS = {
    CartPole.spec.env_id: CartPole,
    Pendulum.spec.env_id: Pendulum,
    Chain.spec.env_id: Chain,
}


def get_spec(env_id):
    return ENVIRONMENTS[env_id].spec


def make_env(env_id):
    return ENVIRONMENTS[env_id]()
