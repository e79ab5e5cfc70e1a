# -*- coding: utf-8 -*-
'''
spikingrl.algos
~~~~~~~~~~~~~~~

The learning algorithms, their networks and replay storage
'''

# Import spikingrl libs
from spikingrl.algos.buffer import Batch, ReplayBuffer, Transition  # pylint: disable=unused-import
from spikingrl.algos.common import (  # pylint: disable=unused-import
    Agent, LinearSchedule, Optimizer, epsilon_greedy, soft_update
)
from spikingrl.algos.networks import (  # pylint: disable=unused-import
    BodyConfig, CodedBody, QNetwork, CriticNetwork, ActorNetwork, PerturbationNetwork, VaeNetwork, PolicyNetwork
)
from spikingrl.algos.dqn import DqnAgent, dqn_loss, dqn_target  # pylint: disable=unused-import
from spikingrl.algos.ddpg import (  # pylint: disable=unused-import
    DdpgAgent, ddpg_actor_loss, ddpg_critic_loss, ddpg_losses
)
from spikingrl.algos.bcq import (  # pylint: disable=unused-import
    BcqAgent, BcqNetworks, bcq_act, bcq_losses, bcq_target, gaussian_kl, vae_loss
)
from spikingrl.algos.bc import BcAgent, bc_loss  # pylint: disable=unused-import

AGENTS = {
    'dqn': DqnAgent,
    'ddpg': DdpgAgent,
    'bcq': BcqAgent,
    'bc': BcAgent,
}


def make_agent(env_spec, options, rng):
    return AGENTS[options.algorithm](env_spec, options, rng)
