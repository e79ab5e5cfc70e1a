# -*- coding: utf-8 -*-
'''
spikingrl.algos.bcq
~~~~~~~~~~~~~~~~~~~

Batch-constrained Q-learning.

A conditional VAE models the actions present in the dataset. Candidate actions are VAE
samples nudged by a bounded perturbation network, so every action the agent evaluates or
emits stays within ``phi`` of an action the VAE considers in-distribution. Two critics
are trained against a target mixing their minimum and maximum.
'''

# Import python libs
from __future__ import absolute_import
import logging
from collections import OrderedDict, namedtuple

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.algos.common import Agent, Optimizer, soft_update
from spikingrl.algos.networks import (
    BodyConfig, CriticNetwork, PerturbationNetwork, VaeNetwork
)
from spikingrl.autodiff import (
    Tensor, add, backward, exp, no_grad, reduce_mean, reduce_sum, scale, square, sub
)
from spikingrl.exceptions import ContractError, InvariantViolation

log = logging.getLogger(__name__)

SUPPORT_TOLERANCE = 1e-9


class BcqNetworks(namedtuple('BcqNetworks', ('vae', 'perturbation', 'perturbation_target',
                                             'critic1', 'critic2', 'critic1_target', 'critic2_target'))):
    __slots__ = ()


def _check_batch(batch):
    if batch.size == 0:
        raise ContractError('The loss needs a non-empty batch')
    if batch.discrete:
        raise ContractError('BCQ needs continuous actions')


def _check_sampling(lam, n_samples):
    if n_samples < 1:
        raise ContractError('At least one candidate action is needed, got n_samples={}'.format(n_samples))
    if not 0.0 <= lam <= 1.0:
        raise ContractError('lambda must lie in [0, 1], got {}'.format(lam))


def check_support(sampled, perturbed, phi):
    '''
    Raise unless every perturbed action lies within ``phi`` of the VAE sample it came from
    '''
    distance = np.max(np.abs(np.asarray(perturbed) - np.asarray(sampled))) if np.size(sampled) else 0.0
    if distance > phi + SUPPORT_TOLERANCE:
        raise InvariantViolation(
            'A candidate action moved {} away from its VAE sample, the perturbation range is {}'.format(distance, phi)
        )


def gaussian_kl(mean, log_std):
    '''
    Per-sample ``KL(N(mean, exp(log_std)) || N(0, 1))`` summed over the latent, shaped (batch,)
    '''
    variance = exp(scale(log_std, 2.0))
    if np.any(variance.values <= 0):
        raise InvariantViolation('The posterior standard deviation must be positive')
    terms = sub(add(square(mean), variance), add(scale(log_std, 2.0), Tensor(np.ones(log_std.shape))))
    return scale(reduce_sum(terms, axis=1), 0.5)


def vae_loss(batch, vae, rng=None):
    '''
    Reconstruction error summed over the action plus the Gaussian KL, averaged over the batch
    '''
    _check_batch(batch)
    reconstruction, mean, log_std = vae(batch.states, batch.actions, rng=rng)
    recon = reduce_sum(square(sub(reconstruction, Tensor(batch.actions))), axis=1)
    return reduce_mean(add(recon, gaussian_kl(mean, log_std)))


def _mixed_values(states, actions, critic_a, critic_b, lam):
    q_a = critic_a(states, actions).values
    q_b = critic_b(states, actions).values
    low, high = np.minimum(q_a, q_b), np.maximum(q_a, q_b)
    # lam * low + (1 - lam) * high, exact when both critics agree
    return low + (1.0 - lam) * (high - low)


def bcq_target(batch, vae, perturb_target, critic1_target, critic2_target, gamma, lam, n_samples, rng=None):
    '''
    ``y = r + gamma * (1 - done) * max_i [lam * min(Q1, Q2) + (1 - lam) * max(Q1, Q2)](s', a_i)``

    over ``n_samples`` perturbed VAE samples ``a_i`` per next state. Nothing is recorded.
    '''
    _check_sampling(lam, n_samples)
    rng = rng if rng is not None else np.random.default_rng()
    size = batch.size
    with no_grad():
        next_states = np.repeat(batch.next_states, n_samples, axis=0)
        sampled = vae.decode(next_states, rng=rng)
        perturbed = perturb_target.perturb(next_states, sampled)
        check_support(sampled.values, perturbed.values, perturb_target.phi)
        mixed = _mixed_values(next_states, perturbed, critic1_target, critic2_target, lam)
    best = mixed.reshape(size, n_samples).max(axis=1)
    return Tensor(batch.rewards + gamma * (1.0 - batch.dones) * best)


def bcq_critic_loss(batch, critic1, critic2, target):
    q1 = critic1(batch.states, batch.actions)
    q2 = critic2(batch.states, batch.actions)
    return add(scale(reduce_mean(square(sub(target, q1))), 0.5), scale(reduce_mean(square(sub(target, q2))), 0.5))


def bcq_perturbation_loss(batch, vae, perturbation, critic1, rng=None):
    '''
    ``-mean Q1(s, a + xi(s, a))`` over VAE samples ``a``; backpropagate into xi only
    '''
    rng = rng if rng is not None else np.random.default_rng()
    with no_grad():
        sampled = vae.decode(batch.states, rng=rng)
    perturbed = perturbation.perturb(batch.states, sampled)
    check_support(sampled.values, perturbed.values, perturbation.phi)
    return scale(reduce_mean(critic1(batch.states, perturbed)), -1.0)


def bcq_losses(batch, nets, gamma, lam, n_samples, rng=None):
    '''
    Return ``(vae_loss, critic_loss, perturbation_loss)`` recorded on the same tape.

    Differentiate each with ``retain_tape=True`` except the last one.
    '''
    _check_batch(batch)
    _check_sampling(lam, n_samples)
    rng = rng if rng is not None else np.random.default_rng()
    generator_loss = vae_loss(batch, nets.vae, rng=rng)
    target = bcq_target(batch, nets.vae, nets.perturbation_target, nets.critic1_target, nets.critic2_target,
                        gamma, lam, n_samples, rng=rng)
    critic_loss = bcq_critic_loss(batch, nets.critic1, nets.critic2, target)
    perturbation_loss = bcq_perturbation_loss(batch, nets.vae, nets.perturbation, nets.critic1, rng=rng)
    return generator_loss, critic_loss, perturbation_loss


def bcq_act(state, vae, perturbation, critic1, n_samples, rng=None):
    '''
    Pick, among ``n_samples`` perturbed VAE samples for ``state``, the one ``critic1`` rates highest
    '''
    if n_samples < 1:
        raise ContractError('At least one candidate action is needed, got n_samples={}'.format(n_samples))
    rng = rng if rng is not None else np.random.default_rng()
    states = np.repeat(np.atleast_2d(np.asarray(state, dtype=np.float64)), n_samples, axis=0)
    with no_grad():
        sampled = vae.decode(states, rng=rng)
        candidates = perturbation.perturb(states, sampled)
        check_support(sampled.values, candidates.values, perturbation.phi)
        values = critic1(states, candidates).values
    return candidates.values[int(np.argmax(values))]


class BcqAgent(Agent):
    '''
    Offline agent trained only on dataset batches
    '''
    name = 'bcq'
    offline = True

    def __init__(self, env_spec, options, rng):
        super(BcqAgent, self).__init__(env_spec, options, rng)
        if env_spec.discrete:
            raise ContractError('BCQ needs a continuous action space, {} is discrete'.format(env_spec.env_id))
        config = BodyConfig.from_options(options)
        state_dim, action_dim = env_spec.state_dim, env_spec.action_dim
        max_action = env_spec.max_action
        phi = options.phi if options.phi is not None else max_action
        latent_dim = options.latent_dim if options.latent_dim is not None else 2 * action_dim
        hidden = options.hidden_sizes
        vae = VaeNetwork(state_dim, action_dim, latent_dim, options.vae_hidden_sizes, max_action, rng=rng)
        perturbation = PerturbationNetwork(state_dim, action_dim, hidden, max_action, phi, config, rng=rng)
        critic1 = CriticNetwork(state_dim, action_dim, hidden, config, rng=rng)
        critic2 = CriticNetwork(state_dim, action_dim, hidden, config, rng=rng)
        self.nets = BcqNetworks(vae, perturbation, perturbation.clone(), critic1, critic2,
                                critic1.clone(), critic2.clone())
        self.vae_optimizer = Optimizer([vae], options.lr)
        self.critic_optimizer = Optimizer([critic1, critic2], options.lr, options.coder_lr)
        self.perturbation_optimizer = Optimizer([perturbation], options.lr, options.coder_lr)

    def modules(self):
        return OrderedDict(self.nets._asdict())

    def power_modules(self):
        return OrderedDict([('perturbation', self.nets.perturbation.body), ('critic1', self.nets.critic1.body)])

    def act(self, state, explore=False, rng=None):
        rng = rng if rng is not None else self.rng
        return bcq_act(state, self.nets.vae, self.nets.perturbation, self.nets.critic1, self.options.n_samples, rng)

    def update(self, batch):
        nets, options = self.nets, self.options
        generator_loss = vae_loss(batch, nets.vae, rng=self.rng)
        backward(generator_loss)
        self.vae_optimizer.step()

        target = bcq_target(batch, nets.vae, nets.perturbation_target, nets.critic1_target, nets.critic2_target,
                            options.gamma, options.lam, options.n_samples, rng=self.rng)
        critic_loss = bcq_critic_loss(batch, nets.critic1, nets.critic2, target)
        backward(critic_loss)
        self.critic_optimizer.step()

        perturbation_loss = bcq_perturbation_loss(batch, nets.vae, nets.perturbation, nets.critic1, rng=self.rng)
        backward(perturbation_loss, params=self.perturbation_optimizer.params)
        self.perturbation_optimizer.step()

        soft_update(nets.critic1_target, nets.critic1, options.tau)
        soft_update(nets.critic2_target, nets.critic2, options.tau)
        soft_update(nets.perturbation_target, nets.perturbation, options.tau)
        self.updates += 1
        return {
            'vae_loss': generator_loss.item(),
            'critic_loss': critic_loss.item(),
            'perturbation_loss': perturbation_loss.item(),
        }

    def probe(self, states):
        states = np.atleast_2d(states)
        with no_grad():
            sampled = self.nets.vae.decode(states, rng=self.rng)
            actions = self.nets.perturbation.perturb(states, sampled)
            self.nets.critic1(states, actions)
