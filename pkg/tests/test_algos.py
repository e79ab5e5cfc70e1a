# -*- coding: utf-8 -*-
'''
    test_algos.py
    ~~~~~~~~~~~~~

    Test the replay buffer, the networks and the learning algorithms
'''

# Import python libs
from __future__ import absolute_import

# Import 3rd-party libs
import numpy as np
import pytest

# Import spikingrl libs
from spikingrl.algos import (
    ActorNetwork, Batch, BcAgent, BcqAgent, BodyConfig, CodedBody, CriticNetwork, DdpgAgent, DqnAgent,
    LinearSchedule, Optimizer, PerturbationNetwork, QNetwork, ReplayBuffer, VaeNetwork, bc_loss, bcq_act,
    bcq_losses, bcq_target, ddpg_actor_loss, ddpg_losses, dqn_loss, dqn_target, epsilon_greedy, gaussian_kl,
    soft_update
)
from spikingrl.algos.bcq import bcq_perturbation_loss, check_support
from spikingrl.autodiff import Tensor, as_tensor, backward, no_grad, reduce_sum, scale, square, sub
from spikingrl.envs import get_spec
from spikingrl.envs.chain import all_transitions, optimal_q
from spikingrl.exceptions import ContractError, InvariantViolation
from spikingrl.harness.config import load_config

ANN = BodyConfig('ann', 'none')


def _continuous_batch(rng, size=16, state_dim=3, action_dim=1):
    return Batch(
        rng.standard_normal((size, state_dim)),
        rng.uniform(-2.0, 2.0, (size, action_dim)),
        rng.standard_normal(size),
        rng.standard_normal((size, state_dim)),
        (rng.random(size) < 0.1).astype(float),
    )


def _pendulum_options(algorithm, **overrides):
    options = {
        'algorithm': algorithm,
        'env': 'pendulum',
        'hidden_sizes': [16, 16],
        'vae_hidden_sizes': [16, 16],
        'T': 2,
        'lr': 1e-3,
        'dataset': 'unused.acsf',
    }
    options.update(overrides)
    return load_config(overrides=options)


def test_buffer_evicts_oldest():
    buffer = ReplayBuffer(3, state_dim=1, action_dim=1, seed=0)
    for index in range(5):
        buffer.add([index], [0.0], float(index), [index + 1], False)
    assert len(buffer) == 3
    assert np.allclose(buffer.all().rewards, [2.0, 3.0, 4.0])


def test_buffer_sample_shapes():
    buffer = ReplayBuffer(10, state_dim=2, action_dim=3, discrete=True, seed=0)
    with pytest.raises(ContractError):
        buffer.sample(4)
    for index in range(4):
        buffer.add([index, index], index % 3, 1.0, [0, 0], index == 3)
    batch = buffer.sample(8)
    assert batch.states.shape == (8, 2)
    assert batch.actions.shape == (8,)
    assert batch.discrete
    assert batch.size == 8


def test_soft_update(rng):
    source = QNetwork(2, 2, [4], ANN, rng=rng)
    target = QNetwork(2, 2, [4], ANN, rng=np.random.default_rng(5))
    before = target.state_dict()
    soft_update(target, source, 0.0)
    assert all(np.allclose(before[key], value) for key, value in target.state_dict().items())
    soft_update(target, source, 0.5)
    for key, value in target.state_dict().items():
        assert np.allclose(value, 0.5 * (before[key] + source.state_dict()[key]))
    soft_update(target, source, 1.0)
    for key, value in target.state_dict().items():
        assert np.allclose(value, source.state_dict()[key])
    with pytest.raises(ContractError):
        soft_update(target, source, 1.5)
    with pytest.raises(ContractError):
        soft_update(QNetwork(2, 2, [5], ANN, rng=rng), source, 0.1)


def test_epsilon_greedy(rng):
    assert epsilon_greedy([1.0, 3.0, 3.0], 0.0, rng) == 1
    picks = set(epsilon_greedy([1.0, 3.0, 0.0], 1.0, rng) for _ in range(200))
    assert picks == {0, 1, 2}
    with pytest.raises(ContractError):
        epsilon_greedy([], 0.1, rng)
    with pytest.raises(ContractError):
        epsilon_greedy([1.0], 1.1, rng)


def test_linear_schedule():
    schedule = LinearSchedule(1.0, 0.1, 10)
    assert schedule(0) == 1.0
    assert schedule(5) == pytest.approx(0.55)
    assert schedule(50) == pytest.approx(0.1)


@pytest.mark.parametrize('variant,coder', [
    ('ann', 'none'),
    ('ann', 'adaptive'),
    ('spiking', 'adaptive'),
    ('spiking', 'rate'),
    ('spiking', 'accumulate'),
])
def test_coded_body_shapes(rng, variant, coder):
    body = CodedBody([3, 8, 2], BodyConfig(variant, coder, T=3), rng=rng)
    with no_grad():
        out = body(rng.standard_normal((5, 3)))
    assert out.shape == (5, 2)
    assert body.spiking == (variant == 'spiking')
    assert bool(body.coder_parameters()) == (coder == 'adaptive')


@pytest.mark.parametrize('variant,coder', [('spiking', 'none'), ('ann', 'rate'), ('ann', 'accumulate')])
def test_invalid_body_configs(variant, coder):
    with pytest.raises(ContractError):
        BodyConfig(variant, coder)


def test_per_neuron_decoder_body(rng):
    body = CodedBody([3, 8, 2], BodyConfig('spiking', 'adaptive', T=3, per_neuron_decoder=True), rng=rng)
    assert body.decoder.w_d.shape == (3, 2)


@pytest.mark.parametrize('variant,coder', [('ann', 'none'), ('spiking', 'adaptive')])
def test_actor_is_bounded(rng, variant, coder):
    actor = ActorNetwork(3, 1, [8], 2.0, BodyConfig(variant, coder), rng=rng)
    with no_grad():
        actions = actor(rng.standard_normal((20, 3)) * 10.0)
    assert actions.shape == (20, 1)
    assert np.all(np.abs(actions.values) <= 2.0)


def test_critic_output_is_flat(rng):
    critic = CriticNetwork(3, 1, [8], ANN, rng=rng)
    with no_grad():
        assert critic(np.ones((4, 3)), np.ones((4, 1))).shape == (4,)


def test_perturbation_stays_within_phi(rng):
    perturbation = PerturbationNetwork(3, 1, [8], 2.0, 0.05, BodyConfig('spiking', 'adaptive'), rng=rng)
    states = rng.standard_normal((10, 3))
    actions = rng.uniform(-1.0, 1.0, (10, 1))
    with no_grad():
        perturbed = perturbation.perturb(states, actions)
    assert np.all(np.abs(perturbed.values - actions) <= 0.05 + 1e-12)


def test_vae(rng):
    vae = VaeNetwork(3, 1, 2, [16, 16], 2.0, rng=rng)
    states = rng.standard_normal((6, 3))
    with no_grad():
        reconstruction, mean, log_std = vae(states, rng.uniform(-2, 2, (6, 1)), rng=rng)
        sampled = vae.decode(states, rng=rng)
    assert reconstruction.shape == (6, 1)
    assert mean.shape == log_std.shape == (6, 2)
    assert np.all((log_std.values >= -4.0) & (log_std.values <= 15.0))
    assert np.all(np.abs(sampled.values) <= 2.0)


def test_gaussian_kl_of_the_prior_is_zero():
    kl = gaussian_kl(Tensor(np.zeros((3, 2))), Tensor(np.zeros((3, 2))))
    assert np.allclose(kl.values, 0.0)
    kl = gaussian_kl(Tensor(np.ones((1, 2))), Tensor(np.zeros((1, 2))))
    assert np.allclose(kl.values, [1.0])


def test_check_support():
    check_support(np.zeros((2, 1)), np.full((2, 1), 0.05), 0.05)
    with pytest.raises(InvariantViolation):
        check_support(np.zeros((2, 1)), np.full((2, 1), 0.2), 0.05)


def test_dqn_target_masks_terminal_states(rng):
    q = QNetwork(2, 2, [4], ANN, rng=rng)
    batch = Batch(np.eye(2), np.array([0, 1]), np.array([1.0, 2.0]), np.eye(2), np.array([0.0, 1.0]))
    with no_grad():
        best = q(np.eye(2)).values.max(axis=1)
    target = dqn_target(batch, q, 0.9)
    assert target[0] == pytest.approx(1.0 + 0.9 * best[0])
    assert target[1] == pytest.approx(2.0)


def test_dqn_loss_needs_discrete_actions(rng):
    q = QNetwork(3, 2, [4], ANN, rng=rng)
    with pytest.raises(ContractError):
        dqn_loss(_continuous_batch(rng), q, q, 0.9)


def test_dqn_chain_converges_to_optimal_values():
    config = load_config(overrides={
        'algorithm': 'dqn', 'env': 'chain', 'variant': 'ann', 'coder': 'none', 'gamma': 0.5,
        'hidden_sizes': [32], 'lr': 5e-3, 'tau': 1.0, 'target_update_period': 10,
    })
    agent = DqnAgent(get_spec('chain'), config, np.random.default_rng(0))
    batch = Batch.from_transitions(all_transitions(), discrete=True)
    for _ in range(6000):
        agent.update(batch)
    values = np.array([agent.q_values(np.eye(2)[position]) for position in (0, 1)])
    assert np.allclose(values, optimal_q(0.5), atol=1e-2)


def test_dqn_agent_acts_greedily_at_zero_epsilon():
    config = load_config(overrides={'algorithm': 'dqn', 'env': 'chain', 'eval_epsilon': 0.0, 'hidden_sizes': [8]})
    agent = DqnAgent(get_spec('chain'), config, np.random.default_rng(0))
    state = np.array([1.0, 0.0])
    assert agent.act(state) == int(np.argmax(agent.q_values(state)))


def test_ddpg_update(rng):
    config = _pendulum_options('ddpg', variant='spiking', coder='adaptive')
    agent = DdpgAgent(get_spec('pendulum'), config, rng)
    actor_before = agent.actor.state_dict()
    critic_target_before = agent.critic_target.state_dict()
    losses = agent.update(_continuous_batch(rng))
    assert sorted(losses) == ['actor_loss', 'critic_loss']
    assert all(np.isfinite(value) for value in losses.values())
    assert any(not np.allclose(actor_before[key], value) for key, value in agent.actor.state_dict().items())
    critic = agent.critic.state_dict()
    for key, value in agent.critic_target.state_dict().items():
        expected = 0.005 * critic[key] + 0.995 * critic_target_before[key]
        assert np.allclose(value, expected)


def test_ddpg_exploration_stays_in_bounds(rng):
    agent = DdpgAgent(get_spec('pendulum'), _pendulum_options('ddpg', expl_noise=5.0), rng)
    for _ in range(20):
        action = agent.act(np.array([1.0, 0.0, 0.0]), explore=True)
        assert action.shape == (1,)
        assert np.all(np.abs(action) <= 2.0)


def test_bcq_target_without_bootstrap(rng):
    agent = BcqAgent(get_spec('pendulum'), _pendulum_options('bcq'), rng)
    nets = agent.nets
    batch = _continuous_batch(rng)
    target = bcq_target(batch, nets.vae, nets.perturbation_target, nets.critic1_target, nets.critic2_target,
                        0.0, 0.75, 10, rng=rng)
    assert np.allclose(target.values, batch.rewards)
    terminal = batch._replace(dones=np.ones(batch.size))
    target = bcq_target(terminal, nets.vae, nets.perturbation_target, nets.critic1_target, nets.critic2_target,
                        0.99, 0.75, 10, rng=rng)
    assert np.allclose(target.values, batch.rewards)
    with pytest.raises(ContractError):
        bcq_target(batch, nets.vae, nets.perturbation_target, nets.critic1_target, nets.critic2_target,
                   0.99, 0.75, 0, rng=rng)
    with pytest.raises(ContractError):
        bcq_target(batch, nets.vae, nets.perturbation_target, nets.critic1_target, nets.critic2_target,
                   0.99, 1.5, 10, rng=rng)


def test_bcq_target_with_equal_critics_takes_the_best_candidate(rng):
    agent = BcqAgent(get_spec('pendulum'), _pendulum_options('bcq', variant='ann', coder='none'), rng)
    nets = agent.nets
    batch = _continuous_batch(rng, size=4)
    seed = 11
    target = bcq_target(batch, nets.vae, nets.perturbation_target, nets.critic1_target, nets.critic1_target,
                        0.9, 0.3, 5, rng=np.random.default_rng(seed))
    with no_grad():
        next_states = np.repeat(batch.next_states, 5, axis=0)
        sampled = nets.vae.decode(next_states, rng=np.random.default_rng(seed))
        candidates = nets.perturbation_target.perturb(next_states, sampled)
        values = nets.critic1_target(next_states, candidates).values.reshape(4, 5).max(axis=1)
    assert np.allclose(target.values, batch.rewards + 0.9 * (1.0 - batch.dones) * values)


def test_bcq_update_and_act(rng):
    agent = BcqAgent(get_spec('pendulum'), _pendulum_options('bcq', variant='spiking', coder='adaptive'), rng)
    assert agent.nets.perturbation.phi == 2.0
    assert agent.nets.vae.latent_dim == 2
    losses = agent.update(_continuous_batch(rng))
    assert sorted(losses) == ['critic_loss', 'perturbation_loss', 'vae_loss']
    assert all(np.isfinite(value) for value in losses.values())
    action = bcq_act(np.array([1.0, 0.0, 0.5]), agent.nets.vae, agent.nets.perturbation, agent.nets.critic1, 10,
                     rng=rng)
    assert action.shape == (1,)
    assert abs(action[0]) <= 2.0


def test_bc_learns_a_fixed_batch(rng):
    agent = BcAgent(get_spec('pendulum'), _pendulum_options('bc', variant='ann', coder='none'), rng)
    batch = _continuous_batch(rng, size=32)
    batch = batch._replace(actions=np.clip(batch.states[:, :1], -2.0, 2.0))
    with no_grad():
        before = bc_loss(batch, agent.policy).item()
    for _ in range(200):
        agent.update(batch)
    with no_grad():
        after = bc_loss(batch, agent.policy).item()
    assert after < 0.5 * before
    assert abs(agent.act(np.array([10.0, 0.0, 0.0]))[0]) <= 2.0


def test_agent_state_dict_round_trip(rng):
    config = _pendulum_options('ddpg')
    agent = DdpgAgent(get_spec('pendulum'), config, rng)
    other = DdpgAgent(get_spec('pendulum'), config, np.random.default_rng(77))
    other.load_state_dict(agent.state_dict())
    state = np.array([0.5, 0.5, 0.1])
    assert np.allclose(agent.act(state), other.act(state))
    with pytest.raises(ContractError):
        other.load_state_dict({'actor': agent.actor.state_dict()})


def _loss_with(tensor, loss):
    def _loss(values):
        saved = tensor.values
        tensor.values = values
        try:
            with no_grad():
                return loss().item()
        finally:
            tensor.values = saved
    return _loss


def _assert_gradients_match(params, loss):
    for tensor in params:
        expected = pytest.helpers.numerics.numerical_gradient(_loss_with(tensor, loss), tensor.values)
        assert pytest.helpers.numerics.max_relative_error(tensor.grad, expected, floor=1e-6) < 1e-3


class QuadraticCritic(object):
    '''
    Fixed critic ``Q(s, a) = -sum (a - best)^2``
    '''

    def __init__(self, best):
        self.best = best

    def __call__(self, states, actions):  # pylint: disable=unused-argument
        actions = as_tensor(actions)
        gap = sub(actions, Tensor(np.full(actions.shape, self.best)))
        return scale(reduce_sum(square(gap), axis=1), -1.0)


def test_actor_loss_decreases_against_a_fixed_critic(rng):
    actor = ActorNetwork(3, 1, [16, 16], 2.0, ANN, rng=rng)
    optimizer = Optimizer([actor], 1e-2)
    critic = QuadraticCritic(0.5)
    batch = _continuous_batch(rng, size=32)
    losses = []
    for _ in range(200):
        loss = ddpg_actor_loss(batch, critic, actor)
        losses.append(loss.item())
        backward(loss, params=optimizer.params)
        optimizer.step()
    # the loss is the mean squared gap to the best action
    assert losses[-1] < 0.1 * losses[0]
    assert np.mean(losses[-20:]) < np.mean(losses[:20])


def test_ddpg_losses_keep_gradients_apart(rng):
    actor = ActorNetwork(3, 1, [8], 2.0, ANN, rng=rng)
    critic = CriticNetwork(3, 1, [8], ANN, rng=rng)
    actor_target, critic_target = actor.clone(), critic.clone()
    critic_loss, actor_loss = ddpg_losses(_continuous_batch(rng), critic, critic_target, actor, actor_target, 0.99)

    backward(critic_loss, retain_tape=True)
    assert all(param.grad is not None for param in critic.parameters())
    assert all(param.grad is None for param in actor.parameters())
    critic.zero_grad()

    backward(actor_loss, params=actor.parameters())
    assert all(param.grad is not None for param in actor.parameters())
    assert all(param.grad is None for param in critic.parameters())
    for target in (actor_target, critic_target):
        assert all(param.grad is None for param in target.parameters())


def test_bcq_losses_keep_gradients_apart(rng):
    agent = BcqAgent(get_spec('pendulum'), _pendulum_options('bcq', variant='ann', coder='none'), rng)
    nets = agent.nets
    generator_loss, critic_loss, perturbation_loss = bcq_losses(_continuous_batch(rng), nets, 0.99, 0.75, 10, rng=rng)

    backward(generator_loss, retain_tape=True)
    assert all(param.grad is not None for param in nets.vae.parameters())
    for net in (nets.critic1, nets.critic2, nets.perturbation):
        assert all(param.grad is None for param in net.parameters())
    nets.vae.zero_grad()

    backward(critic_loss, retain_tape=True)
    for net in (nets.critic1, nets.critic2):
        assert all(param.grad is not None for param in net.parameters())
        net.zero_grad()
    assert all(param.grad is None for param in nets.vae.parameters())

    backward(perturbation_loss, params=nets.perturbation.parameters())
    assert all(param.grad is not None for param in nets.perturbation.parameters())
    for net in (nets.vae, nets.critic1, nets.critic2, nets.perturbation_target, nets.critic1_target,
                nets.critic2_target):
        assert all(param.grad is None for param in net.parameters())


def test_perturbation_loss_gradient_matches_numerical(rng):
    agent = BcqAgent(get_spec('pendulum'), _pendulum_options('bcq', variant='ann', coder='none'), rng)
    nets = agent.nets
    batch = _continuous_batch(rng, size=8)

    def loss():
        return bcq_perturbation_loss(batch, nets.vae, nets.perturbation, nets.critic1, rng=np.random.default_rng(3))

    backward(loss(), params=nets.perturbation.parameters())
    _assert_gradients_match(nets.perturbation.parameters(), loss)


def test_bc_loss_gradient_matches_numerical(rng):
    agent = BcAgent(get_spec('pendulum'), _pendulum_options('bc', variant='ann', coder='none'), rng)
    batch = _continuous_batch(rng, size=8)

    def loss():
        return bc_loss(batch, agent.policy)

    backward(loss())
    _assert_gradients_match(agent.policy.parameters(), loss)


def test_full_exploration_is_uniform(rng):
    draws = 8000
    counts = np.bincount([epsilon_greedy([0.0, 5.0, 1.0, 2.0], 1.0, rng) for _ in range(draws)], minlength=4)
    expected = draws / 4.0
    chi_square = float(np.sum((counts - expected) ** 2 / expected))
    # 99.9% quantile with 3 degrees of freedom
    assert chi_square < 16.27


def test_optimizer_keeps_coder_weights_in_their_own_group(rng):
    body = CodedBody([3, 8, 2], BodyConfig('spiking', 'adaptive', T=4), rng=rng)
    optimizer = Optimizer([body], 1e-3, coder_lr=1e-2)
    (body_params, body_state), (coder_params, coder_state) = optimizer.groups
    assert [id(param) for param in coder_params] == [id(param) for param in body.coder_parameters()]
    assert [id(param) for param in body_params] == [id(param) for param in body.net.parameters()]
    assert (body_state.lr, coder_state.lr) == (1e-3, 1e-2)
