# -*- coding: utf-8 -*-
'''
    test_envs.py
    ~~~~~~~~~~~~

    Test the control tasks
'''

# Import python libs
from __future__ import absolute_import
import math

# Import 3rd-party libs
import numpy as np
import pytest

# Import spikingrl libs
from spikingrl.envs import ENVIRONMENTS, get_spec, make_env
from spikingrl.envs.chain import all_transitions, optimal_q
from spikingrl.envs.pendulum import angle_normalize
from spikingrl.exceptions import ContractError


def test_registry():
    assert sorted(ENVIRONMENTS) == ['cartpole', 'chain', 'pendulum']
    spec = get_spec('pendulum')
    assert (spec.state_dim, spec.action_dim, spec.discrete, spec.max_action) == (3, 1, False, 2.0)
    assert get_spec('cartpole').discrete


@pytest.mark.parametrize('env_id', ['cartpole', 'pendulum', 'chain'])
def test_reset_is_seeded(env_id):
    first = make_env(env_id).reset(seed=42)
    second = make_env(env_id).reset(seed=42)
    assert np.array_equal(first, second)
    assert first.shape == (get_spec(env_id).state_dim,)


@pytest.mark.parametrize('env_id', ['cartpole', 'pendulum', 'chain'])
def test_step_needs_reset(env_id):
    env = make_env(env_id)
    with pytest.raises(ContractError):
        env.step(env.sample_action(np.random.default_rng(0)))


def test_cartpole_terminates_and_refuses_more_steps():
    env = make_env('cartpole')
    env.reset(seed=0)
    result = None
    for _ in range(500):
        result = env.step(1)
        assert result.reward == 1.0
        if result.done:
            break
    assert result.terminated
    assert not result.truncated
    with pytest.raises(ContractError):
        env.step(1)


def test_cartpole_rejects_unknown_actions():
    env = make_env('cartpole')
    env.reset(seed=0)
    with pytest.raises(ContractError):
        env.step(2)


def test_pendulum_rewards():
    env = make_env('pendulum')
    env.reset(initial_state=(0.0, 0.0))
    assert env.step(np.array([0.0])).reward == pytest.approx(0.0)
    env.reset(initial_state=(math.pi, 0.0))
    assert env.step(np.array([0.0])).reward == pytest.approx(-math.pi ** 2)


def test_pendulum_clips_torque():
    clipped = make_env('pendulum')
    bounded = make_env('pendulum')
    clipped.reset(initial_state=(1.0, 0.0))
    bounded.reset(initial_state=(1.0, 0.0))
    assert np.allclose(clipped.step(np.array([50.0])).state, bounded.step(np.array([2.0])).state)


def test_pendulum_truncates_after_200_steps():
    env = make_env('pendulum')
    env.reset(seed=1)
    steps = 0
    result = None
    while result is None or not result.done:
        result = env.step(np.array([0.0]))
        steps += 1
    assert steps == 200
    assert result.truncated


def test_angle_normalize():
    assert angle_normalize(1.5 * math.pi) == pytest.approx(-0.5 * math.pi)
    assert angle_normalize(0.25) == pytest.approx(0.25)


def test_chain_optimal_values_satisfy_bellman():
    gamma = 0.9
    q = optimal_q(gamma)
    for transition in all_transitions():
        state = int(np.argmax(transition.state))
        next_state = int(np.argmax(transition.next_state))
        assert q[state, transition.action] == pytest.approx(transition.reward + gamma * q[next_state].max())


def test_chain_steps():
    env = make_env('chain')
    state = env.reset(seed=3)
    position = int(np.argmax(state))
    result = env.step(1)
    assert int(np.argmax(result.state)) == 1 - position
    assert result.reward == 0.0
