# -*- coding: utf-8 -*-
'''
    test_experiments.py
    ~~~~~~~~~~~~~~~~~~~

    Full budget training runs, only collected with ``--run-experiments``
'''

# Import python libs
from __future__ import absolute_import
import os

# Import 3rd-party libs
import numpy as np
import pytest

# Import spikingrl libs
from spikingrl.envs import collect_dataset, make_env
from spikingrl.harness.checkpoint import load_checkpoint, restore_agent
from spikingrl.harness.cli import main
from spikingrl.harness.config import load_config
from spikingrl.harness.results import compare_scores, max_average_return, read_run
from spikingrl.harness.runner import measure_power, run_training
from spikingrl.utils.log import remove_handlers

pytestmark = pytest.mark.experiment


@pytest.fixture(autouse=True)
def drop_log_handlers():
    yield
    remove_handlers()


def _runs(results):
    return dict((seed, result.records) for seed, result in results.items())


def test_spiking_dqn_solves_the_chain(run_dir):
    config = load_config(overrides={
        'algorithm': 'dqn', 'env': 'chain', 'T': 4, 'hidden_sizes': [32], 'lr': 1e-3,
        'batch_size': 32, 'warmup_steps': 200, 'epsilon_decay_steps': 2000, 'target_update_period': 100,
        'total_steps': 5000, 'eval_every': 500, 'eval_episodes': 10, 'seeds': [0, 1], 'eval_epsilon': 0.0,
    })
    mean, _ = max_average_return(_runs(run_training(config, run_dir)))
    # the greedy policy collects 19 or 20 per episode
    assert mean >= 19.0


def test_ddpg_learns_to_swing_up(run_dir):
    config = load_config(overrides={
        'algorithm': 'ddpg', 'variant': 'ann', 'coder': 'none', 'hidden_sizes': [64, 64], 'lr': 1e-3,
        'warmup_steps': 1000, 'total_steps': 20000, 'eval_every': 2000, 'eval_episodes': 5, 'seeds': [0],
    })
    results = run_training(config, run_dir)
    records = results[0].records
    assert results[0].best_mean > records[0].mean
    assert max_average_return(_runs(results))[0] > -600.0


def test_spiking_ddpg_with_adaptive_coders(run_dir):
    config = load_config(overrides={
        'algorithm': 'ddpg', 'variant': 'spiking', 'coder': 'adaptive', 'T': 4, 'hidden_sizes': [64, 64],
        'lr': 1e-3, 'warmup_steps': 1000, 'total_steps': 20000, 'eval_every': 2000, 'eval_episodes': 5,
        'seeds': [0],
    })
    results = run_training(config, run_dir)
    assert max_average_return(_runs(results))[0] > -800.0


def _cartpole_dqn(**overrides):
    options = {
        'algorithm': 'dqn', 'env': 'cartpole', 'variant': 'spiking', 'coder': 'adaptive', 'T': 4,
        'hidden_sizes': [64, 64], 'lr': 1e-3, 'total_steps': 30000, 'eval_every': 3000, 'eval_episodes': 5,
        'seeds': [0, 1, 2],
    }
    options.update(overrides)
    return load_config(overrides=options)


def test_spiking_dqn_with_adaptive_coders_balances_the_pole(run_dir):
    results = run_training(_cartpole_dqn(), run_dir)
    for result in results.values():
        assert result.best_mean > result.records[0].mean
    assert max_average_return(_runs(results))[0] > 150.0


def test_adaptive_coders_beat_rate_coding(tmp_path):
    scores = {}
    for coder in ('rate', 'adaptive'):
        run_dir = tmp_path / coder
        run_dir.mkdir()
        scores[coder] = max_average_return(_runs(run_training(_cartpole_dqn(coder=coder), str(run_dir))))[0]
    assert scores['adaptive'] > scores['rate']


def test_offline_agents_rank_above_random_behaviour(tmp_path):
    expert_dir = str(tmp_path / 'expert')
    assert main(['train', '--run-dir', expert_dir, '--algorithm', 'ddpg', '--variant', 'ann', '--coder', 'none',
                 '--hidden-sizes', '64', '64', '--warmup-steps', '1000', '--total-steps', '20000',
                 '--eval-every', '2000', '--eval-episodes', '5', '--seeds', '0']) == 0
    dataset = str(tmp_path / 'pendulum.acsf')
    checkpoint = os.path.join(expert_dir, 'checkpoints', 'seed0-best.msgpack')
    assert main(['collect', '--env', 'pendulum', '--size', '50000', '--checkpoint', checkpoint, '--noise', '0.3',
                 '--seed', '1', '--output', dataset]) == 0

    scores = {}
    for algorithm in ('bcq', 'bc'):
        run_dir = str(tmp_path / algorithm)
        argv = ['train', '--run-dir', run_dir, '--algorithm', algorithm, '--dataset', dataset, '--variant', 'ann',
                '--coder', 'none', '--hidden-sizes', '64', '64', '--total-steps', '10000', '--eval-every', '1000',
                '--eval-episodes', '5', '--seeds', '0']
        assert main(argv) == 0
        scores[algorithm] = max_average_return(read_run(run_dir))[0]
    _, random_returns = collect_dataset(make_env('pendulum'), None, 2000, seed=1)
    random_score = float(np.mean(random_returns))

    assert compare_scores(scores['bcq'], scores['bc'])[1] != 'loss'
    assert scores['bc'] > random_score


def test_trained_spiking_critic_is_cheaper_than_a_conventional_one(run_dir):
    config = load_config(overrides={
        'algorithm': 'ddpg', 'variant': 'spiking', 'coder': 'adaptive', 'T': 4, 'hidden_sizes': [64, 64],
        'lr': 1e-3, 'warmup_steps': 1000, 'total_steps': 10000, 'eval_every': 2000, 'eval_episodes': 3,
        'seeds': [0],
    })
    run_training(config, run_dir)
    agent = restore_agent(load_checkpoint(os.path.join(run_dir, 'checkpoints', 'seed0-best.msgpack')))
    measured, conventional = measure_power(agent, make_env('pendulum'), 2, seed=0)['critic']
    assert measured.variant == 'spiking'
    assert measured.per_inference < conventional.per_inference
