# -*- coding: utf-8 -*-
'''
spikingrl.harness.runner
~~~~~~~~~~~~~~~~~~~~~~~~

Training and evaluation loops.

Every seed trains in its own process when more than one worker is available. Worker log
records travel back to the parent's log server and are prefixed with ``[seed N]``.
Each seed draws its random streams from ``SeedSequence(seed)``, so results only depend on
the configuration and the seed, not on scheduling.
'''
# pylint: disable=too-many-locals

# Import python libs
from __future__ import absolute_import
import os
import time
import logging
import multiprocessing
from collections import OrderedDict, namedtuple
from contextlib import ExitStack
from concurrent.futures import ProcessPoolExecutor
from operator import itemgetter

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.algos import ReplayBuffer, make_agent
from spikingrl.envs import make_env, read_dataset
from spikingrl.exceptions import ContractError, InvariantViolation
from spikingrl.harness.checkpoint import save_checkpoint
from spikingrl.harness.config import RunConfig
from spikingrl.harness.results import EvalRecord, seed_csv_path, write_eval_csv
from spikingrl.power import body_report, synops_ann
from spikingrl.utils import get_unused_localhost_port, pool_size, process_stats, set_proc_title
from spikingrl.utils.log import level_from_name
from spikingrl.utils.log_handler import setup_handler
from spikingrl.utils.log_server_tornado import log_server_tornado

log = logging.getLogger(__name__)

EVAL_STREAM = 7919
EPISODE_STREAM = 104729


class SeedResult(namedtuple('SeedResult', ('seed', 'records', 'best_step', 'best_mean', 'wall_clock'))):
    __slots__ = ()

    seed = property(itemgetter(0))
    records = property(itemgetter(1))
    best_step = property(itemgetter(2), doc='Step of the best evaluation, ``None`` without evaluations')
    best_mean = property(itemgetter(3))
    wall_clock = property(itemgetter(4))


def eval_seeds(seed, episodes):
    '''
    Reset seeds of the evaluation episodes, a stream separate from training
    '''
    sequence = np.random.SeedSequence([int(seed), EVAL_STREAM])
    return [int(value) for value in sequence.generate_state(episodes)]


def evaluate(agent, env, episodes, seed):
    '''
    Undiscounted returns of ``episodes`` evaluation episodes without exploration
    '''
    returns = []
    for episode, episode_seed in enumerate(eval_seeds(seed, episodes)):
        rng = np.random.default_rng([int(seed), EVAL_STREAM, episode])
        state = env.reset(seed=episode_seed)
        total = 0.0
        done = False
        while not done:
            result = env.step(agent.act(state, explore=False, rng=rng))
            total += result.reward
            state = result.state
            done = result.done
        returns.append(total)
    return returns


def checkpoint_dir(run_dir):
    path = os.path.join(run_dir, 'checkpoints')
    if not os.path.isdir(path):
        os.makedirs(path)
    return path


def checkpoint_path(run_dir, seed, kind):
    return os.path.join(checkpoint_dir(run_dir), 'seed{}-{}.msgpack'.format(seed, kind))


def evaluation_steps(total_steps, eval_every):
    '''
    Steps at which a run evaluates: every ``eval_every`` steps and at the final step
    '''
    steps = list(range(eval_every, total_steps + 1, eval_every))
    if total_steps > 0 and (not steps or steps[-1] != total_steps):
        steps.append(total_steps)
    return steps


class SeedTrainer(object):
    '''
    Trains one agent on one seed and records its evaluations
    '''

    def __init__(self, config, seed, run_dir):
        self.config = config
        self.seed = int(seed)
        self.run_dir = run_dir
        agent_sequence, buffer_sequence = np.random.SeedSequence(self.seed).spawn(2)
        self.env = make_env(config.env)
        self.eval_env = make_env(config.env)
        self.spec = self.env.spec
        self.agent = make_agent(self.spec, config, np.random.default_rng(agent_sequence))
        self.buffer_seed = buffer_sequence
        self.records = []
        self.best = None
        self.started = None

    def _evaluate(self, step):
        returns = evaluate(self.agent, self.eval_env, self.config.eval_episodes, self.seed)
        record = EvalRecord.from_returns(step, self.seed, returns, wall_clock=time.time() - self.started)
        self.records.append(record)
        log.info('Step %d: average return %.3f +/- %.3f', step, record.mean, record.std)
        if self.best is None or record.mean > self.best.mean:
            self.best = record
            save_checkpoint(checkpoint_path(self.run_dir, self.seed, 'best'), self.agent, self.config, step,
                            self.seed, record.mean)
        return record

    def _online_buffer(self):
        return ReplayBuffer(self.config.buffer_size, self.spec.state_dim, self.spec.action_dim,
                            discrete=self.spec.discrete, seed=self.buffer_seed)

    def _offline_buffer(self):
        dataset = read_dataset(self.config.dataset)
        if dataset.env_id != self.config.env:
            raise ContractError('Dataset {} was collected on {}, not {}'.format(
                self.config.dataset, dataset.env_id, self.config.env))
        log.info('Loaded %d transitions from %s', len(dataset), self.config.dataset)
        return ReplayBuffer.from_dataset(dataset, seed=self.buffer_seed)

    def train_online(self):
        config, agent = self.config, self.agent
        buffer = self._online_buffer()
        evaluate_at = set(evaluation_steps(config.total_steps, config.eval_every))
        episode = 0
        state = self.env.reset(seed=self.seed * EPISODE_STREAM + episode)
        for step in range(1, config.total_steps + 1):
            if not self.spec.discrete and step <= config.warmup_steps:
                action = self.env.sample_action(agent.rng)
            else:
                action = agent.act(state, explore=True)
            result = self.env.step(action)
            buffer.add(state, action, result.reward, result.state, result.terminated)
            state = result.state
            if result.done:
                episode += 1
                state = self.env.reset(seed=self.seed * EPISODE_STREAM + episode)
            if len(buffer) >= max(config.warmup_steps, config.batch_size):
                losses = agent.update(buffer.sample(config.batch_size))
                if log.isEnabledFor(logging.DEBUG) and step % config.eval_every == 0:
                    log.debug('Step %d losses: %s', step, losses)
            if step in evaluate_at:
                self._evaluate(step)

    def train_offline(self):
        config, agent = self.config, self.agent
        buffer = self._offline_buffer()
        evaluate_at = set(evaluation_steps(config.total_steps, config.eval_every))
        for step in range(1, config.total_steps + 1):
            losses = agent.update(buffer.sample(config.batch_size))
            if log.isEnabledFor(logging.DEBUG) and step % config.eval_every == 0:
                log.debug('Step %d losses: %s', step, losses)
            if step in evaluate_at:
                self._evaluate(step)

    def run(self):
        self.started = time.time()
        log.info('Training %s (%s, %s coder) on %s with seed %d for %d steps',
                 self.config.algorithm, self.config.variant, self.config.coder, self.config.env,
                 self.seed, self.config.total_steps)
        if self.config.offline:
            self.train_offline()
        else:
            self.train_online()
        save_checkpoint(checkpoint_path(self.run_dir, self.seed, 'final'), self.agent, self.config,
                        self.config.total_steps, self.seed, self.records[-1].mean if self.records else None)
        write_eval_csv(seed_csv_path(self.run_dir, self.seed), self.records, self.config.eval_episodes)
        wall_clock = time.time() - self.started
        log.info('Seed %d finished in %.1fs: %s', self.seed, wall_clock, process_stats().describe())
        return SeedResult(
            self.seed, self.records,
            self.best.step if self.best is not None else None,
            self.best.mean if self.best is not None else None,
            wall_clock,
        )


def train_seed(config, seed, run_dir):
    return SeedTrainer(config, seed, run_dir).run()


def _seed_worker(options, seed, run_dir, log_port):
    set_proc_title('spiking-rl seed {}'.format(seed))
    handler = None
    if log_port is not None:
        handler = setup_handler(log_port, 'seed {}'.format(seed), level_from_name(options['log_level']))
    try:
        return train_seed(RunConfig(options), seed, run_dir)
    finally:
        if handler is not None:
            logging.getLogger().removeHandler(handler)
            handler.close()


def run_training(config, run_dir):
    '''
    Train every configured seed and return their results ordered by seed
    '''
    checkpoint_dir(run_dir)
    seeds = list(config.seeds)
    workers = pool_size(len(seeds), config.workers)
    log.info('Running %d seeds on %d worker(s), results in %s', len(seeds), workers, run_dir)
    if workers == 1:
        results = [train_seed(config, seed, run_dir) for seed in seeds]
    else:
        port = get_unused_localhost_port()
        options = dict(config.as_dict())
        with log_server_tornado(port):
            context = multiprocessing.get_context('spawn')
            with ProcessPoolExecutor(max_workers=workers, mp_context=context) as executor:
                futures = [executor.submit(_seed_worker, options, seed, run_dir, port) for seed in seeds]
                results = [future.result() for future in futures]
    log.info('All seeds finished: %s', process_stats().describe())
    return OrderedDict((result.seed, result) for result in results)


def visited_states(agent, env, episodes, seed):
    '''
    States met by the greedy policy over ``episodes`` evaluation episodes
    '''
    states = []
    for episode, episode_seed in enumerate(eval_seeds(seed, episodes)):
        rng = np.random.default_rng([int(seed), EVAL_STREAM, episode])
        state = env.reset(seed=episode_seed)
        done = False
        while not done:
            states.append(state)
            result = env.step(agent.act(state, explore=False, rng=rng))
            state = result.state
            done = result.done
    return np.asarray(states, dtype=np.float64)


def measure_power(agent, env, episodes, seed):
    '''
    SynOps of every power-counted network of ``agent`` over the states of ``episodes``
    evaluation episodes.

    Returns ``name -> (measured, conventional)`` where ``conventional`` is the static count of
    a conventional network of the same widths. A spiking network paying more than ``T``
    times that count breaks its binary spike bound.
    '''
    states = visited_states(agent, env, episodes, seed)
    inferences = len(states)
    bodies = agent.power_modules()
    with ExitStack() as stack:
        for body in bodies.values():
            if body.spiking:
                stack.enter_context(body.net.recording())
        agent.probe(states)
    reports = OrderedDict()
    for name, body in bodies.items():
        conventional = synops_ann(body.sizes)
        measured = body_report(body, inferences)
        if body.spiking and measured.per_inference > measured.T * conventional.per_inference:
            raise InvariantViolation('{}: {} SynOps per inference exceed {} x {}'.format(
                name, measured.per_inference, measured.T, conventional.per_inference))
        log.info('%s: %.1f SynOps per inference (conventional %.1f)', name, measured.per_inference,
                 conventional.per_inference)
        reports[name] = (measured, conventional)
    return reports
