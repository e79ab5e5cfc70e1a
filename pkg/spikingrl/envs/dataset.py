# -*- coding: utf-8 -*-
'''
spikingrl.envs.dataset
~~~~~~~~~~~~~~~~~~~~~~

Offline datasets: collection with a behaviour policy and the on-disk format.

A dataset file is little-endian::

    magic       4 bytes   b'ACSF'
    version     u32
    env id      u32 byte length, then utf-8 bytes
    D_s         u32
    D_a         u32
    count       u64
    seed        u64
    policy hash 32 bytes

followed by ``count`` records of ``state (D_s x f64), action (D_a x f64, or one u32 index
for discrete environments), reward (f64), next state (D_s x f64), done (u8)``.
'''

# Import python libs
from __future__ import absolute_import
import io
import os
import struct
import logging

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.envs.registry import get_spec
from spikingrl.exceptions import ContractError, DatasetError

log = logging.getLogger(__name__)

MAGIC = b'ACSF'
VERSION = 1
HASH_SIZE = 32
NO_POLICY_HASH = b'\x00' * HASH_SIZE


def record_dtype(state_dim, action_dim, discrete):
    action = ('action', '<u4') if discrete else ('action', '<f8', (action_dim,))
    return np.dtype([
        ('state', '<f8', (state_dim,)),
        action,
        ('reward', '<f8'),
        ('next_state', '<f8', (state_dim,)),
        ('done', 'u1'),
    ])


class Dataset(object):
    '''
    Transitions of a behaviour policy together with their provenance
    '''

    def __init__(self, env_id, state_dim, action_dim, discrete, records, seed=0, policy_hash=NO_POLICY_HASH):
        if len(policy_hash) != HASH_SIZE:
            raise ContractError('The policy hash must be {} bytes'.format(HASH_SIZE))
        self.env_id = env_id
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.discrete = bool(discrete)
        self.records = np.asarray(records, dtype=record_dtype(state_dim, action_dim, discrete))
        self.seed = int(seed)
        self.policy_hash = bytes(policy_hash)

    def __len__(self):
        return len(self.records)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            (self.env_id, self.state_dim, self.action_dim, self.discrete, self.seed, self.policy_hash) ==
            (other.env_id, other.state_dim, other.action_dim, other.discrete, other.seed, other.policy_hash)
            and self.records.tobytes() == other.records.tobytes()
        )

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    @property
    def states(self):
        return self.records['state']

    @property
    def actions(self):
        if self.discrete:
            return self.records['action'].astype(np.int64)
        return self.records['action']

    @property
    def rewards(self):
        return self.records['reward']

    @property
    def next_states(self):
        return self.records['next_state']

    @property
    def dones(self):
        return self.records['done'].astype(np.float64)

    def save(self, path):
        write_dataset(path, self)

    def __repr__(self):
        return '<Dataset env={} size={} seed={}>'.format(self.env_id, len(self), self.seed)


def write_dataset(path, dataset):
    env_id = dataset.env_id.encode('utf-8')
    header = io.BytesIO()
    header.write(MAGIC)
    header.write(struct.pack('<I', VERSION))
    header.write(struct.pack('<I', len(env_id)))
    header.write(env_id)
    header.write(struct.pack('<IIQQ', dataset.state_dim, dataset.action_dim, len(dataset), dataset.seed))
    header.write(dataset.policy_hash)
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        os.makedirs(directory)
    with open(path, 'wb') as wfh:
        wfh.write(header.getvalue())
        wfh.write(dataset.records.tobytes())
    log.debug('Wrote %d transitions to %s', len(dataset), path)


def _read_exact(rfh, size, path):
    data = rfh.read(size)
    if len(data) != size:
        raise DatasetError('{} is truncated'.format(path))
    return data


def read_dataset(path):
    '''
    Load a dataset file; the environment id decides how actions are stored
    '''
    if not os.path.isfile(path):
        raise DatasetError('Dataset {} does not exist'.format(path))
    with open(path, 'rb') as rfh:
        if _read_exact(rfh, 4, path) != MAGIC:
            raise DatasetError('{} is not a dataset file'.format(path))
        version, = struct.unpack('<I', _read_exact(rfh, 4, path))
        if version != VERSION:
            raise DatasetError('{} has unsupported version {}'.format(path, version))
        length, = struct.unpack('<I', _read_exact(rfh, 4, path))
        try:
            env_id = _read_exact(rfh, length, path).decode('utf-8')
        except UnicodeDecodeError:
            raise DatasetError('{} has a corrupt environment id'.format(path))
        state_dim, action_dim, count, seed = struct.unpack('<IIQQ', _read_exact(rfh, 24, path))
        policy_hash = _read_exact(rfh, HASH_SIZE, path)
        try:
            spec = get_spec(env_id)
        except KeyError:
            raise DatasetError('{} was collected on the unknown environment {!r}'.format(path, env_id))
        if (state_dim, action_dim) != (spec.state_dim, spec.action_dim):
            raise DatasetError(
                '{} declares {}-dimensional states and {}-dimensional actions, {} has {} and {}'.format(
                    path, state_dim, action_dim, env_id, spec.state_dim, spec.action_dim)
            )
        dtype = record_dtype(state_dim, action_dim, spec.discrete)
        payload = rfh.read()
    if len(payload) != count * dtype.itemsize:
        raise DatasetError('{} announces {} transitions but holds {} bytes of records'.format(path, count, len(payload)))
    records = np.frombuffer(payload, dtype=dtype).copy()
    return Dataset(env_id, state_dim, action_dim, spec.discrete, records, seed=seed, policy_hash=policy_hash)


def random_policy(env, rng):
    def _policy(state):  # pylint: disable=unused-argument
        return env.sample_action(rng)
    return _policy


def _behaviour_action(env, policy, state, rng, noise, epsilon):
    spec = env.spec
    if epsilon and rng.random() < epsilon:
        return env.sample_action(rng)
    action = policy(state)
    if spec.discrete:
        if int(action) != action or not 0 <= int(action) < spec.action_dim:
            raise ContractError('The policy returned {!r} for a {}-action environment'.format(action, spec.action_dim))
        return int(action)
    action = np.asarray(action, dtype=np.float64).reshape(-1)
    if action.shape != (spec.action_dim,):
        raise ContractError('The policy returned an action of shape {} for an environment with {} action dims'.format(
            action.shape, spec.action_dim))
    if noise:
        action = action + rng.normal(0.0, noise * spec.max_action, size=action.shape)
    return np.clip(action, -spec.max_action, spec.max_action)


def collect_dataset(env, policy, n_transitions, seed, path=None, policy_hash=NO_POLICY_HASH, noise=0.0, epsilon=0.0):
    '''
    Roll episodes of ``policy`` (a callable state -> action, ``None`` for uniformly random
    actions) until ``n_transitions`` are gathered.

    ``noise`` adds Gaussian noise of standard deviation ``noise * max_action`` to continuous
    actions; ``epsilon`` replaces the action by a random one with that probability.

    Returns ``(dataset, episode_returns)``; the dataset is written to ``path`` when given.
    '''
    if n_transitions < 0:
        raise ContractError('Cannot collect a negative number of transitions')
    spec = env.spec
    rng = np.random.default_rng(seed)
    if policy is None:
        policy = random_policy(env, rng)
    records = np.zeros(n_transitions, dtype=record_dtype(spec.state_dim, spec.action_dim, spec.discrete))
    returns = []
    episode = 0
    state = None
    episode_return = 0.0
    for index in range(n_transitions):
        if state is None:
            state = env.reset(seed=seed * 100003 + episode)
            episode += 1
            episode_return = 0.0
        action = _behaviour_action(env, policy, state, rng, noise, epsilon)
        result = env.step(action)
        records[index] = (state, action, result.reward, result.state, result.terminated)
        episode_return += result.reward
        state = result.state
        if result.done:
            returns.append(episode_return)
            state = None
    if state is not None:
        returns.append(episode_return)
    dataset = Dataset(spec.env_id, spec.state_dim, spec.action_dim, spec.discrete, records,
                      seed=seed, policy_hash=policy_hash)
    log.info('Collected %d transitions over %d episodes on %s, mean return %s',
             n_transitions, len(returns), spec.env_id, np.mean(returns) if returns else 'n/a')
    if path is not None:
        write_dataset(path, dataset)
    return dataset, returns
