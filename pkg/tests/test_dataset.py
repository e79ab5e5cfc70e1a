# -*- coding: utf-8 -*-
'''
    test_dataset.py
    ~~~~~~~~~~~~~~~

    Test offline dataset collection and the dataset file format
'''

# Import python libs
from __future__ import absolute_import
import struct

# Import 3rd-party libs
import numpy as np
import pytest

# Import spikingrl libs
from spikingrl.algos import ReplayBuffer
from spikingrl.envs import collect_dataset, make_env, read_dataset, write_dataset
from spikingrl.envs.dataset import MAGIC, VERSION
from spikingrl.exceptions import DatasetError


@pytest.fixture
def pendulum_dataset():
    dataset, _ = collect_dataset(make_env('pendulum'), None, 300, seed=4)
    return dataset


def test_collect_shapes(pendulum_dataset):
    assert len(pendulum_dataset) == 300
    assert pendulum_dataset.states.shape == (300, 3)
    assert pendulum_dataset.actions.shape == (300, 1)
    assert np.all(np.abs(pendulum_dataset.actions) <= 2.0)
    # pendulum episodes only end by truncation
    assert not pendulum_dataset.dones.any()


def test_collect_is_deterministic(pendulum_dataset):
    again, _ = collect_dataset(make_env('pendulum'), None, 300, seed=4)
    assert again == pendulum_dataset


def test_collect_reports_episode_returns():
    _, returns = collect_dataset(make_env('pendulum'), None, 450, seed=0)
    assert len(returns) == 3
    assert all(value <= 0.0 for value in returns)


def test_cartpole_dones_are_terminations():
    dataset, _ = collect_dataset(make_env('cartpole'), None, 400, seed=2)
    assert dataset.actions.dtype == np.int64
    assert dataset.dones.any()


def test_epsilon_one_never_calls_the_policy():
    def policy(state):
        raise AssertionError('The policy should not be consulted')
    dataset, _ = collect_dataset(make_env('pendulum'), policy, 20, seed=0, epsilon=1.0)
    assert len(dataset) == 20


def test_noise_perturbs_the_policy():
    def policy(state):
        return np.zeros(1)
    dataset, _ = collect_dataset(make_env('pendulum'), policy, 50, seed=0, noise=0.3)
    assert np.any(dataset.actions != 0.0)
    assert np.all(np.abs(dataset.actions) <= 2.0)


def test_round_trip(tmp_path, pendulum_dataset):
    path = str(tmp_path / 'pendulum.acsf')
    write_dataset(path, pendulum_dataset)
    with open(path, 'rb') as rfh:
        assert rfh.read(4) == MAGIC
    assert read_dataset(path) == pendulum_dataset


def test_collect_writes_the_file(tmp_path):
    path = str(tmp_path / 'nested' / 'chain.acsf')
    dataset, _ = collect_dataset(make_env('chain'), None, 30, seed=1, path=path)
    assert read_dataset(path) == dataset


def test_read_errors(tmp_path, pendulum_dataset):
    with pytest.raises(DatasetError):
        read_dataset(str(tmp_path / 'missing.acsf'))

    bad_magic = tmp_path / 'bad.acsf'
    bad_magic.write_bytes(b'NOPE' + b'\x00' * 64)
    with pytest.raises(DatasetError):
        read_dataset(str(bad_magic))

    path = str(tmp_path / 'truncated.acsf')
    write_dataset(path, pendulum_dataset)
    with open(path, 'rb') as rfh:
        contents = rfh.read()
    with open(path, 'wb') as wfh:
        wfh.write(contents[:-7])
    with pytest.raises(DatasetError):
        read_dataset(path)


def test_replay_buffer_from_dataset(pendulum_dataset):
    buffer = ReplayBuffer.from_dataset(pendulum_dataset, seed=0)
    assert len(buffer) == 300
    assert np.allclose(buffer.all().states, pendulum_dataset.states)
    batch = buffer.sample(10)
    assert batch.actions.shape == (10, 1)


def test_corrupt_headers(tmp_path, pendulum_dataset):
    bad_id = tmp_path / 'bad-id.acsf'
    bad_id.write_bytes(MAGIC + struct.pack('<II', VERSION, 2) + b'\xff\xfe' + b'\x00' * 64)
    with pytest.raises(DatasetError, match='corrupt environment id'):
        read_dataset(str(bad_id))

    path = str(tmp_path / 'bad-dims.acsf')
    write_dataset(path, pendulum_dataset)
    with open(path, 'rb') as rfh:
        contents = bytearray(rfh.read())
    offset = len(MAGIC) + 8 + len(b'pendulum')
    contents[offset:offset + 8] = struct.pack('<II', 5, 1)
    with open(path, 'wb') as wfh:
        wfh.write(bytes(contents))
    with pytest.raises(DatasetError, match='5-dimensional states'):
        read_dataset(path)
