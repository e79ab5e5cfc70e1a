# -*- coding: utf-8 -*-
'''
spikingrl.harness.checkpoint
~~~~~~~~~~~~~~~~~~~~~~~~~~~~

msgpack checkpoints holding every network of an agent together with the run
configuration, the step and the seed it was taken at
'''

# Import python libs
from __future__ import absolute_import
import os
import hashlib
import logging
from collections import OrderedDict, namedtuple
from operator import itemgetter

# Import 3rd-party libs
import msgpack
import numpy as np

# Import spikingrl libs
from spikingrl.algos import make_agent
from spikingrl.envs import get_spec
from spikingrl.exceptions import ContractError, DatasetError, UsageError
from spikingrl.harness.config import resolve

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


class Checkpoint(namedtuple('Checkpoint', ('config', 'step', 'seed', 'mean_return', 'networks', 'digest'))):
    __slots__ = ()

    config = property(itemgetter(0), doc='The resolved RunConfig of the run')
    step = property(itemgetter(1))
    seed = property(itemgetter(2))
    mean_return = property(itemgetter(3), doc='Evaluation mean at ``step``, when one was taken')
    networks = property(itemgetter(4), doc='network name -> tensor name -> array')
    digest = property(itemgetter(5), doc='SHA-256 of the checkpoint file')


def _pack_array(array):
    array = np.ascontiguousarray(array, dtype='<f8')
    return {'shape': list(array.shape), 'data': array.tobytes()}


def _unpack_array(packed):
    return np.frombuffer(packed['data'], dtype='<f8').reshape(packed['shape']).copy()


def save_checkpoint(path, agent, config, step, seed, mean_return=None):
    networks = OrderedDict(
        (name, OrderedDict((key, _pack_array(values)) for key, values in state.items()))
        for name, state in agent.state_dict().items()
    )
    payload = {
        'version': FORMAT_VERSION,
        'algorithm': agent.name,
        'env': config.env,
        'step': int(step),
        'seed': int(seed),
        'mean_return': None if mean_return is None else float(mean_return),
        'config': dict(config.as_dict()),
        'networks': networks,
    }
    tmp_path = '{}.tmp'.format(path)
    with open(tmp_path, 'wb') as wfh:
        wfh.write(msgpack.packb(payload, use_bin_type=True))
    os.replace(tmp_path, path)
    log.debug('Saved checkpoint %s at step %d', path, step)
    return path


def load_checkpoint(path):
    if not os.path.isfile(path):
        raise DatasetError('Checkpoint {} does not exist'.format(path))
    with open(path, 'rb') as rfh:
        contents = rfh.read()
    try:
        payload = msgpack.unpackb(contents, raw=False)
    except (ValueError, msgpack.exceptions.ExtraData) as exc:
        raise DatasetError('{} is not a checkpoint: {}'.format(path, exc))
    if not isinstance(payload, dict) or payload.get('version') != FORMAT_VERSION:
        raise DatasetError('{} is not a version {} checkpoint'.format(path, FORMAT_VERSION))
    try:
        config = resolve(payload['config'])
    except UsageError as exc:
        raise DatasetError('{} holds an invalid configuration: {}'.format(path, '; '.join(exc.diagnostics)))
    networks = OrderedDict(
        (name, OrderedDict((key, _unpack_array(packed)) for key, packed in state.items()))
        for name, state in payload['networks'].items()
    )
    return Checkpoint(config, payload['step'], payload['seed'], payload['mean_return'], networks,
                      hashlib.sha256(contents).digest())


def restore_agent(checkpoint, rng=None, config=None, env_id=None):
    '''
    Rebuild the checkpointed agent, optionally under a modified ``config``.

    ``env_id`` must name the environment the checkpoint was trained on.
    '''
    config = config if config is not None else checkpoint.config
    if env_id is not None and env_id != checkpoint.config.env:
        raise ContractError('The checkpoint was trained on {}, not {}'.format(checkpoint.config.env, env_id))
    rng = rng if rng is not None else np.random.default_rng(checkpoint.seed)
    agent = make_agent(get_spec(config.env), config, rng)
    agent.load_state_dict(checkpoint.networks)
    return agent
