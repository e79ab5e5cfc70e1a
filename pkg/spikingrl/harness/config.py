# -*- coding: utf-8 -*-
'''
spikingrl.harness.config
~~~~~~~~~~~~~~~~~~~~~~~~

Run configuration.

A run's options are :data:`DEFAULT_OPTIONS`, updated with a YAML config file, updated with
command line flags, and finally completed with the per-algorithm defaults for every key
still unset. The resolved options hold no unset algorithm keys and are what
``config.yaml`` in the run directory contains.
'''
# pylint: disable=too-many-branches

# Import python libs
from __future__ import absolute_import
import os
import copy
import pprint
import logging
import argparse
from collections import OrderedDict

# Import 3rd-party libs
import yaml

# Import spikingrl libs
from spikingrl.algos import AGENTS
from spikingrl.algos.networks import CODERS, VARIANTS
from spikingrl.envs import ENVIRONMENTS, get_spec
from spikingrl.exceptions import UsageError
from spikingrl.utils.log import LOG_LEVELS

log = logging.getLogger(__name__)

OFFLINE_ALGORITHMS = ('bcq', 'bc')

DEFAULT_OPTIONS = OrderedDict([
    ('algorithm', 'dqn'),
    ('variant', 'spiking'),
    ('coder', 'adaptive'),
    ('env', None),
    ('T', 4),
    ('beta', 0.5),
    ('alpha', 2.0),
    ('v_threshold', 1.0),
    ('v_reset', 0.0),
    ('gamma', 0.99),
    ('tau', None),
    ('batch_size', None),
    ('buffer_size', 100000),
    ('lr', None),
    ('coder_lr', None),
    ('hidden_sizes', None),
    ('vae_hidden_sizes', [750, 750]),
    ('latent_dim', None),
    ('lam', 0.75),
    ('n_samples', 10),
    ('phi', None),
    ('epsilon_start', 1.0),
    ('epsilon_end', 0.05),
    ('epsilon_decay_steps', 10000),
    ('eval_epsilon', None),
    ('expl_noise', 0.1),
    ('target_update_period', None),
    ('warmup_steps', 1000),
    ('seeds', [0, 1, 2, 3, 4]),
    ('total_steps', None),
    ('eval_every', 1000),
    ('eval_episodes', 10),
    ('dataset', None),
    ('workers', None),
    ('output_dir', 'runs'),
    ('per_neuron_decoder', False),
    ('log_level', 'info'),
    ('smoothing', 0.6),
])

ALGORITHM_DEFAULTS = {
    'dqn': {
        'env': 'cartpole',
        'tau': 1.0,
        'batch_size': 32,
        'lr': 1e-4,
        'hidden_sizes': [64, 64],
        'target_update_period': 1000,
        'total_steps': 100000,
        'eval_epsilon': 0.05,
    },
    'ddpg': {
        'env': 'pendulum',
        'tau': 0.005,
        'batch_size': 100,
        'lr': 1e-4,
        'hidden_sizes': [400, 300],
        'target_update_period': 1,
        'total_steps': 100000,
        'eval_epsilon': 0.0,
    },
    'bcq': {
        'env': 'pendulum',
        'tau': 0.005,
        'batch_size': 100,
        'lr': 1e-4,
        'hidden_sizes': [400, 300],
        'target_update_period': 1,
        'total_steps': 50000,
        'eval_epsilon': 0.0,
    },
    'bc': {
        'env': 'pendulum',
        'tau': 0.005,
        'batch_size': 100,
        'lr': 1e-3,
        'hidden_sizes': [400, 300],
        'target_update_period': 1,
        'total_steps': 50000,
        'eval_epsilon': 0.0,
    },
}

INT_KEYS = (
    'T', 'batch_size', 'buffer_size', 'latent_dim', 'n_samples', 'epsilon_decay_steps',
    'target_update_period', 'warmup_steps', 'total_steps', 'eval_every', 'eval_episodes', 'workers',
)
FLOAT_KEYS = (
    'beta', 'alpha', 'v_threshold', 'v_reset', 'gamma', 'tau', 'lr', 'coder_lr', 'lam', 'phi',
    'epsilon_start', 'epsilon_end', 'eval_epsilon', 'expl_noise', 'smoothing',
)
INT_LIST_KEYS = ('hidden_sizes', 'vae_hidden_sizes', 'seeds')
BOOL_KEYS = ('per_neuron_decoder',)
CHOICES = {
    'algorithm': sorted(AGENTS),
    'variant': list(VARIANTS),
    'coder': list(CODERS),
    'env': sorted(ENVIRONMENTS),
    'log_level': sorted(LOG_LEVELS),
}

HELP = {
    'algorithm': 'Learning algorithm',
    'variant': 'Network variant: conventional (ann) or spiking',
    'coder': 'Temporal coder wrapped around the network',
    'env': 'Environment id; defaults per algorithm',
    'T': 'Simulation window in timesteps',
    'beta': 'Membrane decay factor',
    'alpha': 'Surrogate gradient width',
    'v_threshold': 'Firing threshold',
    'v_reset': 'Reset voltage',
    'gamma': 'Discount factor',
    'tau': 'Target update factor',
    'batch_size': 'Minibatch size',
    'buffer_size': 'Replay buffer capacity',
    'lr': 'Adam learning rate',
    'coder_lr': 'Adam learning rate of the coder weights; defaults to --lr',
    'hidden_sizes': 'Hidden layer widths',
    'vae_hidden_sizes': 'Hidden layer widths of the BCQ VAE',
    'latent_dim': 'VAE latent width; defaults to twice the action width',
    'lam': 'BCQ weight of the critic minimum in the target',
    'n_samples': 'BCQ candidate actions per state',
    'phi': 'BCQ perturbation range; defaults to the action bound',
    'epsilon_start': 'Initial exploration rate of DQN',
    'epsilon_end': 'Final exploration rate of DQN',
    'epsilon_decay_steps': 'Steps over which the DQN exploration rate decays',
    'eval_epsilon': 'Exploration rate while evaluating discrete policies',
    'expl_noise': 'Gaussian exploration noise of DDPG, as a fraction of the action bound',
    'target_update_period': 'Updates between DQN target network updates',
    'warmup_steps': 'Transitions gathered before learning starts',
    'seeds': 'Random seeds, one training run each',
    'total_steps': 'Environment steps (online) or gradient steps (offline)',
    'eval_every': 'Steps between evaluations',
    'eval_episodes': 'Episodes per evaluation',
    'dataset': 'Offline dataset file',
    'workers': 'Worker processes; defaults to min(seeds, cores)',
    'output_dir': 'Directory receiving run directories',
    'per_neuron_decoder': 'Give every output neuron its own decoder weights',
    'log_level': 'Console log level',
    'smoothing': 'Exponential smoothing of the plotted learning curves',
}


class RunConfig(object):
    '''
    Read-only view over a resolved options mapping with attribute access
    '''

    def __init__(self, options):
        self.__dict__['_options'] = OrderedDict((key, copy.deepcopy(options[key])) for key in options)

    def __getattr__(self, name):
        if name.startswith('__'):
            raise AttributeError(name)
        try:
            return self.__dict__['_options'][name]
        except KeyError:
            raise AttributeError('Unknown configuration key {!r}'.format(name))

    def __setattr__(self, name, value):
        raise AttributeError('RunConfig is read-only, use replace()')

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented
        return dict(self.as_dict()) == dict(other.as_dict())

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        return 'RunConfig({})'.format(dict(self._options))

    def __getstate__(self):
        return self.as_dict()

    def __setstate__(self, state):
        self.__dict__['_options'] = OrderedDict(state)

    @property
    def offline(self):
        return self.algorithm in OFFLINE_ALGORITHMS

    @property
    def env_spec(self):
        return get_spec(self.env)

    def as_dict(self):
        return OrderedDict((key, copy.deepcopy(value)) for key, value in self._options.items())

    def replace(self, **kwargs):
        return resolve(dict(self.as_dict(), **kwargs))


def _coerce(options, diagnostics):
    for key in INT_KEYS:
        value = options.get(key)
        if value is None:
            continue
        try:
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise ValueError
            options[key] = int(float(value))
        except (TypeError, ValueError):
            diagnostics.append('{}: expected an integer, got {!r}'.format(key, value))
    for key in FLOAT_KEYS:
        value = options.get(key)
        if value is None:
            continue
        try:
            if isinstance(value, bool):
                raise ValueError
            options[key] = float(value)
        except (TypeError, ValueError):
            diagnostics.append('{}: expected a number, got {!r}'.format(key, value))
    for key in INT_LIST_KEYS:
        value = options.get(key)
        if value is None:
            continue
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = [value]
        try:
            options[key] = [int(item) for item in value]
        except (TypeError, ValueError):
            diagnostics.append('{}: expected a list of integers, got {!r}'.format(key, value))
    for key in BOOL_KEYS:
        value = options.get(key)
        if isinstance(value, str):
            options[key] = value.lower() in ('1', 'true', 'yes', 'on')
        else:
            options[key] = bool(value)


def _check_range(options, diagnostics, key, low=None, high=None, low_open=False):
    value = options.get(key)
    if value is None or not isinstance(value, (int, float)):
        return
    if low is not None and (value < low or (low_open and value == low)):
        diagnostics.append('{}: must be {} {}, got {}'.format(key, '>' if low_open else '>=', low, value))
    if high is not None and value > high:
        diagnostics.append('{}: must be <= {}, got {}'.format(key, high, value))


def validate(options):
    '''
    Return the list of ``field: message`` problems of resolved ``options``
    '''
    diagnostics = []
    unknown = sorted(set(options) - set(DEFAULT_OPTIONS))
    for key in unknown:
        diagnostics.append('{}: unknown configuration key'.format(key))
    for key, choices in CHOICES.items():
        if options.get(key) not in choices:
            diagnostics.append('{}: must be one of {}, got {!r}'.format(key, ', '.join(choices), options.get(key)))
    if diagnostics:
        return diagnostics

    algorithm, variant, coder = options['algorithm'], options['variant'], options['coder']
    if coder == 'none' and variant != 'ann':
        diagnostics.append('coder: none requires variant ann')
    if variant == 'ann' and coder not in ('none', 'adaptive'):
        diagnostics.append('coder: {} requires variant spiking'.format(coder))
    spec = get_spec(options['env'])
    if algorithm == 'dqn' and not spec.discrete:
        diagnostics.append('env: dqn needs a discrete environment, {} is continuous'.format(spec.env_id))
    if algorithm != 'dqn' and spec.discrete:
        diagnostics.append('env: {} needs a continuous environment, {} is discrete'.format(algorithm, spec.env_id))
    if algorithm in OFFLINE_ALGORITHMS and not options.get('dataset'):
        diagnostics.append('dataset: {} is offline and needs a dataset file'.format(algorithm))

    _check_range(options, diagnostics, 'T', low=1)
    _check_range(options, diagnostics, 'beta', low=0.0, high=1.0, low_open=True)
    _check_range(options, diagnostics, 'alpha', low=0.0, low_open=True)
    if options['v_threshold'] <= options['v_reset']:
        diagnostics.append('v_threshold: must lie above v_reset')
    _check_range(options, diagnostics, 'gamma', low=0.0, high=1.0)
    _check_range(options, diagnostics, 'tau', low=0.0, high=1.0)
    for key in ('batch_size', 'buffer_size', 'n_samples', 'target_update_period', 'eval_every', 'eval_episodes',
                'latent_dim', 'workers'):
        _check_range(options, diagnostics, key, low=1)
    for key in ('lr', 'coder_lr', 'phi'):
        _check_range(options, diagnostics, key, low=0.0, low_open=True)
    for key in ('lam', 'epsilon_start', 'epsilon_end', 'eval_epsilon'):
        _check_range(options, diagnostics, key, low=0.0, high=1.0)
    for key in ('warmup_steps', 'total_steps', 'epsilon_decay_steps', 'expl_noise'):
        _check_range(options, diagnostics, key, low=0)
    _check_range(options, diagnostics, 'smoothing', low=0.0, high=0.999)
    for key in ('hidden_sizes', 'vae_hidden_sizes'):
        sizes = options.get(key)
        if not sizes or any(size < 1 for size in sizes):
            diagnostics.append('{}: needs at least one positive width'.format(key))
    seeds = options.get('seeds')
    if not seeds:
        diagnostics.append('seeds: at least one seed is needed')
    elif len(set(seeds)) != len(seeds) or any(seed < 0 for seed in seeds):
        diagnostics.append('seeds: must be distinct non-negative integers')
    return diagnostics


def resolve(options):
    '''
    Complete ``options`` with the algorithm defaults, validate and return a RunConfig
    '''
    options = OrderedDict((key, copy.deepcopy(value)) for key, value in options.items())
    diagnostics = []
    _coerce(options, diagnostics)
    algorithm = options.get('algorithm')
    for key, value in ALGORITHM_DEFAULTS.get(algorithm, {}).items():
        if options.get(key) is None:
            options[key] = copy.deepcopy(value)
    if not diagnostics and options.get('env') in ENVIRONMENTS:
        spec = get_spec(options['env'])
        if not spec.discrete:
            if options.get('latent_dim') is None:
                options['latent_dim'] = 2 * spec.action_dim
            if options.get('phi') is None:
                options['phi'] = spec.max_action
    if options.get('coder_lr') is None and options.get('lr') is not None:
        options['coder_lr'] = options['lr']
    if not diagnostics:
        diagnostics = validate(options)
    if diagnostics:
        raise UsageError('Invalid configuration', diagnostics=diagnostics)
    return RunConfig(options)


def read_config_file(path):
    if not os.path.isfile(path):
        raise UsageError('Invalid configuration', diagnostics=['config: {} does not exist'.format(path)])
    with open(path) as rfh:
        try:
            contents = yaml.safe_load(rfh) or {}
        except yaml.YAMLError as exc:
            raise UsageError('Invalid configuration', diagnostics=['config: {} is not valid YAML: {}'.format(path, exc)])
    if not isinstance(contents, dict):
        raise UsageError('Invalid configuration', diagnostics=['config: {} must hold a mapping'.format(path)])
    return contents


def load_config(config_file=None, overrides=None):
    '''
    Build the run configuration from the defaults, an optional config file and overrides
    '''
    options = copy.deepcopy(DEFAULT_OPTIONS)
    if config_file is not None:
        options.update(read_config_file(config_file))
    if overrides:
        options.update(overrides)
    log.debug('Run options before resolving:\n%s', pprint.pformat(dict(options)))
    config = resolve(options)
    log.debug('Resolved run options:\n%s', pprint.pformat(dict(config.as_dict())))
    return config


def dump_config(config, path):
    with open(path, 'w') as wfh:
        wfh.write(yaml.safe_dump(dict(config.as_dict()), default_flow_style=False))
    log.debug('Wrote the resolved configuration to %s', path)


def _str2bool(value):
    if value.lower() in ('1', 'true', 'yes', 'on'):
        return True
    if value.lower() in ('0', 'false', 'no', 'off'):
        return False
    raise argparse.ArgumentTypeError('expected a boolean, got {!r}'.format(value))


def add_config_arguments(parser):
    '''
    Add ``--config`` and one ``--key-name`` flag per configuration key to ``parser``
    '''
    parser.add_argument('--config', default=None, help='YAML file with configuration keys')
    group = parser.add_argument_group('Run configuration')
    for key in DEFAULT_OPTIONS:
        flag = '--{}'.format(key.replace('_', '-'))
        kwargs = {'dest': key, 'default': argparse.SUPPRESS, 'help': HELP.get(key)}
        if key in INT_LIST_KEYS:
            kwargs.update(nargs='+', type=int)
        elif key in INT_KEYS:
            kwargs['type'] = int
        elif key in FLOAT_KEYS:
            kwargs['type'] = float
        elif key in BOOL_KEYS:
            kwargs.update(nargs='?', const=True, type=_str2bool)
        elif key in CHOICES:
            kwargs['choices'] = CHOICES[key]
        group.add_argument(flag, **kwargs)


def overrides_from_args(args):
    return dict((key, getattr(args, key)) for key in DEFAULT_OPTIONS if hasattr(args, key))


def config_from_args(args):
    return load_config(getattr(args, 'config', None), overrides_from_args(args))
