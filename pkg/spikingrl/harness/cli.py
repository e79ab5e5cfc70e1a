# -*- coding: utf-8 -*-
'''
spikingrl.harness.cli
~~~~~~~~~~~~~~~~~~~~~

The ``spiking-rl`` command.

Exit codes: 0 on success, 1 on usage or configuration errors, 2 on dataset and file
errors, 3 when an invariant breaks during a run.
'''

# Import python libs
from __future__ import absolute_import, print_function
import os
import sys
import time
import logging
import argparse
from collections import OrderedDict

# Import 3rd-party libs
import numpy as np
import yaml

# Import spikingrl libs
import spikingrl.version
from spikingrl.envs import collect_dataset, make_env
from spikingrl.envs.dataset import NO_POLICY_HASH
from spikingrl.exceptions import ContractError, DatasetError, InvariantViolation, SpikingRLError, UsageError
from spikingrl.harness.checkpoint import load_checkpoint, restore_agent
from spikingrl.harness.config import CHOICES, add_config_arguments, config_from_args, dump_config
from spikingrl.harness.plotting import plot_learning_curves
from spikingrl.harness.results import (
    ABLATION_ROWS, EvalRecord, aggregate, compare_scores, max_average_return, read_run,
    write_ablation_csv, write_aggregate_csv, write_comparison_csv, write_eval_csv
)
from spikingrl.harness.runner import evaluate, measure_power, run_training
from spikingrl.power import HEADER
from spikingrl.utils.log import setup_logging

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INVARIANT = 3


class ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


def _default_run_dir(config, kind='train'):
    name = '{}-{}-{}-{}-{}'.format(kind, config.algorithm, config.env, config.variant, config.coder)
    return os.path.join(config.output_dir, '{}-{}'.format(name, time.strftime('%Y%m%d-%H%M%S')))


def _prepare_run_dir(args, config, kind='train'):
    run_dir = args.run_dir or _default_run_dir(config, kind)
    if not os.path.isdir(run_dir):
        os.makedirs(run_dir)
    setup_logging(config.log_level, log_file=os.path.join(run_dir, 'run.log'))
    dump_config(config, os.path.join(run_dir, 'config.yaml'))
    return run_dir


def _train(config, run_dir):
    results = run_training(config, run_dir)
    runs = OrderedDict((seed, result.records) for seed, result in results.items())
    rows = aggregate(runs)
    write_aggregate_csv(os.path.join(run_dir, 'aggregate.csv'), rows)
    if rows:
        plot_learning_curves(runs, os.path.join(run_dir, 'learning_curves.svg'), smoothing=config.smoothing,
                             title='{} {} ({} coder) on {}'.format(
                                 config.algorithm.upper(), config.variant, config.coder, config.env))
    return runs


def cmd_train(args):
    config = config_from_args(args)
    run_dir = _prepare_run_dir(args, config)
    runs = _train(config, run_dir)
    print(run_dir)
    if aggregate(runs):
        mean, std = max_average_return(runs)
        print('max average return: {:.3f} +/- {:.3f}'.format(mean, std))
    return EXIT_OK


def cmd_eval(args):
    setup_logging(args.log_level)
    checkpoint = load_checkpoint(args.checkpoint)
    config = checkpoint.config
    if args.epsilon is not None:
        config = config.replace(eval_epsilon=args.epsilon)
    agent = restore_agent(checkpoint, config=config, env_id=args.env)
    returns = evaluate(agent, make_env(config.env), args.episodes, args.seed)
    record = EvalRecord.from_returns(checkpoint.step, args.seed, returns)
    if args.output:
        write_eval_csv(args.output, [record], args.episodes)
    print('average return over {} episodes: {:.3f} +/- {:.3f}'.format(args.episodes, record.mean, record.std))
    return EXIT_OK


def cmd_ablate(args):
    config = config_from_args(args)
    run_dir = _prepare_run_dir(args, config, kind='ablate')
    rows = []
    for label, coder, variant in ABLATION_ROWS:
        row_config = config.replace(coder=coder, variant=variant)
        row_dir = os.path.join(run_dir, '{}-{}'.format(coder, variant))
        if not os.path.isdir(row_dir):
            os.makedirs(row_dir)
        dump_config(row_config, os.path.join(row_dir, 'config.yaml'))
        log.info('Ablation row %s/%s', label, 'SNN' if variant == 'spiking' else 'ANN')
        runs = _train(row_config, row_dir)
        mean, std = max_average_return(runs)
        rows.append((label, coder, variant, mean, std))
    write_ablation_csv(os.path.join(run_dir, 'ablation.csv'), rows)
    print(run_dir)
    for label, _, variant, mean, std in rows:
        print('{:<12}{:<5}{:>12.3f} +/- {:.3f}'.format(label, 'SNN' if variant == 'spiking' else 'ANN', mean, std))
    return EXIT_OK


def cmd_collect(args):
    setup_logging(args.log_level)
    env = make_env(args.env)
    policy = None
    policy_hash = NO_POLICY_HASH
    if args.checkpoint:
        checkpoint = load_checkpoint(args.checkpoint)
        agent = restore_agent(checkpoint, rng=np.random.default_rng(args.seed), env_id=args.env)
        policy_rng = np.random.default_rng(args.seed)

        def policy(state):
            return agent.act(state, explore=False, rng=policy_rng)
        policy_hash = checkpoint.digest
    dataset, returns = collect_dataset(env, policy, args.size, args.seed, path=args.output, policy_hash=policy_hash,
                                       noise=args.noise, epsilon=args.epsilon)
    print('{} transitions, {} episodes, mean return {:.3f} -> {}'.format(
        len(dataset), len(returns), float(np.mean(returns)) if returns else 0.0, args.output))
    return EXIT_OK


def cmd_power(args):
    setup_logging(args.log_level)
    checkpoint = load_checkpoint(args.checkpoint)
    agent = restore_agent(checkpoint)
    reports = measure_power(agent, make_env(checkpoint.config.env), args.episodes, args.seed)
    networks = {}
    for name, (measured, conventional) in reports.items():
        entry = dict(measured.as_dict())
        entry['conventional_per_inference'] = conventional.per_inference
        entry['coder_ops_per_inference'] = measured.coder_ops_per_inference
        networks[name] = entry
        print('{:<14}{:<9}{:>14.1f} SynOps/inference (conventional {:.1f})'.format(
            name, measured.variant, measured.per_inference, conventional.per_inference))
    output = args.output or os.path.join(os.path.dirname(os.path.abspath(args.checkpoint)), 'power.yaml')
    with open(output, 'w') as wfh:
        wfh.write(yaml.safe_dump({
            'description': HEADER,
            'checkpoint': args.checkpoint,
            'episodes': args.episodes,
            'networks': networks,
        }, default_flow_style=False))
    print(output)
    return EXIT_OK


def cmd_compare(args):
    setup_logging(args.log_level)
    score, _ = max_average_return(read_run(args.run_dir))
    baseline, _ = max_average_return(read_run(args.baseline_dir))
    percent, outcome = compare_scores(score, baseline)
    output = args.output or os.path.join(args.run_dir, 'comparison.csv')
    write_comparison_csv(output, [(args.run_dir, args.baseline_dir, score, baseline, percent, outcome)])
    print('{:.3f} vs {:.3f}: {} ({})'.format(
        score, baseline, outcome, 'n/a' if percent is None else '{:.1f}%'.format(percent)))
    return EXIT_OK


def _add_log_level(parser):
    parser.add_argument('--log-level', dest='log_level', default='info', choices=CHOICES['log_level'])


def build_parser():
    parser = ArgumentParser(prog='spiking-rl', description='Spiking actor and critic networks for control tasks')
    parser.add_argument('--version', action='version', version=spikingrl.version.__version__)
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    train = commands.add_parser('train', help='Train an agent on every configured seed')
    add_config_arguments(train)
    train.add_argument('--run-dir', default=None, help='Run directory; a timestamped one below --output-dir by default')
    train.set_defaults(func=cmd_train)

    evaluate_ = commands.add_parser('eval', help='Evaluate a checkpoint')
    evaluate_.add_argument('checkpoint')
    evaluate_.add_argument('--episodes', type=int, default=10)
    evaluate_.add_argument('--epsilon', type=float, default=None, help='Exploration rate of discrete policies')
    evaluate_.add_argument('--env', default=None, choices=CHOICES['env'])
    evaluate_.add_argument('--seed', type=int, default=0)
    evaluate_.add_argument('--output', default=None, help='CSV file receiving the episode returns')
    _add_log_level(evaluate_)
    evaluate_.set_defaults(func=cmd_eval)

    ablate = commands.add_parser('ablate', help='Train every coder and network combination')
    add_config_arguments(ablate)
    ablate.add_argument('--run-dir', default=None)
    ablate.set_defaults(func=cmd_ablate)

    collect = commands.add_parser('collect', help='Collect an offline dataset')
    collect.add_argument('--env', required=True, choices=CHOICES['env'])
    collect.add_argument('--size', type=int, required=True, help='Number of transitions')
    collect.add_argument('--output', required=True)
    collect.add_argument('--checkpoint', default=None, help='Behaviour policy; uniformly random without one')
    collect.add_argument('--noise', type=float, default=0.0, help='Gaussian action noise, fraction of the bound')
    collect.add_argument('--epsilon', type=float, default=0.0, help='Probability of a random action')
    collect.add_argument('--seed', type=int, default=0)
    _add_log_level(collect)
    collect.set_defaults(func=cmd_collect)

    power = commands.add_parser('power', help='Count the synaptic operations of a checkpoint')
    power.add_argument('checkpoint')
    power.add_argument('--episodes', type=int, default=10)
    power.add_argument('--seed', type=int, default=0)
    power.add_argument('--output', default=None)
    _add_log_level(power)
    power.set_defaults(func=cmd_power)

    compare = commands.add_parser('compare', help='Score a run against a baseline run')
    compare.add_argument('run_dir')
    compare.add_argument('baseline_dir')
    compare.add_argument('--output', default=None, help='Comparison CSV; comparison.csv in RUN_DIR by default')
    _add_log_level(compare)
    compare.set_defaults(func=cmd_compare)
    return parser


def _report(exc):
    sys.stderr.write('spiking-rl: {}\n'.format(exc))


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, 'episodes', 1) < 1:
            raise UsageError('Invalid arguments', diagnostics=['episodes: must be >= 1'])
        return args.func(args)
    except (UsageError, ContractError) as exc:
        _report(exc)
        return EXIT_USAGE
    except (DatasetError, IOError) as exc:
        _report(exc)
        return EXIT_DATA
    except (InvariantViolation, SpikingRLError) as exc:
        log.debug('Run aborted', exc_info=True)
        _report(exc)
        return EXIT_INVARIANT


if __name__ == '__main__':
    sys.exit(main())
