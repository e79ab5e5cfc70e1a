# -*- coding: utf-8 -*-
'''
spikingrl.harness.results
~~~~~~~~~~~~~~~~~~~~~~~~~

Evaluation records, their CSV files and the derived scores.

Floats are written with ``repr`` so two runs with equal seeds produce byte-identical files.
'''

# Import python libs
from __future__ import absolute_import
import os
import csv
import logging
from collections import OrderedDict, namedtuple
from operator import itemgetter

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.exceptions import DatasetError

log = logging.getLogger(__name__)

WIN_ABOVE = 105.0
LOSS_BELOW = 95.0

ABLATION_ROWS = (
    ('None', 'none', 'ann'),
    ('Rate', 'rate', 'spiking'),
    ('Accumulate', 'accumulate', 'spiking'),
    ('Adaptive', 'adaptive', 'ann'),
    ('Adaptive', 'adaptive', 'spiking'),
)


class EvalRecord(namedtuple('EvalRecord', ('step', 'seed', 'returns', 'mean', 'std', 'wall_clock'))):
    __slots__ = ()

    step = property(itemgetter(0))
    seed = property(itemgetter(1))
    returns = property(itemgetter(2), doc='Undiscounted return of every evaluation episode')
    mean = property(itemgetter(3))
    std = property(itemgetter(4))
    wall_clock = property(itemgetter(5), doc='Seconds since the seed started; not written to CSV files')

    @classmethod
    def from_returns(cls, step, seed, returns, wall_clock=None):
        returns = tuple(float(value) for value in returns)
        return cls(int(step), int(seed), returns, float(np.mean(returns)), float(np.std(returns)), wall_clock)


def _fmt(value):
    return repr(float(value))


def eval_columns(episodes):
    return ['step', 'seed'] + ['ep{}'.format(index) for index in range(episodes)] + ['mean', 'std']


def write_eval_csv(path, records, episodes):
    with open(path, 'w', newline='') as wfh:
        writer = csv.writer(wfh, lineterminator='\n')
        writer.writerow(eval_columns(episodes))
        for record in records:
            writer.writerow([record.step, record.seed] + [_fmt(value) for value in record.returns] +
                            [_fmt(record.mean), _fmt(record.std)])
    log.debug('Wrote %d evaluation rows to %s', len(records), path)


def read_eval_csv(path):
    if not os.path.isfile(path):
        raise DatasetError('Results file {} does not exist'.format(path))
    records = []
    with open(path, newline='') as rfh:
        reader = csv.DictReader(rfh)
        episodes = [name for name in (reader.fieldnames or []) if name.startswith('ep')]
        if not reader.fieldnames or 'mean' not in reader.fieldnames:
            raise DatasetError('{} is not an evaluation results file'.format(path))
        for row in reader:
            records.append(EvalRecord(
                int(row['step']), int(row['seed']), tuple(float(row[name]) for name in episodes),
                float(row['mean']), float(row['std']), None
            ))
    return records


def seed_csv_path(run_dir, seed):
    return os.path.join(run_dir, 'eval-seed{}.csv'.format(seed))


def read_run(run_dir):
    '''
    Evaluation records of every seed found in ``run_dir``, by seed
    '''
    runs = OrderedDict()
    if not os.path.isdir(run_dir):
        raise DatasetError('Run directory {} does not exist'.format(run_dir))
    names = sorted(name for name in os.listdir(run_dir) if name.startswith('eval-seed') and name.endswith('.csv'))
    for name in names:
        seed = int(name[len('eval-seed'):-len('.csv')])
        runs[seed] = read_eval_csv(os.path.join(run_dir, name))
    if not runs:
        raise DatasetError('No evaluation results in {}'.format(run_dir))
    return runs


def aggregate(runs):
    '''
    Mean and standard deviation across seeds at every step all seeds evaluated.

    ``runs`` maps a seed to its evaluation records; returns ``(step, mean, std, seeds)`` rows.
    '''
    by_step = OrderedDict()
    for records in runs.values():
        for record in records:
            by_step.setdefault(record.step, []).append(record.mean)
    rows = []
    for step in sorted(by_step):
        means = by_step[step]
        if len(means) != len(runs):
            continue
        rows.append((step, float(np.mean(means)), float(np.std(means)), len(means)))
    return rows


def write_aggregate_csv(path, rows):
    with open(path, 'w', newline='') as wfh:
        writer = csv.writer(wfh, lineterminator='\n')
        writer.writerow(['step', 'mean', 'std', 'seeds'])
        for step, mean, std, seeds in rows:
            writer.writerow([step, _fmt(mean), _fmt(std), seeds])


def max_average_return(runs):
    '''
    Best seed-averaged evaluation return over the run and the seed spread at that step
    '''
    rows = aggregate(runs)
    if not rows:
        raise DatasetError('No step was evaluated by every seed')
    _, mean, std, _ = max(rows, key=itemgetter(1))
    return mean, std


def compare_scores(score, baseline):
    '''
    Percentage of ``baseline`` reached by ``score`` and the resulting outcome.

    The percentage is ``100 * (1 + (score - baseline) / |baseline|)``, which is the plain
    ratio for positive baselines and still ranks higher returns higher for negative ones.
    A zero baseline has no percentage and is decided by the sign of the difference.
    '''
    if baseline == 0:
        percent = None
        outcome = 'tie' if score == 0 else ('win' if score > 0 else 'loss')
        return percent, outcome
    percent = 100.0 * (1.0 + (score - baseline) / abs(baseline))
    if percent > WIN_ABOVE:
        outcome = 'win'
    elif percent < LOSS_BELOW:
        outcome = 'loss'
    else:
        outcome = 'tie'
    return percent, outcome


def write_comparison_csv(path, rows):
    with open(path, 'w', newline='') as wfh:
        writer = csv.writer(wfh, lineterminator='\n')
        writer.writerow(['run', 'baseline', 'score', 'baseline_score', 'percent', 'outcome'])
        for run, baseline, score, baseline_score, percent, outcome in rows:
            writer.writerow([run, baseline, _fmt(score), _fmt(baseline_score),
                             '' if percent is None else _fmt(percent), outcome])


def write_ablation_csv(path, rows):
    '''
    ``rows`` are ``(label, coder, variant, mean, std)`` tuples
    '''
    with open(path, 'w', newline='') as wfh:
        writer = csv.writer(wfh, lineterminator='\n')
        writer.writerow(['coder', 'network', 'max_average_return', 'std'])
        for label, _, variant, mean, std in rows:
            writer.writerow([label, 'SNN' if variant == 'spiking' else 'ANN', _fmt(mean), _fmt(std)])
