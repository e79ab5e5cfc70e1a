# -*- coding: utf-8 -*-
'''
spikingrl.harness.plotting
~~~~~~~~~~~~~~~~~~~~~~~~~~

Learning curve figures
'''

# Import python libs
from __future__ import absolute_import
import logging

# Import 3rd-party libs
import numpy as np
from matplotlib.figure import Figure

log = logging.getLogger(__name__)


def ema(values, weight=0.6):
    '''
    Exponential moving average seeded with the first value
    '''
    values = np.asarray(values, dtype=np.float64)
    smoothed = np.empty_like(values)
    last = None
    for index, value in enumerate(values):
        last = value if last is None else weight * last + (1.0 - weight) * value
        smoothed[index] = last
    return smoothed


def plot_learning_curves(runs, path, smoothing=0.6, title=None):
    '''
    One smoothed curve per seed and the seed mean with its spread, written as SVG
    '''
    figure = Figure(figsize=(6.4, 4.0))
    axes = figure.add_subplot(1, 1, 1)
    for seed, records in runs.items():
        if not records:
            continue
        steps = [record.step for record in records]
        axes.plot(steps, ema([record.mean for record in records], smoothing), linewidth=0.8, alpha=0.4,
                  label='seed {}'.format(seed))
    by_step = {}
    for records in runs.values():
        for record in records:
            by_step.setdefault(record.step, []).append(record.mean)
    steps = sorted(step for step, means in by_step.items() if len(means) == len(runs))
    if steps:
        means = ema([np.mean(by_step[step]) for step in steps], smoothing)
        stds = np.array([np.std(by_step[step]) for step in steps])
        axes.plot(steps, means, color='black', linewidth=1.6, label='mean')
        axes.fill_between(steps, means - stds, means + stds, color='grey', alpha=0.25)
    axes.set_xlabel('step')
    axes.set_ylabel('average return')
    if title:
        axes.set_title(title)
    axes.legend(loc='best', fontsize='small')
    figure.savefig(path, format='svg', metadata={'Date': None})
    log.debug('Wrote learning curves to %s', path)
    return path
