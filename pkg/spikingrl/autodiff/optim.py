# -*- coding: utf-8 -*-
'''
spikingrl.autodiff.optim
~~~~~~~~~~~~~~~~~~~~~~~~

Adam with bias correction
'''

# Import python libs
from __future__ import absolute_import
import logging

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.exceptions import ContractError

log = logging.getLogger(__name__)


class AdamState(object):
    '''
    First and second moment estimates for an ordered list of parameters
    '''

    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        params = list(params)
        self.m = [np.zeros_like(param.values) for param in params]
        self.v = [np.zeros_like(param.values) for param in params]
        self.step_count = 0
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps

    def state_dict(self):
        return {
            'm': [moment.copy() for moment in self.m],
            'v': [moment.copy() for moment in self.v],
            'step_count': self.step_count,
        }


def zero_grad(params):
    for param in params:
        param.grad = None


def adam_step(params, state):
    '''
    Apply one Adam update to ``params`` and clear their gradients
    '''
    params = list(params)
    if len(params) != len(state.m):
        raise ContractError(
            'The optimizer state tracks {} parameters, {} were given'.format(len(state.m), len(params))
        )
    for index, param in enumerate(params):
        if param.grad is None:
            raise ContractError('Parameter {} ({}) has no gradient'.format(index, param.name or param.shape))
        if param.shape != state.m[index].shape:
            raise ContractError('Parameter {} changed shape to {}'.format(index, param.shape))

    state.step_count += 1
    correction1 = 1.0 - state.beta1 ** state.step_count
    correction2 = 1.0 - state.beta2 ** state.step_count
    for param, m, v in zip(params, state.m, state.v):
        grad = param.grad
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * grad ** 2
        param.values -= state.lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
        param.grad = None
