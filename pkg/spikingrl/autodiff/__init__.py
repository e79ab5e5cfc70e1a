# -*- coding: utf-8 -*-
'''
spikingrl.autodiff
~~~~~~~~~~~~~~~~~~

Reverse-mode automatic differentiation over dense tensors
'''

# Import spikingrl libs
from spikingrl.autodiff.tensor import (  # pylint: disable=unused-import
    Tensor, Tape, get_tape, no_grad, backward, as_tensor, parameter,
    add, sub, mul, scale, relu, tanh, exp, square, elementwise, matmul,
    spike_fire, surrogate, surrogate_grad, reduce_sum, reduce_mean, reshape,
    getitem, concat, stack, clip, smooth_l1
)
from spikingrl.autodiff.optim import AdamState, adam_step, zero_grad  # pylint: disable=unused-import
from spikingrl.autodiff.nn import Module, Linear, Mlp  # pylint: disable=unused-import
