# -*- coding: utf-8 -*-
'''
spikingrl.autodiff.nn
~~~~~~~~~~~~~~~~~~~~~

Parameter containers and the conventional layers
'''

# Import python libs
from __future__ import absolute_import
import copy
import logging
from collections import OrderedDict

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.autodiff.tensor import Tensor, parameter, matmul, add, relu, tanh
from spikingrl.exceptions import ContractError, DimensionError

log = logging.getLogger(__name__)

ACTIVATIONS = {
    'relu': relu,
    'tanh': tanh,
}


class Module(object):
    '''
    Base class of everything holding tensors.

    Public attributes which are tensors, modules or lists of modules are walked in
    definition order; attributes starting with an underscore are private state and
    never part of the parameters.
    '''

    def named_tensors(self, prefix=''):
        for name, value in vars(self).items():
            if name.startswith('_'):
                continue
            full_name = prefix + name
            if isinstance(value, Tensor):
                yield full_name, value
            elif isinstance(value, Module):
                for item in value.named_tensors(full_name + '.'):
                    yield item
            elif isinstance(value, (list, tuple)):
                for index, child in enumerate(value):
                    if isinstance(child, Module):
                        for item in child.named_tensors('{}.{}.'.format(full_name, index)):
                            yield item
                    elif isinstance(child, Tensor):
                        yield '{}.{}'.format(full_name, index), child

    def named_parameters(self, prefix=''):
        for name, tensor in self.named_tensors(prefix):
            if tensor.requires_grad:
                yield name, tensor

    def parameters(self):
        return [tensor for _, tensor in self.named_parameters()]

    def zero_grad(self):
        for tensor in self.parameters():
            tensor.grad = None

    def state_dict(self):
        return OrderedDict((name, tensor.values.copy()) for name, tensor in self.named_tensors())

    def load_state_dict(self, state):
        own = OrderedDict(self.named_tensors())
        if list(own) != list(state):
            raise ContractError('State keys {} do not match the module keys {}'.format(list(state), list(own)))
        for name, tensor in own.items():
            values = np.asarray(state[name], dtype=np.float64)
            if values.shape != tensor.shape:
                raise ContractError('{}: shape {} does not match {}'.format(name, values.shape, tensor.shape))
            tensor.values = values.copy()

    def clone(self):
        '''
        Deep copy of the module, sharing nothing with the original
        '''
        return copy.deepcopy(self)

    def forward(self, *args, **kwargs):
        raise NotImplementedError

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)


def uniform_init(rng, fan_in, shape):
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Linear(Module):
    '''
    Fully connected layer ``x @ weight + bias`` initialised uniform in +/- 1/sqrt(fan_in)
    '''

    def __init__(self, in_dim, out_dim, bias=True, rng=None):
        if in_dim <= 0 or out_dim <= 0:
            raise DimensionError('Linear layer widths must be positive, got {}x{}'.format(in_dim, out_dim))
        rng = rng if rng is not None else np.random.default_rng()
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.weight = parameter(uniform_init(rng, in_dim, (in_dim, out_dim)))
        self.bias = parameter(uniform_init(rng, in_dim, (out_dim,))) if bias else None

    def forward(self, x):
        if x.shape[-1] != self.in_dim:
            raise DimensionError('Expected {} input features, got shape {}'.format(self.in_dim, x.shape))
        out = matmul(x, self.weight)
        if self.bias is not None:
            out = add(out, self.bias)
        return out


class Mlp(Module):
    '''
    Stack of Linear layers with an activation between consecutive layers
    '''

    def __init__(self, sizes, activation='relu', bias=True, rng=None):
        if len(sizes) < 2:
            raise DimensionError('An MLP needs at least an input and an output width')
        if activation not in ACTIVATIONS:
            raise ContractError('Unknown activation {!r}'.format(activation))
        rng = rng if rng is not None else np.random.default_rng()
        self.sizes = list(sizes)
        self.activation = activation
        self.layers = [Linear(i, o, bias=bias, rng=rng) for i, o in zip(sizes[:-1], sizes[1:])]

    def forward(self, x):
        act = ACTIVATIONS[self.activation]
        for index, layer in enumerate(self.layers):
            x = layer(x)
            if index < len(self.layers) - 1:
                x = act(x)
        return x
