# -*- coding: utf-8 -*-
'''
spikingrl.autodiff.tensor
~~~~~~~~~~~~~~~~~~~~~~~~~

Dense double precision tensors and a reverse-mode tape.

Every differentiable operation executed while the tape is enabled appends one record
holding its inputs, its output and a closure mapping the output gradient onto input
gradients. ``backward`` replays the records in reverse, which is a valid topological
order because records are appended in execution order.
'''

# Import python libs
from __future__ import absolute_import, print_function
import math
import logging
import threading
import contextlib
from collections import namedtuple

# Import 3rd-party libs
import numpy as np

# Import spikingrl libs
from spikingrl.exceptions import ContractError, DimensionError, DomainError

log = logging.getLogger(__name__)

_LOCAL = threading.local()

Record = namedtuple('Record', ('op', 'inputs', 'output', 'backward'))


class Tensor(object):
    '''
    A dense n-dimensional real array taking part in reverse-mode differentiation
    '''

    # Let numpy hand binary operators back to us instead of broadcasting over a Tensor
    __array_ufunc__ = None

    def __init__(self, values, requires_grad=False, name=None):
        if isinstance(values, Tensor):
            values = values.values
        self.values = np.array(values, dtype=np.float64)
        self.requires_grad = bool(requires_grad)
        self.grad = None
        self.name = name

    @classmethod
    def _wrap(cls, values, requires_grad=False):
        tensor = cls.__new__(cls)
        tensor.values = values
        tensor.requires_grad = requires_grad
        tensor.grad = None
        tensor.name = None
        return tensor

    @property
    def shape(self):
        return self.values.shape

    @property
    def ndim(self):
        return self.values.ndim

    @property
    def size(self):
        return self.values.size

    def numpy(self):
        return self.values

    def item(self):
        if self.values.size != 1:
            raise ContractError('item() needs a single element tensor, got shape {}'.format(self.shape))
        return float(self.values.reshape(()))

    def detach(self):
        '''
        Return a copy of this tensor cut from the tape
        '''
        return Tensor(self.values)

    def __repr__(self):
        return 'Tensor(shape={}, requires_grad={}{})'.format(
            self.shape,
            self.requires_grad,
            ', name={!r}'.format(self.name) if self.name else ''
        )

    def __len__(self):
        return len(self.values)

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        if isinstance(other, Tensor):
            return mul(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, Tensor):
            raise ContractError('division is only supported by a constant')
        return scale(self, 1.0 / other)

    def __neg__(self):
        return scale(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, index):
        return getitem(self, index)

    def sum(self, axis=None, keepdims=False):
        return reduce_sum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        return reduce_mean(self, axis=axis, keepdims=keepdims)

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return reshape(self, shape)

    def relu(self):
        return relu(self)

    def tanh(self):
        return tanh(self)

    def exp(self):
        return exp(self)

    def square(self):
        return square(self)


class Tape(object):
    '''
    Ordered record of the operations executed on tensors which require gradients
    '''

    def __init__(self):
        self.records = []
        self.enabled = True

    def __len__(self):
        return len(self.records)

    def record(self, op, inputs, output, backward_fn):
        self.records.append(Record(op, inputs, output, backward_fn))

    def clear(self):
        del self.records[:]

    def backward(self, loss, params=None, retain=False):
        '''
        Populate ``grad`` on every leaf tensor reachable from ``loss``.

        Leaf gradients accumulate across multiple uses and across calls until an
        optimizer step clears them. When ``params`` is given, only those leaves receive
        gradients. The tape is cleared afterwards unless ``retain`` is set.
        '''
        if loss.size != 1:
            raise ContractError('backward needs a scalar loss, got shape {}'.format(loss.shape))
        if not self.records:
            raise ContractError('The tape is empty, there is nothing to differentiate')
        if not loss.requires_grad:
            raise ContractError('The loss does not depend on any tensor requiring gradients')

        produced = set(id(record.output) for record in self.records)
        allowed = None if params is None else set(id(param) for param in params)
        grads = {id(loss): np.ones_like(loss.values)}
        visited = 0
        for record in reversed(self.records):
            out_grad = grads.pop(id(record.output), None)
            if out_grad is None:
                continue
            visited += 1
            for tensor, grad in zip(record.inputs, record.backward(out_grad)):
                if grad is None or not tensor.requires_grad:
                    continue
                key = id(tensor)
                if key in produced:
                    if key in grads:
                        grads[key] = grads[key] + grad
                    else:
                        grads[key] = grad
                elif allowed is None or key in allowed:
                    if tensor.grad is None:
                        tensor.grad = np.array(grad, dtype=np.float64).reshape(tensor.shape)
                    else:
                        tensor.grad = tensor.grad + grad
        log.log(5, 'Backward visited %d of %d tape records', visited, len(self.records))
        if not retain:
            self.clear()


def get_tape():
    '''
    Return the tape of the calling thread
    '''
    tape = getattr(_LOCAL, 'tape', None)
    if tape is None:
        tape = _LOCAL.tape = Tape()
    return tape


@contextlib.contextmanager
def no_grad():
    '''
    Context manager under which no operation is recorded
    '''
    tape = get_tape()
    previous = tape.enabled
    tape.enabled = False
    try:
        yield
    finally:
        tape.enabled = previous


def backward(loss, params=None, retain_tape=False):
    '''
    Differentiate the scalar ``loss`` with respect to every reachable leaf
    '''
    get_tape().backward(loss, params=params, retain=retain_tape)


def as_tensor(value):
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def parameter(values, name=None):
    return Tensor(values, requires_grad=True, name=name)


def _result(op, values, inputs, backward_fn):
    tape = get_tape()
    requires_grad = tape.enabled and any(tensor.requires_grad for tensor in inputs)
    out = Tensor._wrap(values, requires_grad)
    if requires_grad:
        tape.record(op, inputs, out, backward_fn)
    return out


def _broadcast_shape(op, a, b):
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise DimensionError('{}: shapes {} and {} are not broadcastable'.format(op, a.shape, b.shape))


def _unbroadcast(grad, shape):
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape('add', a, b)

    def _backward(grad):
        return _unbroadcast(grad, a.shape), _unbroadcast(grad, b.shape)
    return _result('add', a.values + b.values, (a, b), _backward)


def sub(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape('sub', a, b)

    def _backward(grad):
        return _unbroadcast(grad, a.shape), _unbroadcast(-grad, b.shape)
    return _result('sub', a.values - b.values, (a, b), _backward)


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape('mul', a, b)

    def _backward(grad):
        return _unbroadcast(grad * b.values, a.shape), _unbroadcast(grad * a.values, b.shape)
    return _result('mul', a.values * b.values, (a, b), _backward)


def scale(a, factor):
    a = as_tensor(a)
    factor = float(factor)

    def _backward(grad):
        return (grad * factor,)
    return _result('scale', a.values * factor, (a,), _backward)


def relu(a):
    a = as_tensor(a)
    mask = a.values > 0

    def _backward(grad):
        return (grad * mask,)
    return _result('relu', np.where(mask, a.values, 0.0), (a,), _backward)


def tanh(a):
    a = as_tensor(a)
    out = np.tanh(a.values)

    def _backward(grad):
        return (grad * (1.0 - out ** 2),)
    return _result('tanh', out, (a,), _backward)


def exp(a):
    a = as_tensor(a)
    out = np.exp(a.values)

    def _backward(grad):
        return (grad * out,)
    return _result('exp', out, (a,), _backward)


def square(a):
    a = as_tensor(a)

    def _backward(grad):
        return (grad * 2.0 * a.values,)
    return _result('square', a.values ** 2, (a,), _backward)


_BINARY_KINDS = {'add': add, 'sub': sub, 'mul': mul}
_UNARY_KINDS = {'relu': relu, 'tanh': tanh, 'exp': exp, 'square': square}


def elementwise(a, b=None, kind='add'):
    '''
    Apply the elementwise operation ``kind`` to ``a`` (and ``b``).

    ``scale`` takes the constant factor as ``b``.
    '''
    if kind in _BINARY_KINDS:
        if b is None:
            raise ContractError('elementwise {!r} needs two operands'.format(kind))
        return _BINARY_KINDS[kind](a, b)
    if kind == 'scale':
        if b is None or isinstance(b, Tensor):
            raise ContractError('elementwise scale needs a constant factor')
        return scale(a, b)
    if kind in _UNARY_KINDS:
        if b is not None:
            raise ContractError('elementwise {!r} takes a single operand'.format(kind))
        return _UNARY_KINDS[kind](a)
    raise ContractError('Unknown elementwise kind {!r}'.format(kind))


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError('matmul: cannot multiply {} by {}'.format(a.shape, b.shape))

    def _backward(grad):
        return grad @ b.values.T, a.values.T @ grad
    return _result('matmul', a.values @ b.values, (a, b), _backward)


def surrogate(x, alpha):
    '''
    Smooth firing function h(x) = arctan(pi/2 * alpha * x) / pi + 1/2
    '''
    return np.arctan(math.pi / 2.0 * alpha * x) / math.pi + 0.5


def surrogate_grad(x, alpha):
    '''
    Arctangent surrogate gradient h'(x) = alpha / (2 * (1 + (pi/2 * alpha * x)^2))
    '''
    return alpha / (2.0 * (1.0 + (math.pi / 2.0 * alpha * x) ** 2))


def spike_fire(v, threshold=1.0, alpha=2.0, smooth=False):
    '''
    Heaviside firing of ``v`` against ``threshold`` with the arctangent surrogate as
    backward rule.

    With ``smooth`` set the forward pass emits h(v - threshold) instead of the binary
    spike so that the whole network becomes differentiable for gradient checks.
    '''
    if alpha <= 0:
        raise DomainError('The surrogate width alpha must be positive, got {}'.format(alpha))
    v = as_tensor(v)
    x = v.values - threshold
    if smooth:
        out = surrogate(x, alpha)
    else:
        out = (v.values >= threshold).astype(np.float64)

    def _backward(grad):
        return (grad * surrogate_grad(x, alpha),)
    return _result('spike_fire', out, (v,), _backward)


def reduce_sum(a, axis=None, keepdims=False):
    a = as_tensor(a)

    def _backward(grad):
        if axis is not None and not keepdims:
            grad = np.expand_dims(grad, axis)
        return (np.broadcast_to(grad, a.shape),)
    return _result('sum', np.sum(a.values, axis=axis, keepdims=keepdims), (a,), _backward)


def reduce_mean(a, axis=None, keepdims=False):
    a = as_tensor(a)
    count = a.size if axis is None else np.prod([a.shape[i] for i in np.atleast_1d(axis)])
    if count == 0:
        raise ContractError('Cannot take the mean over an empty axis')
    return scale(reduce_sum(a, axis=axis, keepdims=keepdims), 1.0 / count)


def reshape(a, shape):
    a = as_tensor(a)
    try:
        out = a.values.reshape(shape)
    except ValueError:
        raise DimensionError('Cannot reshape {} into {}'.format(a.shape, shape))

    def _backward(grad):
        return (grad.reshape(a.shape),)
    return _result('reshape', out, (a,), _backward)


def getitem(a, index):
    a = as_tensor(a)
    try:
        out = np.array(a.values[index], dtype=np.float64)
    except IndexError as exc:
        raise DimensionError(str(exc))

    def _backward(grad):
        full = np.zeros(a.shape)
        np.add.at(full, index, grad)
        return (full,)
    return _result('getitem', out, (a,), _backward)


def concat(tensors, axis=-1):
    tensors = [as_tensor(t) for t in tensors]
    try:
        out = np.concatenate([t.values for t in tensors], axis=axis)
    except ValueError as exc:
        raise DimensionError('concat: {}'.format(exc))
    splits = np.cumsum([t.shape[axis] for t in tensors])[:-1]

    def _backward(grad):
        return tuple(np.split(grad, splits, axis=axis))
    return _result('concat', out, tuple(tensors), _backward)


def stack(tensors, axis=0):
    tensors = [as_tensor(t) for t in tensors]
    try:
        out = np.stack([t.values for t in tensors], axis=axis)
    except ValueError as exc:
        raise DimensionError('stack: {}'.format(exc))

    def _backward(grad):
        return tuple(np.take(grad, i, axis=axis) for i in range(len(tensors)))
    return _result('stack', out, tuple(tensors), _backward)


def clip(a, low, high):
    '''
    Clip into [low, high]; the gradient passes only where the input was inside the range
    '''
    a = as_tensor(a)
    inside = (a.values >= low) & (a.values <= high)

    def _backward(grad):
        return (grad * inside,)
    return _result('clip', np.clip(a.values, low, high), (a,), _backward)


def smooth_l1(a):
    '''
    Elementwise 0.5 * x^2 where |x| < 1, |x| - 0.5 otherwise
    '''
    a = as_tensor(a)
    small = np.abs(a.values) < 1.0
    out = np.where(small, 0.5 * a.values ** 2, np.abs(a.values) - 0.5)

    def _backward(grad):
        return (grad * np.where(small, a.values, np.sign(a.values)),)
    return _result('smooth_l1', out, (a,), _backward)
