# -*- coding: utf-8 -*-
'''
    test_spiking.py
    ~~~~~~~~~~~~~~~

    Test the LIF dynamics, the surrogate gradient and the spiking MLP
'''

# Import python libs
from __future__ import absolute_import
import math

# Import 3rd-party libs
import numpy as np
import pytest

# Import spikingrl libs
from spikingrl.autodiff import (
    Tensor, backward, no_grad, parameter, reduce_sum, spike_fire, square, sub, surrogate_grad
)
from spikingrl.coders import DecoderWeights, EncoderWeights, decode_value, encode
from spikingrl.exceptions import ContractError, DimensionError, DomainError
from spikingrl.spiking import (
    LifParams, LifState, SpikingMlp, SpikingMlpConfig, SpikeTrain, initial_state, lif_integrate, lif_step,
    psp_kernel
)


def _run(currents, params):
    state = initial_state((1, 1), params)
    spikes = []
    for current in currents:
        out, state = lif_step(np.array([[current]]), state, params)
        spikes.append(out.item())
    return spikes, state


@pytest.mark.parametrize('kwargs', [
    {'beta': 0.0},
    {'beta': 1.5},
    {'alpha': 0.0},
    {'v_threshold': 0.0, 'v_reset': 0.0},
])
def test_invalid_lif_params(kwargs):
    with pytest.raises(DomainError):
        LifParams(**kwargs)


def test_fire_and_reset(lif_params):
    spikes, state = _run([1.2], lif_params)
    assert spikes == [1.0]
    assert state.v.item() == pytest.approx(1.2)
    assert state.h.item() == 0.0


def test_leaky_integration(lif_params):
    # 0.6, 0.9, 1.05 -> fire, then 0.6 again
    spikes, state = _run([0.6, 0.6, 0.6, 0.6], lif_params)
    assert spikes == [0.0, 0.0, 1.0, 0.0]
    assert state.h.item() == pytest.approx(0.6)


def test_threshold_is_inclusive(lif_params):
    spikes, _ = _run([1.0], lif_params)
    assert spikes == [1.0]


def test_reset_voltage_added_every_step():
    params = LifParams(v_reset=0.5, v_threshold=2.0)
    state = initial_state((1, 1), params)
    assert state.h.item() == 0.5
    _, state = lif_step(np.array([[0.1]]), state, params)
    # V = 0.5 * 0.5 + 0.1, no spike, H = V + V_reset
    assert state.v.item() == pytest.approx(0.35)
    assert state.h.item() == pytest.approx(0.85)


def test_lif_shape_mismatch(lif_params):
    with pytest.raises(DimensionError):
        lif_step(np.ones((2, 3)), initial_state((2, 2), lif_params), lif_params)


def test_lif_integrate(lif_params):
    state = initial_state((1, 2), lif_params)
    state = lif_integrate(np.array([[1.0, 3.0]]), state, lif_params)
    state = lif_integrate(np.array([[1.0, 3.0]]), state, lif_params)
    assert np.allclose(state.h.values, [[1.5, 4.5]])


def test_surrogate_gradient_peak():
    assert surrogate_grad(0.0, 2.0) == pytest.approx(1.0)
    assert surrogate_grad(1.0, 2.0) == pytest.approx(2.0 / (2.0 * (1.0 + math.pi ** 2)))


def test_spike_fire_backward_uses_surrogate():
    v = parameter([0.5, 1.0, 2.0])
    spikes = spike_fire(v, threshold=1.0, alpha=2.0)
    assert np.array_equal(spikes.values, [0.0, 1.0, 1.0])
    backward(reduce_sum(spikes))
    assert np.allclose(v.grad, surrogate_grad(v.values - 1.0, 2.0))


def test_spike_fire_smooth_mode():
    out = spike_fire(Tensor([1.0]), threshold=1.0, alpha=2.0, smooth=True)
    assert out.item() == pytest.approx(0.5)


def test_config_needs_hidden_layer():
    with pytest.raises(ContractError):
        SpikingMlpConfig([3, 2])
    with pytest.raises(ContractError):
        SpikingMlpConfig([3, 4, 2], T=0)
    with pytest.raises(ContractError):
        SpikingMlpConfig([3, 4, 2], lif=[LifParams()] * 3)


def test_spike_train_must_be_temporal():
    with pytest.raises(DimensionError):
        SpikeTrain(np.ones((2, 3)))


def test_forward_is_binary_and_repeatable(rng):
    net = SpikingMlp(SpikingMlpConfig([3, 8, 2], T=4), rng=rng)
    inputs = (rng.random((4, 5, 3)) > 0.5).astype(float)
    with no_grad():
        first = net.forward_unroll(inputs)
        second = net.forward_unroll(inputs)
    assert first.shape == (4, 5, 2)
    assert first.is_binary()
    assert np.array_equal(first.numpy(), second.numpy())


def test_forward_rejects_wrong_window(rng):
    net = SpikingMlp(SpikingMlpConfig([3, 8, 2], T=4), rng=rng)
    with pytest.raises(DimensionError):
        net.forward_unroll(np.ones((3, 1, 3)))
    with pytest.raises(DimensionError):
        net.forward_unroll(np.ones((4, 1, 2)))


def test_only_last_layer_has_bias(rng):
    net = SpikingMlp(SpikingMlpConfig([3, 4, 4, 2]), rng=rng)
    assert [layer.bias is not None for layer in net.layers] == [False, False, True]


def test_current_output_mode(rng):
    net = SpikingMlp(SpikingMlpConfig([2, 6, 3], T=3, output_mode='current'), rng=rng)
    with no_grad():
        out = net.forward_unroll(np.ones((3, 4, 2)))
    assert out.shape == (3, 4, 3)
    assert not out.is_binary()


def test_recording_shapes(rng):
    net = SpikingMlp(SpikingMlpConfig([3, 5, 4, 2], T=4), rng=rng)
    inputs = np.ones((4, 2, 3))
    with net.recording():
        with no_grad():
            net.forward_unroll(inputs)
            net.forward_unroll(inputs)
    shapes = [recording.shape for recording in net.recordings]
    assert shapes == [(4, 4, 3), (4, 4, 5), (4, 4, 4)]
    with no_grad():
        net.forward_unroll(inputs)
    # nothing is added outside the context
    assert net.recordings[0].shape == (4, 4, 3)


def test_bptt_matches_numerical_gradient_in_smooth_mode(rng):
    lif = LifParams(smooth=True)
    net = SpikingMlp(SpikingMlpConfig([3, 4, 2], lif=lif, T=3), rng=rng)
    inputs = rng.random((3, 2, 3)) * 2.0
    weight = net.layers[0].weight

    def loss_of(values):
        saved = weight.values
        weight.values = values
        try:
            with no_grad():
                return reduce_sum(net.forward_unroll(inputs).data).item()
        finally:
            weight.values = saved

    backward(reduce_sum(net.forward_unroll(inputs).data))
    expected = pytest.helpers.numerics.numerical_gradient(loss_of, weight.values)
    assert pytest.helpers.numerics.max_relative_error(weight.grad, expected, floor=1e-6) < 1e-4


def test_psp_kernel():
    assert psp_kernel(0.0, 10.0, 2.5) == 0.0
    peak = psp_kernel(np.linspace(0.0, 50.0, 501), 10.0, 2.5)
    assert peak.max() > 0
    with pytest.raises(DomainError):
        psp_kernel(1.0, 2.0, 3.0)


def _reference_unroll(net, inputs, params):
    '''
    Hand-written LIF recursion over numpy arrays, layer by layer and step by step
    '''
    hidden = [np.full((inputs.shape[1], layer.out_dim), params.v_reset) for layer in net.layers]
    outputs = []
    for t in range(inputs.shape[0]):
        x = inputs[t]
        for index, layer in enumerate(net.layers):
            current = x @ layer.weight.values
            if layer.bias is not None:
                current = current + layer.bias.values
            v = params.beta * hidden[index] + current
            x = (v >= params.v_threshold).astype(np.float64)
            hidden[index] = v * (1.0 - x) + params.v_reset
        outputs.append(x)
    return np.stack(outputs)


@pytest.mark.parametrize('params', [LifParams(), LifParams(beta=0.9, v_threshold=0.7, v_reset=0.1)])
def test_forward_unroll_matches_the_lif_recursion(rng, params):
    net = SpikingMlp(SpikingMlpConfig([4, 12, 6, 3], lif=params, T=6), rng=rng)
    inputs = (rng.random((6, 10, 4)) < 0.6).astype(np.float64) * 3.0
    with no_grad():
        out = net.forward_unroll(inputs)
    assert np.array_equal(out.numpy(), _reference_unroll(net, inputs, params))


def test_membrane_leaks_by_beta_without_input():
    params = LifParams(beta=0.8, v_threshold=10.0)
    state = LifState(Tensor(np.array([[2.0, -1.0, 0.5]])), Tensor(np.array([[2.0, -1.0, 0.5]])))
    previous = state.h.values
    for _ in range(10):
        spikes, state = lif_step(np.zeros((1, 3)), state, params)
        assert not spikes.values.any()
        assert np.allclose(state.v.values, 0.8 * previous)
        assert np.all(np.abs(state.v.values) <= np.abs(previous))
        previous = state.h.values


def _loss_with(tensor, loss):
    def _loss(values):
        saved = tensor.values
        tensor.values = values
        try:
            with no_grad():
                return loss().item()
        finally:
            tensor.values = saved
    return _loss


@pytest.mark.parametrize('seed', range(10))
def test_coded_network_gradients_in_smooth_mode(seed):
    rng = np.random.default_rng(seed)
    lif = LifParams(smooth=True)
    enc = EncoderWeights(rng.uniform(0.5, 1.5, 4), lif=lif)
    net = SpikingMlp(SpikingMlpConfig([3, 8, 8, 2], lif=lif, T=4), rng=rng)
    dec = DecoderWeights(rng.uniform(0.1, 0.5, 4))
    states = rng.uniform(-1.0, 2.0, size=(5, 3))
    targets = rng.standard_normal((5, 2))

    def loss():
        decoded = decode_value(net.forward_unroll(encode(states, enc)), dec)
        return reduce_sum(square(sub(decoded, Tensor(targets))))

    params = [enc.w_e] + net.parameters() + [dec.w_d]
    backward(loss())
    for tensor in params:
        expected = pytest.helpers.numerics.numerical_gradient(_loss_with(tensor, loss), tensor.values)
        assert pytest.helpers.numerics.max_relative_error(tensor.grad, expected, floor=1e-6) < 1e-3
