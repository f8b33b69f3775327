import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfmkit import pauli
from qfmkit.ansatz import TEMPLATES
from qfmkit.circuit import ENCODING, TRAINABLE, CircuitIR, Op
from qfmkit.fourier import (
    FourierTree,
    _monomial_expansion,
    analytical_spectrum,
    coefficient_stats,
    dft_spectrum,
    max_frequency,
    mean_coefficient_magnitudes,
    spectra_for,
)
from qfmkit.model import ModelConfig, construct, evaluate_batch, sample_parameters
from qfmkit.noise import NoiseParams
from qfmkit.pauli import PauliObservable

from .conftest import dense_unitary


def cos_model():
    return construct(ModelConfig("No_Entangling", 1, 1))


def ry_then_encode():
    ops = (Op("RY", (0,), TRAINABLE, (0,)), Op("RX", (0,), ENCODING, (0,)))
    return CircuitIR(1, ops, 1)


def lstsq_spectrum(ir, params, k, rng):
    # independent oracle: least squares on random off-grid inputs
    xs = rng.uniform(-np.pi, np.pi, 6 * k + 6)
    f = evaluate_batch(ir, np.broadcast_to(params, (xs.size, params.size)), xs)
    basis = np.exp(1j * np.outer(xs, np.arange(-k, k + 1)))
    return np.linalg.lstsq(basis, f.astype(complex), rcond=None)[0]


@pytest.mark.parametrize("n,layers,expected", [(1, 1, 1), (4, 1, 4), (4, 2, 8)])
def test_max_frequency(n, layers, expected):
    assert max_frequency(construct(ModelConfig("Circuit_19" if n > 1 else "No_Entangling", n, layers))) == expected


def test_no_encoding_rejected():
    ir = construct(ModelConfig("No_Entangling", 1))
    bare = CircuitIR(1, ir.ops[:1], ir.param_count)
    with pytest.raises(ValueError):
        dft_spectrum(bare, np.zeros(6))


@pytest.mark.parametrize("engine", [dft_spectrum, analytical_spectrum])
def test_cos_model_coefficients(engine):
    spec = engine(cos_model(), np.zeros(6))
    np.testing.assert_array_equal(spec.frequencies, [-1, 0, 1])
    np.testing.assert_allclose(spec.coefficients, [0.5, 0, 0.5], atol=1e-10)


@pytest.mark.parametrize("theta", [0.0, np.pi / 2, 0.9, -2.2])
def test_ry_before_encoding(theta):
    ir = ry_then_encode()
    for engine in (dft_spectrum, analytical_spectrum):
        spec = engine(ir, [theta])
        assert spec.coefficient(1) == pytest.approx(np.cos(theta) / 2, abs=1e-10)
        assert spec.coefficient(-1) == pytest.approx(np.cos(theta) / 2, abs=1e-10)
        assert abs(spec.coefficient(0)) < 1e-10


def test_ry_tree_leaves_hand_expansion():
    theta = 0.7
    tree = FourierTree(ry_then_encode(), np.array([theta]))
    leaves = {(lab, a, b): w for lab, a, b, w in tree.leaves()}
    # Z -> cos x Z + sin x Y through RX(x); then Z -> cos t Z - sin t X through RY(t)
    assert set(leaves) == {("Z", 1, 0), ("X", 1, 0), ("Y", 0, 1)}
    assert leaves[("Z", 1, 0)] == pytest.approx(np.cos(theta))
    assert leaves[("X", 1, 0)] == pytest.approx(-np.sin(theta))
    assert leaves[("Y", 0, 1)] == pytest.approx(1.0)


@pytest.mark.parametrize("name", ["Circuit_19", "Strongly_Entangling", "Circuit_9", "Hardware_Efficient"])
def test_tree_reconstructs_heisenberg_operator(name):
    ir = construct(ModelConfig(name, 2, 1, observable="Z0Z1"))
    rng = np.random.default_rng(3)
    params = sample_parameters(ir, 1, rng)[0]
    tree = FourierTree(ir, params)
    for x in rng.uniform(-3, 3, 3):
        u = dense_unitary(ir.bind(params, x), 2)
        target = u.conj().T @ ir.observable.matrix() @ u
        built = sum(w * np.cos(x) ** a * np.sin(x) ** b * pauli.matrix(lab) for lab, a, b, w in tree.leaves())
        np.testing.assert_allclose(built, target, atol=1e-10)


def test_untouched_qubit_observable():
    ops = (Op("Rot", (0,), TRAINABLE, (0, 1, 2)), Op("RX", (0,), ENCODING, (0,)))
    ir = CircuitIR(2, ops, 3, observable=PauliObservable("IZ"))
    params = np.array([0.3, 1.1, -0.4])
    for spec in (analytical_spectrum(ir, params), dft_spectrum(ir, params)):
        np.testing.assert_allclose(spec.coefficients, [0, 1, 0], atol=1e-12)
    assert analytical_spectrum(ir, params).support == frozenset({0})


@settings(max_examples=30, deadline=None)
@given(a=st.integers(0, 4), b=st.integers(0, 4), x=st.floats(-4, 4))
def test_monomial_expansion(a, b, x):
    k = 8
    series = _monomial_expansion(a, b, k) @ np.exp(1j * x * np.arange(-k, k + 1))
    assert series == pytest.approx(np.cos(x) ** a * np.sin(x) ** b, abs=1e-12)


@pytest.mark.parametrize("name", sorted(set(TEMPLATES) - {"No_Ansatz"}))
def test_both_engines_match_lstsq_oracle(name):
    ir = construct(ModelConfig(name, 3, 1))
    rng = np.random.default_rng(11)
    params = sample_parameters(ir, 1, rng)[0]
    ref = lstsq_spectrum(ir, params, max_frequency(ir), rng)
    np.testing.assert_allclose(dft_spectrum(ir, params).coefficients, ref, atol=1e-9)
    np.testing.assert_allclose(analytical_spectrum(ir, params).coefficients, ref, atol=1e-9)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6), x=st.floats(-10, 10))
def test_series_reproduces_model(seed, x):
    ir = construct(ModelConfig("Circuit_15", 2, 2, observable="X0Z1"))
    params = sample_parameters(ir, 1, np.random.default_rng(seed))[0]
    f = evaluate_batch(ir, params, x)[0]
    spec = analytical_spectrum(ir, params)
    assert spec(x).real == pytest.approx(f, abs=1e-10)
    assert abs(spec(x).imag) < 1e-10


def test_conjugate_symmetry_and_parseval():
    ir = construct(ModelConfig("Circuit_19", 3, 2))
    params = sample_parameters(ir, 1, np.random.default_rng(4))[0]
    for spec in (dft_spectrum(ir, params), analytical_spectrum(ir, params)):
        c = spec.coefficients
        np.testing.assert_allclose(c, np.conj(c[::-1]), atol=1e-12)
        m = c.size
        xs = 2 * np.pi * np.arange(m) / m
        f = evaluate_batch(ir, np.broadcast_to(params, (m, params.size)), xs)
        assert np.sum(np.abs(c) ** 2) == pytest.approx(np.mean(f**2), abs=1e-10)


def test_absent_frequencies_are_exact_zeros():
    ir = construct(ModelConfig("Circuit_9", 2, 1))
    params = sample_parameters(ir, 1, np.random.default_rng(0))[0]
    spec = analytical_spectrum(ir, params)
    outside = [w for w in spec.frequencies if w not in spec.support]
    for w in outside:
        assert spec.coefficient(w) == 0


def test_threshold_filters_support():
    stats = coefficient_stats(spectra_for(cos_model(), np.zeros((1, 6)), "dft"), 1, "dft", 1e-10)
    assert stats.support == frozenset({-1, 1})


def test_deterministic_model_means_equal_single_shot():
    single = spectra_for(cos_model(), np.zeros((1, 6)), "analytical")
    stats = coefficient_stats(np.repeat(single, 5, axis=0), 1, "analytical")
    np.testing.assert_allclose(stats.mean_abs, np.abs(single[0]))
    assert stats.n_samples == 5


def test_mean_coefficient_magnitudes_agree_between_methods():
    ir = construct(ModelConfig("Circuit_19", 2, 1))
    a = mean_coefficient_magnitudes(ir, 20, np.random.default_rng(1), "dft")
    b = mean_coefficient_magnitudes(ir, 20, np.random.default_rng(1), "analytical")
    np.testing.assert_allclose(a.mean_abs, b.mean_abs, atol=1e-12)
    assert a.to_dict()["frequencies"] == [-2, -1, 0, 1, 2]


def test_noisy_dft_and_noiseless_only_tree():
    ir = cos_model()
    noisy = dft_spectrum(ir, np.zeros(6), NoiseParams(p_dp=0.75 / 4))
    # attenuation (1 - p*4/3) per depolarising channel, one channel per gate
    atten = (1 - 0.25) ** 3
    np.testing.assert_allclose(noisy.coefficients, [0.5 * atten, 0, 0.5 * atten], atol=1e-12)
    with pytest.raises(ValueError):
        FourierTree(construct(ModelConfig("No_Entangling", 1, noise=NoiseParams(p_dp=0.1))), np.zeros(6))


def test_spectrum_serialisation():
    d = analytical_spectrum(cos_model(), np.zeros(6)).to_dict()
    assert d["method"] == "analytical"
    assert d["frequencies"] == [-1, 0, 1]
    assert d["support"] == [-1, 1]
    assert d["coefficients"][2] == [0.5, 0.0]
