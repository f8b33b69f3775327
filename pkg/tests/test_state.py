import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfmkit import gates
from qfmkit.noise import amplitude_damping, bit_flip, depolarizing
from qfmkit.pauli import PauliObservable
from qfmkit.state import (
    KrausChannel,
    QuantumState,
    apply_gate,
    apply_kraus,
    expectation,
    fidelity,
    measurement_probabilities,
    subsystem_purity,
)

from .conftest import dense_gate, dense_purity

Z1 = PauliObservable("Z")
H0 = gates.Gate("H", (0,))


def bell():
    s = apply_gate(QuantumState.zero(2), H0)
    return apply_gate(s, gates.Gate("CNOT", (0, 1)))


def ghz(n):
    s = apply_gate(QuantumState.zero(n), H0)
    for q in range(n - 1):
        s = apply_gate(s, gates.Gate("CNOT", (q, q + 1)))
    return s


def random_state(n, seed):
    r = np.random.default_rng(seed)
    v = r.standard_normal(1 << n) + 1j * r.standard_normal(1 << n)
    return QuantumState(v / np.linalg.norm(v), n)


def test_state_shape_validation():
    with pytest.raises(ValueError):
        QuantumState(np.ones(3), 2)


def test_bell_state_amplitudes():
    np.testing.assert_allclose(bell().data, np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), data=st.data())
def test_apply_gate_pure_and_mixed_match_dense(seed, data):
    n = 3
    kind = data.draw(st.sampled_from(sorted(gates.GATE_KINDS)))
    wires = tuple(data.draw(st.permutations(range(n)))[: gates.arity(kind)])
    angles = tuple(data.draw(st.lists(st.floats(-7, 7), min_size=gates.N_ANGLES.get(kind, 0), max_size=gates.N_ANGLES.get(kind, 0))))
    g = gates.Gate(kind, wires, angles)
    u = dense_gate(g, n)
    s = random_state(n, seed)
    out = apply_gate(s, g)
    np.testing.assert_allclose(out.data, u @ s.data, atol=1e-12)
    rho = apply_gate(s.to_density(), g)
    np.testing.assert_allclose(rho.data, u @ s.to_density().data @ u.conj().T, atol=1e-12)
    # norm is preserved
    assert abs(np.linalg.norm(out.data) - 1) < 1e-12


@pytest.mark.parametrize(
    "ops,state,expected",
    [
        (bit_flip(0.5), np.diag([1, 0]), 0.0),
        (depolarizing(0.75), np.diag([1, 0]), 1 - 4 * 0.75 / 3),
        (amplitude_damping(1.0), np.diag([0, 1]), 1.0),
    ],
)
def test_kraus_cases(ops, state, expected):
    out = apply_kraus(QuantumState(state, 1), KrausChannel(tuple(ops), (0,)))
    assert abs(np.trace(out.data) - 1) < 1e-9
    assert expectation(out, Z1) == pytest.approx(expected, abs=1e-12)


def test_bit_flip_half_is_balanced_mixture():
    out = apply_kraus(QuantumState.zero(1, mixed=True), KrausChannel(tuple(bit_flip(0.5)), (0,)))
    np.testing.assert_allclose(out.data, np.eye(2) / 2, atol=1e-15)


def test_kraus_promotes_pure_state():
    out = apply_kraus(QuantumState.zero(2), KrausChannel(tuple(bit_flip(1.0)), (1,)))
    assert out.mixed
    np.testing.assert_allclose(np.diag(out.data).real, [0, 1, 0, 0])


def test_non_trace_preserving_channel_rejected():
    with pytest.raises(ValueError):
        KrausChannel((np.eye(2) * 0.5,), (0,))


def test_expectation_cases():
    assert expectation(QuantumState.zero(1), Z1) == 1.0
    s = apply_gate(QuantumState.zero(1), gates.Gate("RX", (0,), (np.pi / 2,)))
    assert expectation(s, Z1) == pytest.approx(0.0, abs=1e-15)
    assert expectation(bell(), PauliObservable("ZZ")) == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), label=st.text("IXYZ", min_size=3, max_size=3), w=st.floats(-2, 2))
def test_expectation_matches_dense(seed, label, w):
    s = random_state(3, seed)
    obs = PauliObservable(label, w)
    ref = np.real(s.data.conj() @ obs.matrix() @ s.data)
    assert expectation(s, obs) == pytest.approx(ref, abs=1e-12)
    assert expectation(s.to_density(), obs) == pytest.approx(ref, abs=1e-12)


def test_fidelity_cases():
    zero, one = QuantumState.zero(1), QuantumState(np.array([0, 1]), 1)
    plus = apply_gate(zero, H0)
    assert fidelity(zero, zero) == pytest.approx(1.0)
    assert fidelity(zero, one) == 0.0
    assert fidelity(zero, plus) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        fidelity(zero.to_density(), zero)


def test_subsystem_purity_cases():
    assert subsystem_purity(QuantumState.zero(2), 0) == pytest.approx(1.0)
    assert subsystem_purity(bell(), 0) == pytest.approx(0.5)
    assert subsystem_purity(ghz(4), 2) == pytest.approx(0.5)
    assert subsystem_purity(bell().to_density(), 1) == pytest.approx(0.5)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), k=st.integers(0, 3))
def test_subsystem_purity_matches_dense_partial_trace(seed, k):
    s = random_state(4, seed)
    ref = dense_purity(s.data, k, 4)
    assert subsystem_purity(s, k) == pytest.approx(ref, abs=1e-12)
    assert subsystem_purity(s.to_density(), k) == pytest.approx(ref, abs=1e-12)
    assert 0.5 - 1e-12 <= ref <= 1 + 1e-12


def test_measurement_probabilities_cases():
    np.testing.assert_allclose(measurement_probabilities(QuantumState.zero(1), [0]), [1, 0])
    np.testing.assert_allclose(measurement_probabilities(apply_gate(QuantumState.zero(1), H0), [0]), [0.5, 0.5])
    np.testing.assert_allclose(measurement_probabilities(bell(), [0, 1]), [0.5, 0, 0, 0.5], atol=1e-15)
    with pytest.raises(ValueError):
        measurement_probabilities(bell(), [0, 0])


def test_measurement_probabilities_caller_order():
    # |01>: qubit 1 is set
    s = QuantumState(np.array([0, 1, 0, 0]), 2)
    np.testing.assert_allclose(measurement_probabilities(s, [0, 1]), [0, 1, 0, 0])
    np.testing.assert_allclose(measurement_probabilities(s, [1, 0]), [0, 0, 1, 0])
    np.testing.assert_allclose(measurement_probabilities(s.to_density(), [1]), [0, 1])
