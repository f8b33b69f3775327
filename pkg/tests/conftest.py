"""Shared fixtures and an independent dense-matrix oracle.

The oracle builds every gate as a full ``2**n x 2**n`` matrix with Kronecker
products, so it shares no code with the batched kernels under test.
"""

import numpy as np
import pytest

from qfmkit import gates

P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def embed(op, wire, n):
    """``I (x) .. op .. (x) I`` with qubit 0 leftmost."""
    return np.kron(np.kron(np.eye(1 << wire), op), np.eye(1 << (n - wire - 1)))


def dense_gate(gate, n):
    if gate.kind in ("CNOT", "CZ"):
        c, t = gate.wires
        target = gates.X if gate.kind == "CNOT" else gates.Z
        return embed(P0, c, n) + embed(P1, c, n) @ embed(target, t, n)
    return embed(gate.matrix(), gate.wires[0], n)


def dense_unitary(gate_list, n):
    u = np.eye(1 << n, dtype=complex)
    for g in gate_list:
        u = dense_gate(g, n) @ u
    return u


def dense_state(ir, params, x=0.0):
    psi = np.zeros(1 << ir.n_qubits, dtype=complex)
    psi[0] = 1
    return dense_unitary(ir.bind(params, x), ir.n_qubits) @ psi


def dense_expectation(ir, params, x=0.0):
    psi = dense_state(ir, params, x)
    return float(np.real(psi.conj() @ ir.observable.matrix() @ psi))


def dense_purity(psi, k, n):
    t = psi.reshape(1 << k, 2, 1 << (n - k - 1))
    rho = np.einsum("aib,ajb->ij", t, t.conj())
    return float(np.real(np.trace(rho @ rho)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
