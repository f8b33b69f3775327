"""Pure and mixed register states and the primitive operations on them."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels, gates
from .pauli import PauliObservable


@dataclass
class QuantumState:
    """Register state: a ``2**n`` amplitude vector or a ``2**n x 2**n`` density matrix."""

    data: np.ndarray
    n_qubits: int

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=complex)
        dim = 1 << self.n_qubits
        if self.data.shape not in ((dim,), (dim, dim)):
            raise ValueError(f"shape {self.data.shape} does not fit {self.n_qubits} qubits")

    @property
    def mixed(self) -> bool:
        return self.data.ndim == 2

    @classmethod
    def zero(cls, n_qubits: int, mixed: bool = False) -> "QuantumState":
        vec = np.zeros(1 << n_qubits, dtype=complex)
        vec[0] = 1.0
        state = cls(vec, n_qubits)
        return state.to_density() if mixed else state

    def to_density(self) -> "QuantumState":
        if self.mixed:
            return self
        return QuantumState(np.outer(self.data, self.data.conj()), self.n_qubits)

    def copy(self) -> "QuantumState":
        return QuantumState(self.data.copy(), self.n_qubits)


@dataclass(frozen=True)
class KrausChannel:
    """Trace-preserving channel given by Kraus operators on ``wires``."""

    operators: tuple
    wires: tuple
    name: str = "kraus"

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        wires = (self.wires,) if isinstance(self.wires, (int, np.integer)) else tuple(self.wires)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "wires", tuple(int(w) for w in wires))
        if len(self.wires) != 1:
            # every channel in the noise model is single-qubit
            raise ValueError("only single-qubit channels are supported")
        completeness = sum(k.conj().T @ k for k in ops)
        if not np.allclose(completeness, np.eye(2), atol=1e-9, rtol=0):
            raise ValueError(f"{self.name} channel is not trace-preserving")


# --------------------------------------------------------------------------
# batched helpers shared by the analysis modules
# --------------------------------------------------------------------------
def _check_wires(wires, n_qubits):
    for w in wires:
        if not 0 <= w < n_qubits:
            raise ValueError(f"wire {w} out of range for {n_qubits} qubits")


def apply_gate_batch(states, kind, wires, n_qubits, mats=None):
    """Apply one gate to a ``(B, 2**n)`` batch in place.

    ``mats`` carries ``(B or 1, 2, 2)`` matrices for single-qubit gates; fixed
    two-qubit gates ignore it.
    """
    if kind == "CNOT":
        _kernels.apply_cnot(states, wires[0], wires[1], n_qubits)
    elif kind == "CZ":
        _kernels.apply_cz(states, wires[0], wires[1], n_qubits)
    else:
        if mats is None:
            mats = gates.FIXED_1Q[kind][None]
        _kernels.apply_1q(states, np.ascontiguousarray(mats), wires[0], n_qubits)


def apply_gate_density_batch(rhos, kind, wires, n_qubits, mats=None):
    """``rho -> U rho U^dag`` on a batch of flattened density matrices."""
    total = 2 * n_qubits
    shifted = tuple(w + n_qubits for w in wires)
    if kind in ("CNOT", "CZ"):
        # real permutation/diagonal: conj(U) == U
        apply_gate_batch(rhos, kind, wires, total)
        apply_gate_batch(rhos, kind, shifted, total)
        return
    if mats is None:
        mats = gates.FIXED_1Q[kind][None]
    apply_gate_batch(rhos, kind, wires, total, mats)
    apply_gate_batch(rhos, kind, shifted, total, mats.conj())


def apply_kraus_density_batch(rhos, channel: KrausChannel, n_qubits):
    total = 2 * n_qubits
    (w,) = channel.wires
    out = np.zeros_like(rhos)
    for k in channel.operators:
        tmp = rhos.copy()
        _kernels.apply_1q(tmp, np.ascontiguousarray(k[None]), w, total)
        _kernels.apply_1q(tmp, np.ascontiguousarray(k.conj()[None]), w + n_qubits, total)
        out += tmp
    rhos[...] = out


def _pauli_phases(observable: PauliObservable):
    x, z = observable.masks
    dim = 1 << observable.n_qubits
    idx = np.arange(dim)
    parity = np.array([(int(i) & z).bit_count() & 1 for i in idx])
    phase = (1j) ** ((x & z).bit_count()) * (1 - 2 * parity)
    return x, idx, phase


def expectation_batch(states, observable: PauliObservable):
    """Real ``<psi|O|psi>`` for each row of a ``(B, 2**n)`` batch."""
    x, idx, phase = _pauli_phases(observable)
    vals = np.einsum("bk,bk->b", states[:, idx ^ x].conj(), states * phase)
    return observable.weight * vals.real


def expectation_density_batch(rhos, observable: PauliObservable):
    n = observable.n_qubits
    dim = 1 << n
    x, idx, phase = _pauli_phases(observable)
    mats = rhos.reshape(-1, dim, dim)
    vals = (mats[:, idx, idx ^ x] * phase).sum(axis=1)
    return observable.weight * vals.real


def single_qubit_rdm_batch(states, qubit, n_qubits):
    """Reduced density matrices of one qubit, shape ``(B, 2, 2)``."""
    view = states.reshape(states.shape[0], 1 << qubit, 2, 1 << (n_qubits - 1 - qubit))
    return np.einsum("bais,bajs->bij", view, view.conj())


def purity_batch(states, qubit, n_qubits):
    rho = single_qubit_rdm_batch(states, qubit, n_qubits)
    return np.einsum("bij,bij->b", rho, rho.conj()).real


def marginal_probabilities_batch(probs, wires, n_qubits):
    """Marginal over ``wires`` (caller order) of ``(B, 2**n)`` basis probabilities."""
    view = probs.reshape([probs.shape[0]] + [2] * n_qubits)
    keep = [1 + w for w in wires]
    drop = tuple(ax for ax in range(1, n_qubits + 1) if ax not in keep)
    marg = view.sum(axis=drop) if drop else view
    # remaining axes are in ascending wire order; reorder to caller order
    order = sorted(wires)
    perm = [0] + [1 + order.index(w) for w in wires]
    return np.transpose(marg, perm).reshape(probs.shape[0], -1)


# --------------------------------------------------------------------------
# single-state public surface
# --------------------------------------------------------------------------
def apply_gate(state: QuantumState, gate: gates.Gate) -> QuantumState:
    """Return ``U|psi>`` or ``U rho U^dag`` as a new state."""
    _check_wires(gate.wires, state.n_qubits)
    out = state.copy()
    mats = None if gates.arity(gate.kind) == 2 else gate.matrix()[None]
    if out.mixed:
        buf = out.data.reshape(1, -1)
        apply_gate_density_batch(buf, gate.kind, gate.wires, state.n_qubits, mats)
    else:
        buf = out.data.reshape(1, -1)
        apply_gate_batch(buf, gate.kind, gate.wires, state.n_qubits, mats)
    return out


def apply_kraus(state: QuantumState, channel: KrausChannel) -> QuantumState:
    """``rho -> sum_i K_i rho K_i^dag``; pure inputs are promoted to density matrices."""
    _check_wires(channel.wires, state.n_qubits)
    out = state.to_density().copy()
    apply_kraus_density_batch(out.data.reshape(1, -1), channel, state.n_qubits)
    return out


def expectation(state: QuantumState, observable: PauliObservable) -> float:
    if observable.n_qubits != state.n_qubits:
        raise ValueError("observable and state sizes differ")
    buf = state.data.reshape(1, -1)
    if state.mixed:
        return float(expectation_density_batch(buf, observable)[0])
    return float(expectation_batch(buf, observable)[0])


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """Squared overlap ``|<a|b>|**2`` of two pure states."""
    if a.mixed or b.mixed:
        raise ValueError("fidelity is defined here for pure states only")
    if a.n_qubits != b.n_qubits:
        raise ValueError("states have different numbers of qubits")
    return float(abs(np.vdot(a.data, b.data)) ** 2)


def subsystem_purity(state: QuantumState, qubit: int) -> float:
    """``Tr[rho_k^2]`` of the single-qubit reduced state of ``qubit``."""
    _check_wires([qubit], state.n_qubits)
    n = state.n_qubits
    if state.mixed:
        t = state.data.reshape(1 << qubit, 2, 1 << (n - 1 - qubit), 1 << qubit, 2, 1 << (n - 1 - qubit))
        rho = np.einsum("aibajb->ij", t)
        return float(np.einsum("ij,ij->", rho, rho.conj()).real)
    return float(purity_batch(state.data.reshape(1, -1), qubit, n)[0])


def measurement_probabilities(state: QuantumState, wires: Sequence[int]) -> np.ndarray:
    """Computational-basis marginal over ``wires``, first listed wire most significant."""
    wires = [int(w) for w in wires]
    if len(set(wires)) != len(wires):
        raise ValueError(f"duplicate wires {wires}")
    _check_wires(wires, state.n_qubits)
    probs = np.diagonal(state.data).real if state.mixed else np.abs(state.data) ** 2
    probs = np.clip(probs, 0.0, None)
    return marginal_probabilities_batch(probs[None], wires, state.n_qubits)[0]
