"""Entangling capability: Meyer-Wallach purities and the doubled-register Bell test.

Both routes produce ``Q = 2 (1 - mean_k Tr[rho_k^2])``. The Bell route never
forms reduced states; it prepares two copies of the circuit, applies
``CNOT(k -> k+n)`` and ``H(k)`` to every pair and reads the probability that
both qubits of pair ``k`` return 1, which equals ``(1 - Tr[rho_k^2]) / 2``.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ._parallel import chunked_map
from .circuit import CircuitIR, Op, run_statevectors
from .model import require_noiseless, sample_parameters
from .state import purity_batch


@dataclass
class EntanglementResult:
    method: str
    q_per_sample: np.ndarray
    n_samples: int = field(init=False)
    q_mean: float = field(init=False)

    def __post_init__(self):
        self.q_per_sample = np.asarray(self.q_per_sample, dtype=float)
        self.n_samples = int(self.q_per_sample.size)
        self.q_mean = float(self.q_per_sample.mean())

    def to_dict(self) -> dict:
        return {"method": self.method, "q_mean": self.q_mean, "n_samples": self.n_samples}


def _check(ir: CircuitIR):
    require_noiseless(ir)
    if ir.n_qubits < 2:
        raise ValueError("entangling capability needs at least 2 qubits")


def meyer_wallach_q(states: np.ndarray, n_qubits: int) -> np.ndarray:
    """Per-state ``Q`` for a ``(B, 2**n)`` batch of pure states."""
    purities = np.stack([purity_batch(states, k, n_qubits) for k in range(n_qubits)], axis=1)
    return 2.0 * (1.0 - purities.mean(axis=1))


def bell_doubled_circuit(ir: CircuitIR) -> CircuitIR:
    """Two copies of ``ir`` sharing parameter slots, then per-pair CNOT and H."""
    n = ir.n_qubits
    ops = list(ir.ops) + [op.shifted(wire_offset=n) for op in ir.ops]
    ops += [Op("CNOT", (k, k + n)) for k in range(n)]
    ops += [Op("H", (k,)) for k in range(n)]
    return CircuitIR(2 * n, tuple(ops), ir.param_count, name=f"bell[{ir.name}]", meta=dict(ir.meta))


def odd_parity_probabilities(probs: np.ndarray, n_qubits: int) -> np.ndarray:
    """``P(k = 1 and k+n = 1)`` for each pair, from ``(B, 4**n)`` doubled-register probabilities."""
    view = probs.reshape([probs.shape[0]] + [2] * (2 * n_qubits))
    out = []
    for k in range(n_qubits):
        idx = [slice(None)] * (2 * n_qubits + 1)
        idx[1 + k] = 1
        idx[1 + k + n_qubits] = 1
        out.append(view[tuple(idx)].reshape(probs.shape[0], -1).sum(axis=1))
    return np.stack(out, axis=1)


def bell_q(doubled: CircuitIR, params: np.ndarray, x: float = 0.0) -> np.ndarray:
    n = doubled.n_qubits // 2
    states = run_statevectors(doubled.n_qubits, doubled.ops, params, x)
    p_odd = odd_parity_probabilities(np.abs(states) ** 2, n)
    return 2.0 * (1.0 - (1.0 - 2.0 * p_odd).mean(axis=1))


def meyer_wallach_from_params(ir: CircuitIR, params: np.ndarray, x: float = 0.0, threads: int = 1):
    _check(ir)
    fn = lambda blk: meyer_wallach_q(run_statevectors(ir.n_qubits, ir.ops, blk, x), ir.n_qubits)  # noqa: E731
    return EntanglementResult("meyer_wallach", chunked_map(fn, np.atleast_2d(params), threads))


def bell_from_params(ir: CircuitIR, params: np.ndarray, x: float = 0.0, threads: int = 1):
    _check(ir)
    doubled = bell_doubled_circuit(ir)
    fn = lambda blk: bell_q(doubled, blk, x)  # noqa: E731
    return EntanglementResult("bell", chunked_map(fn, np.atleast_2d(params), threads))


def meyer_wallach(
    ir: CircuitIR, n_samples: int, rng: np.random.Generator, x: float = 0.0, threads: int = 1
) -> EntanglementResult:
    _check(ir)
    return meyer_wallach_from_params(ir, sample_parameters(ir, n_samples, rng), x, threads)


def bell_entangling_capability(
    ir: CircuitIR, n_samples: int, rng: np.random.Generator, x: float = 0.0, threads: int = 1
) -> EntanglementResult:
    _check(ir)
    return bell_from_params(ir, sample_parameters(ir, n_samples, rng), x, threads)


def entangling_capability(
    ir: CircuitIR,
    n_samples: int,
    rng: np.random.Generator,
    method: str = "meyer_wallach",
    x: float = 0.0,
    threads: int = 1,
) -> List[EntanglementResult]:
    """Run one or both methods on a single shared set of parameter samples."""
    _check(ir)
    methods = {"meyer_wallach": meyer_wallach_from_params, "bell": bell_from_params}
    chosen = list(methods) if method == "both" else [method]
    if any(m not in methods for m in chosen):
        raise ValueError(f"unknown method {method!r}")
    params = sample_parameters(ir, n_samples, rng)
    return [methods[m](ir, params, x, threads) for m in chosen]


def max_disagreement(results: List[EntanglementResult]) -> Optional[float]:
    if len(results) < 2:
        return None
    return float(np.max(np.abs(results[0].q_per_sample - results[1].q_per_sample)))
