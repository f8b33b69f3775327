"""Expressibility as the KL divergence between sampled and Haar fidelity histograms."""

from dataclasses import dataclass

import numpy as np

from ._parallel import chunked_map
from .circuit import CircuitIR, run_statevectors
from .model import require_noiseless, sample_parameters

DEFAULT_BINS = 75


@dataclass
class FidelityHistogram:
    n_bins: int
    edges: np.ndarray
    model_probs: np.ndarray
    haar_probs: np.ndarray

    def __post_init__(self):
        if self.n_bins < 2:
            raise ValueError("n_bins must be >= 2")
        for probs in (self.model_probs, self.haar_probs):
            if probs.shape != (self.n_bins,) or abs(probs.sum() - 1) > 1e-9:
                raise ValueError("bin masses must have n_bins entries summing to 1")
        if np.any(self.haar_probs <= 0):
            raise ValueError("reference bin masses must be strictly positive")


def pair_fidelities(ir: CircuitIR, pairs: np.ndarray, x: float = 0.0) -> np.ndarray:
    """``|<psi(a)|psi(b)>|**2`` for parameter pairs of shape ``(B, 2, p)``."""
    a = run_statevectors(ir.n_qubits, ir.ops, pairs[:, 0], x)
    b = run_statevectors(ir.n_qubits, ir.ops, pairs[:, 1], x)
    return np.abs(np.einsum("bi,bi->b", a.conj(), b)) ** 2


def sample_fidelities(
    ir: CircuitIR, n_samples: int, rng: np.random.Generator, x: float = 0.0, threads: int = 1
) -> np.ndarray:
    """Fidelities of ``n_samples`` independent uniform parameter pairs at fixed input ``x``."""
    require_noiseless(ir)
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    flat = sample_parameters(ir, 2 * n_samples, rng)
    pairs = flat.reshape(n_samples, 2, ir.param_count)
    fids = chunked_map(lambda blk: pair_fidelities(ir, blk, x), pairs, threads)
    return np.clip(fids, 0.0, 1.0)


def haar_bin_probabilities(n_qubits: int, n_bins: int) -> np.ndarray:
    """Exact bin masses of the Haar fidelity density ``(N-1)(1-F)**(N-2)``, ``N = 2**n``."""
    if n_qubits < 1 or n_bins < 2:
        raise ValueError("need n_qubits >= 1 and n_bins >= 2")
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    tail = (1.0 - edges) ** (2**n_qubits - 1)
    return tail[:-1] - tail[1:]


def fidelity_histogram(fidelities, n_qubits: int, n_bins: int = DEFAULT_BINS) -> FidelityHistogram:
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    counts, _ = np.histogram(np.clip(fidelities, 0.0, 1.0), bins=edges)
    return FidelityHistogram(n_bins, edges, counts / counts.sum(), haar_bin_probabilities(n_qubits, n_bins))


def kl_divergence(hist: FidelityHistogram) -> float:
    p, q = hist.model_probs, hist.haar_probs
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def expressibility_pipeline(
    ir: CircuitIR,
    n_samples: int,
    n_bins: int = DEFAULT_BINS,
    rng: np.random.Generator = None,
    x: float = 0.0,
    threads: int = 1,
) -> float:
    """KL divergence of the model's fidelity histogram from the Haar one (lower = more expressive)."""
    rng = rng if rng is not None else np.random.default_rng()
    fids = sample_fidelities(ir, n_samples, rng, x=x, threads=threads)
    return kl_divergence(fidelity_histogram(fids, ir.n_qubits, n_bins))


def haar_random_states(n_qubits: int, n_samples: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed pure states from normalised complex Gaussian vectors."""
    dim = 1 << n_qubits
    z = rng.standard_normal((n_samples, dim)) + 1j * rng.standard_normal((n_samples, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)
