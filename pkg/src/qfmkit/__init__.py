"""Quantum Fourier model toolkit: simulation, spectra, expressibility and entanglement."""

__version__ = "0.1.0"

from .ansatz import AnsatzSpec, available, build_ansatz, parameter_count  # noqa: E402
from .circuit import CircuitIR, Op, run_density, run_statevectors  # noqa: E402
from .entanglement import (  # noqa: E402
    EntanglementResult,
    bell_entangling_capability,
    entangling_capability,
    meyer_wallach,
)
from .expressibility import FidelityHistogram, expressibility_pipeline, kl_divergence  # noqa: E402
from .fourier import (  # noqa: E402
    FourierTree,
    Spectrum,
    analytical_spectrum,
    dft_spectrum,
    mean_coefficient_magnitudes,
)
from .gates import Gate  # noqa: E402
from .model import ModelConfig, construct, evaluate, evaluate_batch, sample_parameters  # noqa: E402
from .noise import NoiseParams, compile_noisy  # noqa: E402
from .pauli import PauliObservable  # noqa: E402
from .state import KrausChannel, QuantumState  # noqa: E402

__all__ = [
    "AnsatzSpec",
    "CircuitIR",
    "EntanglementResult",
    "FidelityHistogram",
    "FourierTree",
    "Gate",
    "KrausChannel",
    "ModelConfig",
    "NoiseParams",
    "Op",
    "PauliObservable",
    "QuantumState",
    "Spectrum",
    "analytical_spectrum",
    "available",
    "bell_entangling_capability",
    "build_ansatz",
    "compile_noisy",
    "construct",
    "dft_spectrum",
    "entangling_capability",
    "evaluate",
    "evaluate_batch",
    "expressibility_pipeline",
    "kl_divergence",
    "mean_coefficient_magnitudes",
    "meyer_wallach",
    "parameter_count",
    "run_density",
    "run_statevectors",
    "sample_parameters",
]
