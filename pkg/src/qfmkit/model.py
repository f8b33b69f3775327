"""Data re-uploading model: interleaved trainable and encoding blocks.

The full circuit is ``W(L+1) S(x) W(L) ... S(x) W(1)`` where every ``S(x)``
places one Pauli rotation with angle ``x`` on each qubit.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .ansatz import AnsatzSpec, build_ansatz, params_per_block
from .circuit import ENCODING, CircuitIR, Op, run_density, run_statevectors
from .noise import NoiseParams, compile_noisy
from .pauli import PauliObservable
from .state import QuantumState, expectation_batch, expectation_density_batch

ENCODING_AXES = {"X": "RX", "Y": "RY", "Z": "RZ"}


@dataclass(frozen=True)
class ModelConfig:
    ansatz: str
    n_qubits: int
    n_layers: int = 1
    encoding: Union[str, Sequence[str]] = "X"
    observable: Optional[str] = None
    noise: Optional[NoiseParams] = None
    seed: int = 0
    axes: tuple = field(init=False, repr=False)

    def __post_init__(self):
        enc = [self.encoding] if isinstance(self.encoding, str) else list(self.encoding)
        enc = [e.strip().upper().lstrip("R") for e in enc]
        if len(enc) == 1:
            enc = enc * self.n_qubits
        if len(enc) != self.n_qubits:
            raise ValueError("encoding needs one axis or one per qubit")
        for e in enc:
            if e not in ENCODING_AXES:
                raise ValueError(f"encoding axis must be X, Y or Z, got {e!r}")
        object.__setattr__(self, "axes", tuple(enc))

    @property
    def spec(self) -> AnsatzSpec:
        return AnsatzSpec(self.ansatz, self.n_qubits, self.n_layers)


def construct(config: ModelConfig) -> CircuitIR:
    spec = config.spec
    n = spec.n_qubits
    observable = (
        PauliObservable.parse(config.observable, n) if config.observable else PauliObservable.z(0, n)
    )
    ops = []
    for layer in range(spec.n_layers + 1):
        ops += build_ansatz(spec, layer).ops
        if layer < spec.n_layers:
            ops += [Op(ENCODING_AXES[config.axes[q]], (q,), ENCODING, (0,)) for q in range(n)]
    return CircuitIR(
        n,
        tuple(ops),
        params_per_block(spec.name, n) * (spec.n_layers + 1),
        observable=observable,
        name=spec.name,
        meta={"n_layers": spec.n_layers, "encoding": "".join(config.axes), "noise": config.noise},
    )


def evaluate_batch(ir: CircuitIR, params, x) -> np.ndarray:
    """Noiseless ``f(x)`` for a batch; ``params`` is ``(B, p)`` or ``(p,)``, ``x`` scalar or ``(B,)``."""
    require_noiseless(ir)
    return _evaluate_pure(ir, params, x)


def _evaluate_pure(ir, params, x):
    params = np.atleast_2d(np.asarray(params, dtype=float))
    if params.shape[1] != ir.param_count:
        raise ValueError(f"expected {ir.param_count} parameters, got {params.shape[1]}")
    states = run_statevectors(ir.n_qubits, ir.ops, params, x)
    return expectation_batch(states, ir.observable)


def evaluate(
    ir: CircuitIR,
    params,
    x: float,
    noise: Optional[NoiseParams] = None,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Model output ``<0| U^dag O U |0>`` at one input.

    The pure simulator is used whenever the compiled program has no channels;
    otherwise the state is evolved as a density matrix.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (ir.param_count,):
        raise ValueError(f"expected {ir.param_count} parameters, got shape {params.shape}")
    if noise is None:
        noise = ir.meta.get("noise")
    if not np.all(np.isfinite(params)) or not np.isfinite(x):
        raise ValueError("parameters and x must be finite")
    program = compile_noisy(ir, noise, rng)
    if program.is_unitary:
        states = run_statevectors(ir.n_qubits, program.items, params[None], x)
        return float(expectation_batch(states, ir.observable)[0])
    rhos = run_density(ir.n_qubits, program.items, params[None], x)
    return float(expectation_density_batch(rhos, ir.observable)[0])


def sample_parameters(ir: CircuitIR, n_samples: int, rng: np.random.Generator) -> np.ndarray:
    """``n_samples`` i.i.d. uniform ``[0, 2pi)`` parameter vectors, shape ``(n_samples, p)``."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    return rng.uniform(0.0, 2 * np.pi, size=(n_samples, ir.param_count))


def require_noiseless(ir: CircuitIR) -> None:
    noise = ir.meta.get("noise")
    if noise is not None and not noise.is_zero:
        raise ValueError("this operation needs a noiseless model")


def statevector(ir: CircuitIR, params, x: float = 0.0) -> QuantumState:
    require_noiseless(ir)
    params = np.asarray(params, dtype=float)
    if params.shape != (ir.param_count,):
        raise ValueError(f"expected {ir.param_count} parameters, got shape {params.shape}")
    return QuantumState(run_statevectors(ir.n_qubits, ir.ops, params[None], x)[0], ir.n_qubits)
