"""Tagged circuit representation and batched execution."""

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from . import gates
from .pauli import PauliObservable
from .state import (
    KrausChannel,
    apply_gate_batch,
    apply_gate_density_batch,
    apply_kraus_density_batch,
)

TRAINABLE = "trainable"
ENCODING = "encoding"
FIXED = "fixed"


@dataclass(frozen=True)
class Op:
    """One gate of a circuit template.

    Each angle of a rotation is ``scale * source + offset`` where ``source`` is
    the trainable parameter ``slots[i]`` (tag ``trainable``) or the input
    feature ``slots[i]`` (tag ``encoding``). ``offsets`` is empty unless a
    coherent gate error has been compiled in.
    """

    kind: str
    wires: Tuple[int, ...]
    tag: str = FIXED
    slots: Tuple[int, ...] = ()
    scales: Tuple[float, ...] = ()
    offsets: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in gates.GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        n_angles = gates.N_ANGLES.get(self.kind, 0)
        if self.tag == FIXED:
            if n_angles:
                raise ValueError(f"{self.kind} needs a trainable or encoding tag")
        elif len(self.slots) != n_angles:
            raise ValueError(f"{self.kind} needs {n_angles} slot(s)")
        if not self.scales and self.slots:
            object.__setattr__(self, "scales", (1.0,) * len(self.slots))

    @property
    def is_rotation(self) -> bool:
        return self.kind in gates.N_ANGLES

    def angles(self, params: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Angles for a batch: ``(B,)`` for single-axis rotations, ``(B, 3)`` for Rot."""
        src = params if self.tag == TRAINABLE else x
        cols = [s * src[:, slot] for slot, s in zip(self.slots, self.scales)]
        if self.offsets:
            cols = [c + o for c, o in zip(cols, self.offsets)]
        if self.kind == "Rot":
            return np.stack(cols, axis=1)
        return cols[0]

    def shifted(self, param_offset: int = 0, wire_offset: int = 0) -> "Op":
        slots = self.slots
        if self.tag == TRAINABLE:
            slots = tuple(s + param_offset for s in slots)
        return replace(self, wires=tuple(w + wire_offset for w in self.wires), slots=slots)


@dataclass(frozen=True)
class CircuitIR:
    n_qubits: int
    ops: Tuple[Op, ...]
    param_count: int
    observable: Optional[PauliObservable] = None
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            for w in op.wires:
                if not 0 <= w < self.n_qubits:
                    raise ValueError(f"wire {w} out of range in {op}")
            if op.tag == TRAINABLE and any(s >= self.param_count for s in op.slots):
                raise ValueError(f"slot out of range in {op}")
        if self.observable is None:
            object.__setattr__(self, "observable", PauliObservable.z(0, self.n_qubits))
        elif self.observable.n_qubits != self.n_qubits:
            raise ValueError("observable size does not match the register")

    @property
    def encoding_gate_count(self) -> int:
        return sum(op.tag == ENCODING for op in self.ops)

    def bind(self, params, x: float = 0.0) -> list:
        """Concrete :class:`~qfmkit.gates.Gate` list for one parameter vector."""
        p = _as_params(params, self.param_count)
        xs = np.array([[float(x)]])
        out = []
        for op in self.ops:
            if op.is_rotation:
                ang = np.atleast_1d(op.angles(p, xs)[0])
                out.append(gates.Gate(op.kind, op.wires, tuple(ang)))
            else:
                out.append(gates.Gate(op.kind, op.wires))
        return out


def _as_params(params, param_count):
    p = np.asarray(params, dtype=float)
    if p.ndim == 1:
        p = p[None]
    if p.shape[1] != param_count:
        raise ValueError(f"expected {param_count} parameters, got {p.shape[1]}")
    if not np.all(np.isfinite(p)):
        raise ValueError("parameters must be finite")
    return p


def _features(x, batch):
    xs = np.asarray(x, dtype=float).reshape(-1)
    if not np.all(np.isfinite(xs)):
        raise ValueError("input x must be finite")
    if xs.size == 1:
        xs = np.full(batch, xs[0])
    if xs.size != batch:
        raise ValueError("x must be scalar or one value per batch row")
    return xs[:, None]


def run_statevectors(n_qubits: int, ops: Sequence[Op], params, x) -> np.ndarray:
    """Pure-state simulation of ``ops`` from ``|0...0>`` for a parameter batch.

    ``params`` is ``(B, p)``; ``x`` is a scalar or ``(B,)``. Returns ``(B, 2**n)``.
    """
    params = np.atleast_2d(np.asarray(params, dtype=float))
    if not np.all(np.isfinite(params)):
        raise ValueError("parameters must be finite")
    batch = params.shape[0]
    xs = _features(x, batch)
    states = np.zeros((batch, 1 << n_qubits), dtype=complex)
    states[:, 0] = 1.0
    for op in ops:
        mats = gates.rotation_batch(op.kind, op.angles(params, xs)) if op.is_rotation else None
        apply_gate_batch(states, op.kind, op.wires, n_qubits, mats)
    return states


def run_density(n_qubits: int, items: Sequence, params, x) -> np.ndarray:
    """Density-matrix simulation of gates interleaved with Kraus channels.

    Returns flattened density matrices, shape ``(B, 4**n)``.
    """
    params = np.atleast_2d(np.asarray(params, dtype=float))
    if not np.all(np.isfinite(params)):
        raise ValueError("parameters must be finite")
    batch = params.shape[0]
    xs = _features(x, batch)
    rhos = np.zeros((batch, 1 << (2 * n_qubits)), dtype=complex)
    rhos[:, 0] = 1.0
    for item in items:
        if isinstance(item, KrausChannel):
            apply_kraus_density_batch(rhos, item, n_qubits)
            continue
        mats = gates.rotation_batch(item.kind, item.angles(params, xs)) if item.is_rotation else None
        apply_gate_density_batch(rhos, item.kind, item.wires, n_qubits, mats)
    return rhos
