"""Named trainable-block templates.

Controlled rotations of the Sim et al. circuit set are emitted in decomposed
form so that every gate is a Pauli rotation or a Clifford gate::

    CRZ(phi) = RZ_t(phi/2) . CNOT . RZ_t(-phi/2) . CNOT
    CRX(phi) = RX_t(phi/2) . CZ   . RX_t(-phi/2) . CZ

Both halves of a decomposition share one parameter slot.
"""

from dataclasses import dataclass
from typing import Dict, List

from .circuit import TRAINABLE, CircuitIR, Op


@dataclass(frozen=True)
class AnsatzSpec:
    name: str
    n_qubits: int
    n_layers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "name", canonical_name(self.name))
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        if self.n_layers < 1:
            raise ValueError("n_layers must be >= 1")


class _Slots:
    def __init__(self):
        self.next = 0

    def take(self, k=1):
        out = tuple(range(self.next, self.next + k))
        self.next += k
        return out


def _rot1(kind, q, slots):
    return Op(kind, (q,), TRAINABLE, slots.take())


def _rot3(q, slots):
    return Op("Rot", (q,), TRAINABLE, slots.take(3))


def _crz(c, t, slots):
    (s,) = slots.take()
    return [
        Op("RZ", (t,), TRAINABLE, (s,), (0.5,)),
        Op("CNOT", (c, t)),
        Op("RZ", (t,), TRAINABLE, (s,), (-0.5,)),
        Op("CNOT", (c, t)),
    ]


def _crx(c, t, slots):
    (s,) = slots.take()
    return [
        Op("RX", (t,), TRAINABLE, (s,), (0.5,)),
        Op("CZ", (c, t)),
        Op("RX", (t,), TRAINABLE, (s,), (-0.5,)),
        Op("CZ", (c, t)),
    ]


def _rx_rz_layer(n, slots):
    ops = []
    for q in range(n):
        ops.append(_rot1("RX", q, slots))
        ops.append(_rot1("RZ", q, slots))
    return ops


def _no_ansatz(n, slots):
    return []


def _circuit_1(n, slots):
    return _rx_rz_layer(n, slots)


def _circuit_2(n, slots):
    ops = _rx_rz_layer(n, slots)
    ops += [Op("CNOT", (n - q - 1, n - q - 2)) for q in range(n - 1)]
    return ops


def _circuit_3(n, slots):
    ops = _rx_rz_layer(n, slots)
    for q in range(n - 1):
        ops += _crz(n - q - 1, n - q - 2, slots)
    return ops


def _circuit_4(n, slots):
    ops = _rx_rz_layer(n, slots)
    for q in range(n - 1):
        ops += _crx(n - q - 1, n - q - 2, slots)
    return ops


def _circuit_6(n, slots):
    ops = _rx_rz_layer(n, slots)
    for ql in range(n):
        for q in range(n):
            if q != ql:
                ops += _crx(n - ql - 1, n - q - 1, slots)
    ops += _rx_rz_layer(n, slots)
    return ops


def _circuit_9(n, slots):
    ops = [Op("H", (q,)) for q in range(n)]
    ops += [Op("CZ", (n - q - 2, n - q - 1)) for q in range(n - 1)]
    ops += [_rot1("RX", q, slots) for q in range(n)]
    return ops


def _circuit_10(n, slots):
    ops = [_rot1("RY", q, slots) for q in range(n)]
    ops += [Op("CZ", (n - q - 2, n - q - 1)) for q in range(n - 1)]
    if n > 2:
        ops.append(Op("CZ", (n - 1, 0)))
    ops += [_rot1("RY", q, slots) for q in range(n)]
    return ops


def _circuit_15(n, slots):
    ops = [_rot1("RY", q, slots) for q in range(n)]
    ops += [Op("CNOT", (n - q - 1, (n - q) % n)) for q in range(n)]
    ops += [_rot1("RY", q, slots) for q in range(n)]
    ops += [Op("CNOT", ((q - 1) % n, (q - 2) % n)) for q in range(n)]
    return ops


def _nearest_neighbour(n, slots, ctrl):
    ops = _rx_rz_layer(n, slots)
    for q in range(n // 2):
        ops += ctrl(2 * q + 1, 2 * q, slots)
    for q in range((n - 1) // 2):
        ops += ctrl(2 * q + 2, 2 * q + 1, slots)
    return ops


def _circuit_16(n, slots):
    return _nearest_neighbour(n, slots, _crz)


def _circuit_17(n, slots):
    return _nearest_neighbour(n, slots, _crx)


def _ring(n, slots, ctrl):
    ops = _rx_rz_layer(n, slots)
    for q in range(n):
        ops += ctrl(n - q - 1, (n - q) % n, slots)
    return ops


def _circuit_18(n, slots):
    return _ring(n, slots, _crz)


def _circuit_19(n, slots):
    return _ring(n, slots, _crx)


def _no_entangling(n, slots):
    return [_rot3(q, slots) for q in range(n)]


def _strongly_entangling(n, slots):
    ops = []
    # ranges 1 then 2 (range 1 again when only two qubits)
    for r in (1, 1 % (n - 1) + 1):
        ops += [_rot3(q, slots) for q in range(n)]
        ops += [Op("CNOT", (q, (q + r) % n)) for q in range(n)]
    return ops


def _hardware_efficient(n, slots):
    ops = []
    for q in range(n):
        ops += [_rot1("RY", q, slots), _rot1("RZ", q, slots), _rot1("RY", q, slots)]
    ops += [Op("CNOT", (2 * q, 2 * q + 1)) for q in range(n // 2)]
    ops += [Op("CNOT", (2 * q + 1, 2 * q + 2)) for q in range((n - 1) // 2)]
    if n > 2:
        ops.append(Op("CNOT", (n - 1, 0)))
    return ops


# name -> (builder, minimum qubits)
TEMPLATES: Dict[str, tuple] = {
    "No_Ansatz": (_no_ansatz, 1),
    "Circuit_1": (_circuit_1, 1),
    "Circuit_2": (_circuit_2, 2),
    "Circuit_3": (_circuit_3, 2),
    "Circuit_4": (_circuit_4, 2),
    "Circuit_6": (_circuit_6, 2),
    "Circuit_9": (_circuit_9, 2),
    "Circuit_10": (_circuit_10, 2),
    "Circuit_15": (_circuit_15, 2),
    "Circuit_16": (_circuit_16, 2),
    "Circuit_17": (_circuit_17, 2),
    "Circuit_18": (_circuit_18, 2),
    "Circuit_19": (_circuit_19, 2),
    "No_Entangling": (_no_entangling, 1),
    "Strongly_Entangling": (_strongly_entangling, 2),
    "Hardware_Efficient": (_hardware_efficient, 2),
}

# templates every acceptance run covers
CORE_TEMPLATES = (
    "Circuit_1", "Circuit_2", "Circuit_3", "Circuit_6", "Circuit_9", "Circuit_15",
    "Circuit_19", "No_Entangling", "Strongly_Entangling", "Hardware_Efficient",
)

_LOOKUP = {k.lower(): k for k in TEMPLATES}


def canonical_name(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    if key not in _LOOKUP:
        raise ValueError(f"unknown ansatz {name!r}; choose from {sorted(TEMPLATES)}")
    return _LOOKUP[key]


def available() -> List[str]:
    return list(TEMPLATES)


def _block_ops(name: str, n_qubits: int) -> List[Op]:
    builder, min_qubits = TEMPLATES[name]
    if n_qubits < min_qubits:
        raise ValueError(f"{name} needs at least {min_qubits} qubits, got {n_qubits}")
    return builder(n_qubits, _Slots())


def params_per_block(name: str, n_qubits: int) -> int:
    slots = {s for op in _block_ops(canonical_name(name), n_qubits) if op.tag == TRAINABLE for s in op.slots}
    return len(slots)


def build_ansatz(spec: AnsatzSpec, layer_index: int = 0) -> CircuitIR:
    """One trainable block; its slots start at ``layer_index * params_per_block``."""
    ops = _block_ops(spec.name, spec.n_qubits)
    per_block = params_per_block(spec.name, spec.n_qubits)
    offset = layer_index * per_block
    return CircuitIR(
        spec.n_qubits,
        tuple(op.shifted(param_offset=offset) for op in ops),
        param_count=offset + per_block,
        name=spec.name,
    )


def parameter_count(spec: AnsatzSpec) -> int:
    """Trainable slots over all ``n_layers + 1`` blocks of the full model."""
    return params_per_block(spec.name, spec.n_qubits) * (spec.n_layers + 1)


def describe(ir: CircuitIR) -> List[list]:
    """Plain gate listing ``[kind, wires, tag, slots, scales]`` used by golden files."""
    return [[op.kind, list(op.wires), op.tag, list(op.slots), list(op.scales)] for op in ir.ops]


__all__ = [
    "AnsatzSpec",
    "CORE_TEMPLATES",
    "TEMPLATES",
    "available",
    "build_ansatz",
    "canonical_name",
    "describe",
    "parameter_count",
    "params_per_block",
]
