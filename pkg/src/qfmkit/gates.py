"""Gate kinds, their matrices and batched rotation builders.

Rotation convention: ``R_P(phi) = exp(-i phi P / 2)`` and
``Rot(a, b, c) = RZ(c) @ RY(b) @ RZ(a)``.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)

PAULI_MATRICES = {"I": I2, "X": X, "Y": Y, "Z": Z}

ROTATION_AXIS = {"RX": "X", "RY": "Y", "RZ": "Z"}
N_ANGLES = {"RX": 1, "RY": 1, "RZ": 1, "Rot": 3}
FIXED_1Q = {"H": H, "S": S, "X": X, "Y": Y, "Z": Z}
FIXED_2Q = {"CNOT": CNOT, "CZ": CZ}
CLIFFORD_KINDS = frozenset(FIXED_1Q) | frozenset(FIXED_2Q)
GATE_KINDS = frozenset(N_ANGLES) | CLIFFORD_KINDS


def arity(kind: str) -> int:
    return 2 if kind in FIXED_2Q else 1


def rx(phi: float) -> np.ndarray:
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(phi: float) -> np.ndarray:
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(phi: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * phi), 0], [0, np.exp(0.5j * phi)]], dtype=complex)


def rot(a: float, b: float, c: float) -> np.ndarray:
    return rz(c) @ ry(b) @ rz(a)


_ROTATIONS = {"RX": rx, "RY": ry, "RZ": rz}


def rotation_batch(kind: str, angles: np.ndarray) -> np.ndarray:
    """Stack of rotation matrices, shape ``(len(angles), 2, 2)``.

    ``angles`` is ``(B,)`` for RX/RY/RZ and ``(B, 3)`` for Rot.
    """
    angles = np.asarray(angles, dtype=float)
    if kind == "Rot":
        a, b, c = angles[:, 0], angles[:, 1], angles[:, 2]
        return _rz_b(c) @ _ry_b(b) @ _rz_b(a)
    return {"RX": _rx_b, "RY": _ry_b, "RZ": _rz_b}[kind](angles)


def _rx_b(phi):
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    out = np.empty((phi.shape[0], 2, 2), dtype=complex)
    out[:, 0, 0] = c
    out[:, 1, 1] = c
    out[:, 0, 1] = -1j * s
    out[:, 1, 0] = -1j * s
    return out


def _ry_b(phi):
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    out = np.empty((phi.shape[0], 2, 2), dtype=complex)
    out[:, 0, 0] = c
    out[:, 1, 1] = c
    out[:, 0, 1] = -s
    out[:, 1, 0] = s
    return out


def _rz_b(phi):
    out = np.zeros((phi.shape[0], 2, 2), dtype=complex)
    out[:, 0, 0] = np.exp(-0.5j * phi)
    out[:, 1, 1] = np.exp(0.5j * phi)
    return out


@dataclass(frozen=True)
class Gate:
    """A concrete gate: kind, target wires and (for rotations) angles in radians."""

    kind: str
    wires: Tuple[int, ...]
    angles: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        wires = (self.wires,) if isinstance(self.wires, (int, np.integer)) else tuple(self.wires)
        object.__setattr__(self, "wires", tuple(int(w) for w in wires))
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        if len(self.wires) != arity(self.kind):
            raise ValueError(f"{self.kind} acts on {arity(self.kind)} wire(s), got {self.wires}")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"duplicate wires {self.wires}")
        if len(self.angles) != N_ANGLES.get(self.kind, 0):
            raise ValueError(f"{self.kind} takes {N_ANGLES.get(self.kind, 0)} angle(s)")
        if not all(np.isfinite(self.angles)):
            raise ValueError(f"non-finite angle in {self.kind}{self.angles}")

    def matrix(self) -> np.ndarray:
        if self.kind == "Rot":
            return rot(*self.angles)
        if self.kind in _ROTATIONS:
            return _ROTATIONS[self.kind](self.angles[0])
        if self.kind in FIXED_1Q:
            return FIXED_1Q[self.kind]
        return FIXED_2Q[self.kind]
