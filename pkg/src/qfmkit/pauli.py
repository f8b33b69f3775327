"""Pauli strings in symplectic (x, z) bit-mask form.

A string on ``n`` qubits is a pair of integers ``(x, z)``; qubit ``q`` lives at
bit ``n - 1 - q`` so that masks line up with basis-state indices. The
single-qubit operator on a qubit is ``I, X, Z, Y`` for bits
``(0,0), (1,0), (0,1), (1,1)``; all strings are Hermitian (``Y = iXZ``).
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Tuple

import numpy as np

from . import gates

_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_CHARS = {v: k for k, v in _BITS.items()}


def to_masks(label: str) -> Tuple[int, int]:
    n = len(label)
    x = z = 0
    for q, ch in enumerate(label):
        bx, bz = _BITS[ch]
        x |= bx << (n - 1 - q)
        z |= bz << (n - 1 - q)
    return x, z


def to_label(x: int, z: int, n_qubits: int) -> str:
    return "".join(
        _CHARS[((x >> (n_qubits - 1 - q)) & 1, (z >> (n_qubits - 1 - q)) & 1)]
        for q in range(n_qubits)
    )


def commutes(x1: int, z1: int, x2: int, z2: int) -> bool:
    return ((x1 & z2) ^ (z1 & x2)).bit_count() % 2 == 0


def multiply(x1: int, z1: int, x2: int, z2: int) -> Tuple[int, int, int]:
    """``P1 @ P2 = i**k * P(x, z)``; returns ``(k, x, z)`` with ``k`` mod 4."""
    x, z = x1 ^ x2, z1 ^ z2
    k = (x1 & z1).bit_count() + (x2 & z2).bit_count() + 2 * (z1 & x2).bit_count()
    k -= (x & z).bit_count()
    return k % 4, x, z


def matrix(label: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for ch in label:
        out = np.kron(out, gates.PAULI_MATRICES[ch])
    return out


@lru_cache(maxsize=None)
def clifford_table(kind: str) -> Dict[Tuple[int, int], Tuple[int, int, int]]:
    """Heisenberg map ``G^dag P G = sign * P'`` on the gate's local wires.

    Keys and values use local masks over ``arity(kind)`` qubits (first wire
    most significant); values are ``(sign, x', z')``.
    """
    k = gates.arity(kind)
    g = gates.FIXED_1Q.get(kind)
    if g is None:
        g = gates.FIXED_2Q[kind]
    labels = ["".join(p) for p in product("IXYZ", repeat=k)]
    mats = {lab: matrix(lab) for lab in labels}
    table = {}
    for lab in labels:
        conj = g.conj().T @ mats[lab] @ g
        for cand in labels:
            overlap = np.trace(mats[cand] @ conj).real / 2**k
            if abs(abs(overlap) - 1) < 1e-12:
                table[to_masks(lab)] = (int(round(overlap)), *to_masks(cand))
                break
        else:  # pragma: no cover
            raise ValueError(f"{kind} is not Clifford")
    return table


def conjugate_clifford(kind: str, wires, x: int, z: int, n_qubits: int):
    """Apply ``G^dag P G`` to a full-register string; returns ``(sign, x, z)``."""
    shifts = [n_qubits - 1 - w for w in wires]
    k = len(wires)
    lx = lz = 0
    for i, s in enumerate(shifts):
        lx |= ((x >> s) & 1) << (k - 1 - i)
        lz |= ((z >> s) & 1) << (k - 1 - i)
    sign, nx, nz = clifford_table(kind)[(lx, lz)]
    for i, s in enumerate(shifts):
        bit = 1 << s
        x = (x & ~bit) | (((nx >> (k - 1 - i)) & 1) << s)
        z = (z & ~bit) | (((nz >> (k - 1 - i)) & 1) << s)
    return sign, x, z


_TOKEN = re.compile(r"([IXYZ])(\d+)")


@dataclass(frozen=True)
class PauliObservable:
    """A weighted Pauli string, e.g. ``Z`` on qubit 0 with weight 1."""

    label: str
    weight: float = 1.0

    @property
    def n_qubits(self) -> int:
        return len(self.label)

    @property
    def masks(self) -> Tuple[int, int]:
        return to_masks(self.label)

    def matrix(self) -> np.ndarray:
        return self.weight * matrix(self.label)

    def __str__(self):
        return self.label if self.weight == 1.0 else f"{self.weight!r}*{self.label}"

    @classmethod
    def parse(cls, text: str, n_qubits: int) -> "PauliObservable":
        """Parse ``"ZIII"``, ``"Z0"``, ``"Z0Z2"`` or ``"0.5*X1"``."""
        text = text.strip()
        weight = 1.0
        if "*" in text:
            w, text = text.split("*", 1)
            weight = float(w)
            text = text.strip()
        elif text.startswith("-"):
            weight, text = -1.0, text[1:]
        text = text.upper()
        if len(text) == n_qubits and set(text) <= set("IXYZ") and not _TOKEN.search(text):
            label = text
        else:
            tokens = _TOKEN.findall(text)
            if not tokens or "".join(p + q for p, q in tokens) != text:
                raise ValueError(f"cannot parse observable {text!r}")
            chars = ["I"] * n_qubits
            for p, q in tokens:
                q = int(q)
                if q >= n_qubits:
                    raise ValueError(f"observable wire {q} out of range for {n_qubits} qubits")
                if chars[q] != "I":
                    raise ValueError(f"qubit {q} appears twice in {text!r}")
                chars[q] = p
            label = "".join(chars)
        if not np.isfinite(weight):
            raise ValueError("observable weight must be finite")
        return cls(label, weight)

    @classmethod
    def z(cls, qubit: int, n_qubits: int) -> "PauliObservable":
        chars = ["I"] * n_qubits
        chars[qubit] = "Z"
        return cls("".join(chars))
