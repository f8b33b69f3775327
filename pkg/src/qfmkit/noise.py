"""Noise parameters, single-qubit Kraus sets and noisy program compilation.

Placement of the channels:

* start: bit-flip ``p_sp`` on every qubit;
* after every gate, on each of its wires: BF(p_bf), PF(p_pf), DP(p_dp), then
  thermal relaxation when enabled;
* end: AD(p_ad), PD(p_pd), BF(p_me) on every qubit.

Rotation angles receive an additive ``N(0, gate_error_mu**2)`` offset drawn
afresh for each gate every time a program is compiled.
"""

from dataclasses import asdict, dataclass, fields, replace
from typing import List, Optional, Tuple, Union

import numpy as np

from . import gates
from .circuit import ENCODING, CircuitIR, Op
from .state import KrausChannel

PROBABILITY_FIELDS = ("p_bf", "p_pf", "p_dp", "p_ad", "p_pd", "p_me", "p_sp")


@dataclass(frozen=True)
class NoiseParams:
    p_bf: float = 0.0
    p_pf: float = 0.0
    p_dp: float = 0.0
    p_ad: float = 0.0
    p_pd: float = 0.0
    p_me: float = 0.0
    p_sp: float = 0.0
    t1: float = 0.0
    t2: float = 0.0
    t_factor: float = 0.0
    gate_error_mu: float = 0.0
    # coherent error on encoding rotations as well as trainable ones
    gate_error_on_encoding: bool = True

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name != "gate_error_on_encoding" and not np.isfinite(v):
                raise ValueError(f"{f.name} must be finite")
        for name in PROBABILITY_FIELDS:
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} is not a probability")
        if self.gate_error_mu < 0:
            raise ValueError("gate_error_mu must be nonnegative")
        if self.thermal_enabled:
            if min(self.t1, self.t2, self.t_factor) <= 0:
                raise ValueError("thermal relaxation needs positive t1, t2 and t_factor")
            if self.t2 > 2 * self.t1:
                raise ValueError("thermal relaxation requires t2 <= 2*t1")

    @property
    def thermal_enabled(self) -> bool:
        return any(v != 0 for v in (self.t1, self.t2, self.t_factor))

    @property
    def is_zero(self) -> bool:
        return all(getattr(self, n) == 0 for n in PROBABILITY_FIELDS) and not (
            self.thermal_enabled or self.gate_error_mu
        )

    @property
    def incoherent(self) -> bool:
        return any(getattr(self, n) > 0 for n in PROBABILITY_FIELDS) or self.thermal_enabled

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown noise fields {sorted(unknown)}")
        return cls(**data)


# --------------------------------------------------------------------------
# Kraus sets
# --------------------------------------------------------------------------
def _check_p(p, what="probability"):
    if not (np.isfinite(p) and 0.0 <= p <= 1.0):
        raise ValueError(f"invalid {what} {p}")


def _flip(p, pauli):
    _check_p(p)
    if p == 0:
        return [gates.I2]
    return [np.sqrt(1 - p) * gates.I2, np.sqrt(p) * pauli]


def bit_flip(p):
    return _flip(p, gates.X)


def phase_flip(p):
    return _flip(p, gates.Z)


def depolarizing(p):
    _check_p(p)
    if p == 0:
        return [gates.I2]
    a = np.sqrt(p / 3)
    return [np.sqrt(1 - p) * gates.I2, a * gates.X, a * gates.Y, a * gates.Z]


def amplitude_damping(gamma):
    _check_p(gamma, "damping rate")
    return [
        np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex),
        np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex),
    ]


def phase_damping(gamma):
    _check_p(gamma, "damping rate")
    return [
        np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex),
        np.array([[0, 0], [0, np.sqrt(gamma)]], dtype=complex),
    ]


def kraus_from_choi(choi: np.ndarray, tol: float = 1e-14) -> List[np.ndarray]:
    """Kraus operators of a qubit channel from its Choi matrix.

    ``choi = sum_ij |i><j| (x) E(|i><j|)``; each eigenvector ``v`` with
    eigenvalue ``lam`` yields ``K[a, i] = sqrt(lam) * v[2*i + a]``.
    """
    vals, vecs = np.linalg.eigh(choi)
    ops = []
    for lam, v in zip(vals, vecs.T):
        if lam > tol:
            ops.append(np.sqrt(lam) * v.reshape(2, 2).T)
    return ops


def thermal_relaxation(t1, t2, t_gate):
    """Zero-temperature relaxation over a gate of duration ``t_gate``.

    Populations relax toward ``|0>`` as ``exp(-t/t1)``; coherences decay as
    ``exp(-t/t2)``. Requires ``t2 <= 2*t1``.
    """
    if min(t1, t2) <= 0 or t_gate < 0:
        raise ValueError("t1, t2 must be positive and t_gate nonnegative")
    if t2 > 2 * t1:
        raise ValueError("t2 must not exceed 2*t1")
    e1 = np.exp(-t_gate / t1)
    e2 = np.exp(-t_gate / t2)
    p_reset = 1 - e1
    if t2 <= t1:
        p_z = (1 - p_reset) * (1 - e2 / e1) / 2
        p_id = 1 - p_z - p_reset
        ops = [
            np.sqrt(p_id) * gates.I2,
            np.sqrt(p_z) * gates.Z,
            np.sqrt(p_reset) * np.array([[1, 0], [0, 0]], dtype=complex),
            np.sqrt(p_reset) * np.array([[0, 1], [0, 0]], dtype=complex),
        ]
        return [k for k in ops if np.any(k)]
    choi = np.array(
        [
            [1, 0, 0, e2],
            [0, 0, 0, 0],
            [0, 0, p_reset, 0],
            [e2, 0, 0, 1 - p_reset],
        ],
        dtype=complex,
    )
    return kraus_from_choi(choi)


NOISE_KINDS = {
    "bit_flip": bit_flip,
    "phase_flip": phase_flip,
    "depolarizing": depolarizing,
    "amplitude_damping": amplitude_damping,
    "phase_damping": phase_damping,
    "thermal_relaxation": thermal_relaxation,
}


def kraus_for(kind: str, *params, wire: int = 0) -> KrausChannel:
    """Kraus channel of a named noise kind on ``wire``.

    >>> len(kraus_for("bit_flip", 0.0).operators)
    1
    """
    if kind not in NOISE_KINDS:
        raise ValueError(f"unknown noise kind {kind!r}")
    return KrausChannel(tuple(NOISE_KINDS[kind](*params)), (wire,), kind)


# --------------------------------------------------------------------------
# compilation
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class NoisyProgram:
    n_qubits: int
    items: Tuple[Union[Op, KrausChannel], ...]
    param_count: int

    @property
    def is_unitary(self) -> bool:
        return not any(isinstance(it, KrausChannel) for it in self.items)

    @property
    def channel_count(self) -> int:
        return sum(isinstance(it, KrausChannel) for it in self.items)


def _per_gate_channels(noise: NoiseParams, wire: int):
    out = []
    if noise.p_bf > 0:
        out.append(kraus_for("bit_flip", noise.p_bf, wire=wire))
    if noise.p_pf > 0:
        out.append(kraus_for("phase_flip", noise.p_pf, wire=wire))
    if noise.p_dp > 0:
        out.append(kraus_for("depolarizing", noise.p_dp, wire=wire))
    if noise.thermal_enabled:
        out.append(kraus_for("thermal_relaxation", noise.t1, noise.t2, noise.t_factor, wire=wire))
    return out


def compile_noisy(
    ir: CircuitIR, noise: Optional[NoiseParams], rng: Optional[np.random.Generator] = None
) -> NoisyProgram:
    """Interleave ``ir`` with the channels selected by ``noise``."""
    noise = noise or NoiseParams()
    if noise.is_zero:
        return NoisyProgram(ir.n_qubits, ir.ops, ir.param_count)
    if noise.gate_error_mu > 0 and rng is None:
        raise ValueError("coherent gate error needs an rng")
    n = ir.n_qubits
    items: list = []
    if noise.p_sp > 0:
        items += [kraus_for("bit_flip", noise.p_sp, wire=q) for q in range(n)]
    for op in ir.ops:
        if op.is_rotation and noise.gate_error_mu > 0 and (
            op.tag != ENCODING or noise.gate_error_on_encoding
        ):
            eps = rng.normal(0.0, noise.gate_error_mu, size=len(op.slots))
            base = op.offsets or (0.0,) * len(op.slots)
            op = replace(op, offsets=tuple(b + e for b, e in zip(base, eps)))
        items.append(op)
        for w in op.wires:
            items += _per_gate_channels(noise, w)
    for q in range(n):
        if noise.p_ad > 0:
            items.append(kraus_for("amplitude_damping", noise.p_ad, wire=q))
        if noise.p_pd > 0:
            items.append(kraus_for("phase_damping", noise.p_pd, wire=q))
        if noise.p_me > 0:
            items.append(kraus_for("bit_flip", noise.p_me, wire=q))
    return NoisyProgram(n, tuple(items), ir.param_count)
