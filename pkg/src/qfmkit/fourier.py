"""Fourier spectrum of a model output ``f(x) = sum_w c_w exp(i w x)``.

Two independent routes:

``dft_spectrum``
    samples ``f`` on the minimal odd grid ``x_j = 2 pi j / M``, ``M = 2K + 1``,
    and applies a direct DFT.

``analytical_spectrum``
    pushes the observable backwards through the circuit. Clifford gates map
    Pauli strings to signed Pauli strings; a rotation ``R_P(phi)`` leaves a
    commuting term alone and splits an anticommuting term ``T`` into
    ``cos(phi) T + sin(phi) iPT``. Trainable angles are substituted
    numerically while encoding angles stay symbolic, so every term carries a
    table of ``cos(x)**a sin(x)**b`` weights. Only strings without X/Y
    factors survive on ``|0...0>``; the surviving monomials are expanded into
    exponentials with exact dyadic coefficients.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from . import pauli
from .circuit import ENCODING, CircuitIR
from .gates import CLIFFORD_KINDS, ROTATION_AXIS
from .model import _evaluate_pure, evaluate, evaluate_batch, require_noiseless, sample_parameters
from .noise import NoiseParams

PRUNE_TOL = 1e-12
SUPPORT_THRESHOLD = 1e-10


@dataclass
class Spectrum:
    frequencies: np.ndarray
    coefficients: np.ndarray
    method: str
    support: Optional[FrozenSet[int]] = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * np.multiply.outer(x, self.frequencies)) @ self.coefficients

    def coefficient(self, omega: int) -> complex:
        idx = np.nonzero(self.frequencies == omega)[0]
        return complex(self.coefficients[idx[0]]) if idx.size else 0j

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "frequencies": [int(w) for w in self.frequencies],
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
        }
        if self.support is not None:
            out["support"] = sorted(int(w) for w in self.support)
        return out


def max_frequency(ir: CircuitIR) -> int:
    """Spectral radius: one unit per unscaled Pauli-rotation encoding gate."""
    count = 0
    for op in ir.ops:
        if op.tag != ENCODING:
            continue
        if op.kind not in ROTATION_AXIS or op.scales != (1.0,):
            raise ValueError(f"encoding gate {op.kind} is not a unit Pauli rotation")
        count += 1
    return count


def _frequency_axis(k: int) -> np.ndarray:
    return np.arange(-k, k + 1)


def _dft(samples: np.ndarray, k: int) -> np.ndarray:
    """Direct DFT of ``(..., M)`` samples on the grid ``2 pi j / M``; returns ``c_{-k..k}``."""
    m = 2 * k + 1
    xs = 2 * np.pi * np.arange(m) / m
    kernel = np.exp(-1j * np.outer(xs, _frequency_axis(k))) / m
    return samples @ kernel


def sampling_grid(ir: CircuitIR) -> np.ndarray:
    k = max_frequency(ir)
    if k < 1:
        raise ValueError("model has no encoding gates; need at least one layer")
    m = 2 * k + 1
    return 2 * np.pi * np.arange(m) / m


def dft_spectrum(
    ir: CircuitIR,
    params,
    noise: Optional[NoiseParams] = None,
    rng: Optional[np.random.Generator] = None,
) -> Spectrum:
    xs = sampling_grid(ir)
    k = (xs.size - 1) // 2
    params = np.asarray(params, dtype=float)
    if noise is None:
        noise = ir.meta.get("noise")
    if noise is None or noise.is_zero:
        f = _evaluate_pure(ir, np.broadcast_to(params, (xs.size, params.size)), xs)
    else:
        f = np.array([evaluate(ir, params, x, noise, rng) for x in xs])
    return Spectrum(_frequency_axis(k), _dft(f, k), "dft")


# --------------------------------------------------------------------------
# analytical route
# --------------------------------------------------------------------------
@lru_cache(maxsize=None)
def _monomial_expansion(a: int, b: int, k: int) -> np.ndarray:
    """``cos(x)**a sin(x)**b`` as coefficients of ``exp(i w x)``, ``w = -k..k``.

    Integer convolution of ``(z + 1/z)**a (z - 1/z)**b`` divided by
    ``2**(a+b) i**b``; every entry is an exact dyadic rational times a unit.
    """
    poly = np.array([1], dtype=np.int64)
    for _ in range(a):
        poly = np.convolve(poly, np.array([1, 0, 1], dtype=np.int64))
    for _ in range(b):
        poly = np.convolve(poly, np.array([-1, 0, 1], dtype=np.int64))
    deg = a + b
    out = np.zeros(2 * k + 1, dtype=complex)
    # poly index i <-> exponent i - deg
    out[k - deg : k + deg + 1] = poly.astype(float) / 2.0**deg
    return out * (-1j) ** b


Term = Tuple[int, int]


class FourierTree:
    """Backward Pauli expansion of the observable for one parameter vector.

    ``terms`` maps a Pauli string ``(x, z)`` to a ``(K+1, K+1)`` table whose
    entry ``[a, b]`` is the weight of ``cos(x)**a sin(x)**b``. Identical
    strings from different branches are merged as they appear.
    """

    def __init__(self, ir: CircuitIR, params):
        require_noiseless(ir)
        self.ir = ir
        self.n_qubits = ir.n_qubits
        self.max_frequency = max_frequency(ir)
        params = np.asarray(params, dtype=float)
        if params.shape != (ir.param_count,):
            raise ValueError(f"expected {ir.param_count} parameters, got shape {params.shape}")
        self.params = params
        self.branchings = 0
        k = self.max_frequency
        root = np.zeros((k + 1, k + 1))
        root[0, 0] = ir.observable.weight
        self.terms: Dict[Term, np.ndarray] = {ir.observable.masks: root}
        for op in reversed(ir.ops):
            self._conjugate(op)

    def _rotation_steps(self, op):
        """``(axis, angle or None)`` in the order they act backwards."""
        if op.kind == "Rot":
            slots, scales = op.slots, op.scales
            offs = op.offsets or (0.0, 0.0, 0.0)
            a, b, c = (s * self.params[i] + o for i, s, o in zip(slots, scales, offs))
            return [("Z", c), ("Y", b), ("Z", a)]
        axis = ROTATION_AXIS[op.kind]
        if op.tag == ENCODING:
            if op.scales != (1.0,) or op.offsets:
                raise ValueError("encoding rotations must be unscaled and error-free")
            return [(axis, None)]
        return [(axis, op.scales[0] * self.params[op.slots[0]] + (op.offsets or (0.0,))[0])]

    def _conjugate(self, op):
        n = self.n_qubits
        if op.kind in CLIFFORD_KINDS:
            new: Dict[Term, np.ndarray] = {}
            for (x, z), arr in self.terms.items():
                sign, nx, nz = pauli.conjugate_clifford(op.kind, op.wires, x, z, n)
                _accumulate(new, (nx, nz), sign * arr)
            self.terms = new
            return
        if op.kind not in ROTATION_AXIS and op.kind != "Rot":
            raise ValueError(f"unsupported gate {op.kind}")
        (wire,) = op.wires
        for axis, angle in self._rotation_steps(op):
            px, pz = pauli.to_masks("I" * wire + axis + "I" * (n - wire - 1))
            self._rotate(px, pz, angle)

    def _rotate(self, px, pz, angle):
        if angle is not None:
            c, s = np.cos(angle), np.sin(angle)
        new: Dict[Term, np.ndarray] = {}
        for (x, z), arr in self.terms.items():
            if pauli.commutes(px, pz, x, z):
                _accumulate(new, (x, z), arr)
                continue
            self.branchings += 1
            k, nx, nz = pauli.multiply(px, pz, x, z)
            sign = 1.0 if (k + 1) % 4 == 0 else -1.0
            if angle is None:
                cos_part = np.zeros_like(arr)
                cos_part[1:, :] = arr[:-1, :]
                sin_part = np.zeros_like(arr)
                sin_part[:, 1:] = arr[:, :-1]
                _accumulate(new, (x, z), cos_part)
                _accumulate(new, (nx, nz), sign * sin_part)
            else:
                _accumulate(new, (x, z), c * arr)
                _accumulate(new, (nx, nz), (sign * s) * arr)
        for key in list(new):
            arr = new[key]
            arr[np.abs(arr) < PRUNE_TOL] = 0.0
            if not arr.any():
                del new[key]
        self.terms = new

    def leaves(self):
        """``(label, cos_power, sin_power, weight)`` for every nonzero expansion entry."""
        out = []
        for (x, z), arr in sorted(self.terms.items()):
            label = pauli.to_label(x, z, self.n_qubits)
            for a, b in zip(*np.nonzero(arr)):
                out.append((label, int(a), int(b), float(arr[a, b])))
        return out

    def surviving_monomials(self) -> np.ndarray:
        """Sum of the tables of all strings with nonzero expectation on ``|0...0>``."""
        k = self.max_frequency
        total = np.zeros((k + 1, k + 1))
        for (x, _), arr in self.terms.items():
            if x == 0:
                total += arr
        total[np.abs(total) < PRUNE_TOL] = 0.0
        return total

    def spectrum(self) -> Spectrum:
        k = self.max_frequency
        total = self.surviving_monomials()
        coeffs = np.zeros(2 * k + 1, dtype=complex)
        present = np.zeros(2 * k + 1, dtype=bool)
        for a, b in zip(*np.nonzero(total)):
            expansion = _monomial_expansion(int(a), int(b), k)
            coeffs += total[a, b] * expansion
            present |= expansion != 0
        freqs = _frequency_axis(k)
        return Spectrum(freqs, coeffs, "analytical", frozenset(int(w) for w in freqs[present]))


def _accumulate(target, key, arr):
    if key in target:
        target[key] = target[key] + arr
    else:
        target[key] = arr.copy()


def analytical_spectrum(ir: CircuitIR, params) -> Spectrum:
    return FourierTree(ir, params).spectrum()


@dataclass
class CoefficientStats:
    frequencies: np.ndarray
    mean_abs: np.ndarray
    grand_mean: float
    support: FrozenSet[int]
    method: str
    n_samples: int

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "n_samples": self.n_samples,
            "frequencies": [int(w) for w in self.frequencies],
            "mean_abs": [float(v) for v in self.mean_abs],
            "grand_mean": float(self.grand_mean),
            "support": sorted(int(w) for w in self.support),
        }


def spectra_for(ir: CircuitIR, params: np.ndarray, method: str) -> np.ndarray:
    """Coefficient matrix ``(n_samples, 2K+1)`` for a stack of parameter vectors."""
    params = np.atleast_2d(params)
    if method == "dft":
        xs = sampling_grid(ir)
        k = (xs.size - 1) // 2
        batch = np.repeat(params, xs.size, axis=0)
        f = evaluate_batch(ir, batch, np.tile(xs, params.shape[0]))
        return _dft(f.reshape(params.shape[0], xs.size), k)
    if method == "analytical":
        return np.stack([analytical_spectrum(ir, p).coefficients for p in params])
    raise ValueError(f"unknown method {method!r}")


def coefficient_stats(coeffs: np.ndarray, k: int, method: str, threshold=SUPPORT_THRESHOLD):
    mean_abs = np.abs(coeffs).mean(axis=0)
    freqs = _frequency_axis(k)
    support = frozenset(int(w) for w in freqs[mean_abs > threshold])
    return CoefficientStats(freqs, mean_abs, float(mean_abs.mean()), support, method, coeffs.shape[0])


def mean_coefficient_magnitudes(
    ir: CircuitIR,
    n_samples: int,
    rng: np.random.Generator,
    method: str = "dft",
    threshold: float = SUPPORT_THRESHOLD,
) -> CoefficientStats:
    """Mean ``|c_w|`` per frequency over uniformly sampled parameters."""
    params = sample_parameters(ir, n_samples, rng)
    coeffs = spectra_for(ir, params, method)
    return coefficient_stats(coeffs, max_frequency(ir), method, threshold)
