"""Batched amplitude kernels.

Every kernel works in place on a ``(batch, 2**n)`` complex128 array. Qubit 0
is the most significant bit of the basis index. Density matrices are handled
by the callers as ``2n``-qubit vectors (row qubits first, column qubits after).

Two implementations exist for each kernel: a numba ``@njit`` loop and a pure
numpy path. The numba path is used when numba imports cleanly and the
environment variable ``QFMKIT_DISABLE_NUMBA`` is unset or ``0``.
"""

import os

import numpy as np

_DISABLED = os.environ.get("QFMKIT_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

NUMBA_AVAILABLE = njit is not None
USE_NUMBA = NUMBA_AVAILABLE and not _DISABLED


# --------------------------------------------------------------------------
# numpy path
# --------------------------------------------------------------------------
def apply_1q_numpy(states, mats, target, n_qubits):
    batch = states.shape[0]
    view = states.reshape(batch, 1 << target, 2, 1 << (n_qubits - 1 - target))
    if mats.shape[0] == 1:
        out = np.einsum("ij,bajc->baic", mats[0], view)
    else:
        out = np.einsum("bij,bajc->baic", mats, view)
    states[...] = out.reshape(batch, -1)


def apply_cnot_numpy(states, control, target, n_qubits):
    batch = states.shape[0]
    shape = [batch] + [2] * n_qubits
    view = states.reshape(shape)
    idx = [slice(None)] * (n_qubits + 1)
    idx[1 + control] = 1
    sub = view[tuple(idx)]
    # target axis shifts down by one when control precedes it
    t_axis = 1 + target - (1 if control < target else 0)
    sub[...] = np.flip(sub, axis=t_axis).copy()


def apply_cz_numpy(states, a, b, n_qubits):
    batch = states.shape[0]
    view = states.reshape([batch] + [2] * n_qubits)
    idx = [slice(None)] * (n_qubits + 1)
    idx[1 + a] = 1
    idx[1 + b] = 1
    view[tuple(idx)] *= -1.0


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------
def _apply_1q_loop(states, mats, target, n_qubits):
    batch, dim = states.shape
    stride = 1 << (n_qubits - 1 - target)
    shared = mats.shape[0] == 1
    for b in range(batch):
        m = 0 if shared else b
        m00 = mats[m, 0, 0]
        m01 = mats[m, 0, 1]
        m10 = mats[m, 1, 0]
        m11 = mats[m, 1, 1]
        for i in range(dim):
            if i & stride:
                continue
            j = i | stride
            a0 = states[b, i]
            a1 = states[b, j]
            states[b, i] = m00 * a0 + m01 * a1
            states[b, j] = m10 * a0 + m11 * a1


def _apply_cnot_loop(states, control, target, n_qubits):
    batch, dim = states.shape
    cbit = 1 << (n_qubits - 1 - control)
    tbit = 1 << (n_qubits - 1 - target)
    for b in range(batch):
        for i in range(dim):
            if (i & cbit) and not (i & tbit):
                j = i | tbit
                tmp = states[b, i]
                states[b, i] = states[b, j]
                states[b, j] = tmp


def _apply_cz_loop(states, a, b_, n_qubits):
    batch, dim = states.shape
    mask = (1 << (n_qubits - 1 - a)) | (1 << (n_qubits - 1 - b_))
    for b in range(batch):
        for i in range(dim):
            if (i & mask) == mask:
                states[b, i] = -states[b, i]


if NUMBA_AVAILABLE:
    apply_1q_numba = njit(cache=True, nogil=True)(_apply_1q_loop)
    apply_cnot_numba = njit(cache=True, nogil=True)(_apply_cnot_loop)
    apply_cz_numba = njit(cache=True, nogil=True)(_apply_cz_loop)
else:  # pragma: no cover
    apply_1q_numba = _apply_1q_loop
    apply_cnot_numba = _apply_cnot_loop
    apply_cz_numba = _apply_cz_loop


if USE_NUMBA:
    apply_1q = apply_1q_numba
    apply_cnot = apply_cnot_numba
    apply_cz = apply_cz_numba
else:
    apply_1q = apply_1q_numpy
    apply_cnot = apply_cnot_numpy
    apply_cz = apply_cz_numpy


def backend():
    """Name of the active kernel backend."""
    return "numba" if USE_NUMBA else "numpy"
