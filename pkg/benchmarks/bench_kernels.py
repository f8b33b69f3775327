"""Compare the numba and numpy amplitude kernels.

Kernel timings call both implementations directly. The end-to-end timing
runs a fixed workload in a subprocess once per backend, switching with
``QFMKIT_DISABLE_NUMBA``.

    python benchmarks/bench_kernels.py --qubits 8 --batch 256
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from qfmkit import _kernels

WORKLOAD = """
import time, numpy as np
from qfmkit import _kernels
from qfmkit.model import ModelConfig, construct
from qfmkit.entanglement import entangling_capability
from qfmkit.expressibility import expressibility_pipeline
ir = construct(ModelConfig("Circuit_19", {n}, 2))
entangling_capability(ir, 10, np.random.default_rng(0), "both")  # warm-up / JIT
t = time.perf_counter()
entangling_capability(ir, {samples}, np.random.default_rng(0), "both")
expressibility_pipeline(ir, {samples}, 75, np.random.default_rng(1))
print(_kernels.backend(), time.perf_counter() - t)
"""


def _time(fn, *args, repeat=5):
    fn(*args)  # warm-up
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def bench_kernels(n, batch):
    rng = np.random.default_rng(0)
    states = rng.standard_normal((batch, 1 << n)) + 1j * rng.standard_normal((batch, 1 << n))
    mats = np.linalg.qr(rng.standard_normal((batch, 2, 2)) + 1j * rng.standard_normal((batch, 2, 2)))[0]
    cases = [
        ("apply_1q", _kernels.apply_1q_numpy, _kernels.apply_1q_numba, (mats, n // 2, n)),
        ("apply_cnot", _kernels.apply_cnot_numpy, _kernels.apply_cnot_numba, (0, n - 1, n)),
        ("apply_cz", _kernels.apply_cz_numpy, _kernels.apply_cz_numba, (1, n - 2, n)),
    ]
    print(f"kernels: n={n}, batch={batch}")
    print(f"{'kernel':<12}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, np_fn, nb_fn, args in cases:
        t_np = _time(np_fn, states.copy(), *args)
        t_nb = _time(nb_fn, states.copy(), *args)
        print(f"{name:<12}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.2f}")


def bench_end_to_end(n, samples):
    print(f"end to end: Circuit_19, n={n}, L=2, {samples} samples (entanglement both + expressibility)")
    for flag in ("0", "1"):
        env = dict(os.environ, QFMKIT_DISABLE_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, "-c", WORKLOAD.format(n=n, samples=samples)],
            env=env, capture_output=True, text=True, check=True,
        ).stdout.split()
        print(f"  {out[0]:<6} {float(out[1]):8.3f} s")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, default=8)
    parser.add_argument("--batch", type=int, default=256)
    parser.add_argument("--samples", type=int, default=2000)
    parser.add_argument("--skip-end-to-end", action="store_true")
    args = parser.parse_args()
    if not _kernels.NUMBA_AVAILABLE:
        sys.exit("numba is not installed; nothing to compare")
    bench_kernels(args.qubits, args.batch)
    if not args.skip_end_to_end:
        bench_end_to_end(4, args.samples)


if __name__ == "__main__":
    main()
