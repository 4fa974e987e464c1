"""Compare the numba kernel against the pure-numpy fallback.

Times the Haar-cycle energy sampler on identical inputs for both backends and
reports per-sample agreement.  Usage:

    python3 benchmarks/benchmark_backends.py --samples 20000 --repeat 3
"""

import argparse
import time

import numpy as np

from qmcool import _accel
from qmcool.engine import EngineConfig, _joint_hamiltonian_diagonals, initial_state
from qmcool.measure import canonical_basis


def time_backend(backend, gin, rho, h1, h2, cols, repeat):
    # warm-up (also triggers numba compilation once)
    _accel.cycle_energies_from_ginibre(gin[:100], rho, h1, h2, cols, backend=backend)
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = _accel.cycle_energies_from_ginibre(gin, rho, h1, h2, cols, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=12345)
    args = parser.parse_args()

    cfg = EngineConfig.from_values(1.02, 0.18, 0.4, 1.0)
    rho = initial_state(cfg)
    h1, h2 = _joint_hamiltonian_diagonals(cfg)
    cols = np.ascontiguousarray(canonical_basis().vectors.T)

    t0 = time.perf_counter()
    gin = _accel.ginibre_batch(args.seed, 0, args.samples)
    t_gen = time.perf_counter() - t0

    results = {}
    for backend in ("numba", "numpy") if _accel.HAVE_NUMBA else ("numpy",):
        t, out = time_backend(backend, gin, rho, h1, h2, cols, args.repeat)
        results[backend] = (t, out)
        rate = args.samples / t
        print(f"{backend:>6} kernel: {t * 1e3:8.1f} ms for {args.samples} samples ({rate:,.0f}/s)")
    print(f"ginibre generation (shared by both): {t_gen * 1e3:8.1f} ms")
    if len(results) == 2:
        dev = np.max(np.abs(results["numba"][1] - results["numpy"][1]))
        print(f"max |numba - numpy| over all triples: {dev:.3e}")
    print(f"default backend: {_accel.backend_name()}")


if __name__ == "__main__":
    main()
