"""Benchmark the trajectory kernel: numba backend vs pure numpy.

Builds the chain-with-auxiliaries workload for a few system sizes and
times repeated purification trajectories through both backends of
``trajectory_kernel``.  The numba path is compiled on a warm-up call so
JIT time is excluded.  Run from the repository root:

    python3 benchmarks/bench_emr.py
    python3 benchmarks/bench_emr.py --sizes 4 6 8 --rounds 500 --repeats 5
"""

import argparse
import time

import numpy as np

from logipure import (
    HeisenbergSpec,
    MeasurementSetting,
    XYSetup,
    build_heisenberg_code,
    build_xy_setup,
    cardinal_state,
    fast_trajectory,
    hermitian_eig,
    thermal_ensemble,
)
from logipure._kernels import HAS_NUMBA


def workload(n_sites: int, beta: float = 0.1):
    spec = HeisenbergSpec(n_qubits=n_sites)
    n_aux = 1 if n_sites == 2 else 2
    setup = XYSetup(n_system=n_sites, n_aux=n_aux)
    u = hermitian_eig(build_xy_setup(setup, spec)).unitary(1.0)
    code = build_heisenberg_code(spec)
    ensemble = thermal_ensemble([code], beta)
    settings = (MeasurementSetting(a=0.0, b=0.0, k=+1),) * n_aux
    target = cardinal_state(code, "z-")
    return u, ensemble, settings, target


def time_backend(backend, args_tuple, rounds, repeats):
    u, ensemble, settings, target = args_tuple
    # warm-up (and JIT compile for numba)
    traj = fast_trajectory(u, ensemble, settings, target, 10, backend=backend)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        traj = fast_trajectory(u, ensemble, settings, target, rounds, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, traj


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 6, 8])
    parser.add_argument("--rounds", type=int, default=500)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not HAS_NUMBA:
        print("numba not installed: only the numpy backend will run")

    print(f"{'N':>3} {'dim':>5} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}  agreement")
    for n in args.sizes:
        load = workload(n)
        t_np, traj_np = time_backend("numpy", load, args.rounds, args.repeats)
        if HAS_NUMBA:
            t_nb, traj_nb = time_backend("numba", load, args.rounds, args.repeats)
            delta = float(np.max(np.abs(traj_np.fidelity - traj_nb.fidelity)))
            delta = max(delta, float(np.max(np.abs(traj_np.p_cumulative - traj_nb.p_cumulative))))
            print(
                f"{n:>3} {2**n:>5} {1e3 * t_np:>12.2f} {1e3 * t_nb:>12.2f}"
                f" {t_np / t_nb:>8.2f}  max|delta|={delta:.2e}"
            )
        else:
            print(f"{n:>3} {2**n:>5} {1e3 * t_np:>12.2f} {'-':>12} {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
