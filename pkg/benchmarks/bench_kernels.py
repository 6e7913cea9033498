#!/usr/bin/env python3
"""Benchmark the hot kernels: numba @njit versus the pure-numpy fallback.

Times the pointwise spectral superposition and the O(N^2)-per-point direct
current double sum on the default p0=3 packet. Run after `pip install -e .`:

    python benchmarks/bench_kernels.py [--n-modes 1024] [--points 16] [--repeat 5]

Setting KGBOHM_DISABLE_NUMBA=1 changes which backend the package itself
dispatches to; this script always times both implementations directly.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from kgbohm import _kernels
from kgbohm.wavepacket import SimulationParams, gaussian_spectral, make_conjugate_grids


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-modes", type=int, default=1024)
    ap.add_argument("--points", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    params = SimulationParams(p0=3.0, n_modes=args.n_modes)
    grids = make_conjugate_grids(params)
    g = gaussian_spectral(params, grids)
    e = grids.dispersion.energies
    a = grids.weights * g.g * np.exp(-1j * e * 2.0)
    rng = np.random.default_rng(7)
    xs = rng.uniform(grids.x_min, grids.x_max, size=args.points)
    xs_dense = rng.uniform(grids.x_min, grids.x_max, size=grids.n)
    inv_hbar = 1.0 / grids.hbar

    print(f"n_modes={grids.n}  points={args.points}  active backend={_kernels.BACKEND}")
    rows = []

    t_np = _time(lambda: _kernels.spectral_sum_numpy(a, grids.p, xs_dense, inv_hbar), args.repeat)
    rows.append(("spectral_sum (N points)", "numpy", t_np, 1.0))
    if _kernels.HAS_NUMBA:
        _kernels.spectral_sum_numba(a, grids.p, xs_dense, inv_hbar)  # warm the JIT
        t_nb = _time(lambda: _kernels.spectral_sum_numba(a, grids.p, xs_dense, inv_hbar),
                     args.repeat)
        rows.append(("spectral_sum (N points)", "numba", t_nb, t_np / t_nb))

    t_np = _time(lambda: _kernels.direct_current_numpy(a, grids.p, e, xs, inv_hbar, 1.0),
                 args.repeat)
    rows.append((f"direct_current ({args.points} points)", "numpy", t_np, 1.0))
    if _kernels.HAS_NUMBA:
        _kernels.direct_current_numba(a, grids.p, e, xs, inv_hbar, 1.0)
        t_nb = _time(lambda: _kernels.direct_current_numba(a, grids.p, e, xs, inv_hbar, 1.0),
                     args.repeat)
        rows.append((f"direct_current ({args.points} points)", "numba", t_nb, t_np / t_nb))

    if not _kernels.HAS_NUMBA:
        print("numba unavailable or disabled; numpy fallback only")
    print(f"{'kernel':34s} {'backend':8s} {'best [ms]':>10s} {'speedup':>8s}")
    for name, backend, t, speedup in rows:
        print(f"{name:34s} {backend:8s} {1e3 * t:10.2f} {speedup:8.2f}")

    if _kernels.HAS_NUMBA:
        ref = _kernels.direct_current_numpy(a, grids.p, e, xs, inv_hbar, 1.0)
        fast = _kernels.direct_current_numba(a, grids.p, e, xs, inv_hbar, 1.0)
        print(f"backend agreement (direct_current): {np.max(np.abs(ref - fast)):.3e}")


if __name__ == "__main__":
    main()
