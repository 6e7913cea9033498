"""Hot numerical kernels with a numba fast path and a pure-numpy fallback.

Two kernels dominate runtime: the mode sum evaluating a spectral
superposition at arbitrary points, and the O(N^2)-per-point double sum
for the nonlocal current density. Both exist in two implementations:

* ``*_numba``  -- explicit loops compiled with ``@njit`` (absent when
  numba is unavailable),
* ``*_numpy``  -- vectorized numpy, always available.

The dispatched names (``spectral_sum``, ``direct_current``) pick the numba
path when it imported successfully, unless the environment variable
``KGBOHM_DISABLE_NUMBA`` is set to 1/true/yes/on, which forces the numpy
fallback. ``BACKEND`` records the active choice.
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "KGBOHM_DISABLE_NUMBA"

_POINT_CHUNK = 512  # bounds the (points x modes) phase matrix in the numpy path


def _numba_disabled() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in {"1", "true", "yes", "on"}


HAS_NUMBA = False
if not _numba_disabled():
    try:
        from numba import njit, prange

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False


def spectral_sum_numpy(a, p, x, inv_hbar):
    """sum_j a_j exp(i p_j x / hbar) for every point in x (numpy fallback)."""
    a = np.asarray(a, dtype=np.complex128)
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(x.size, dtype=np.complex128)
    for start in range(0, x.size, _POINT_CHUNK):
        xs = x[start : start + _POINT_CHUNK]
        out[start : start + xs.size] = np.exp(1j * inv_hbar * np.outer(xs, p)) @ a
    return out


def direct_current_numpy(a, p, energies, x, inv_hbar, c2):
    """Double mode sum c^2 sum_jl (p_j+p_l)/(E_j+E_l) b_j conj(b_l) per point.

    b_j = a_j exp(i p_j x / hbar); time phases are folded into a by the
    caller. Returns the complex sum so the imaginary residue stays visible.
    """
    a = np.asarray(a, dtype=np.complex128)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    kernel = (p[:, None] + p[None, :]) / (energies[:, None] + energies[None, :])
    out = np.empty(x.size, dtype=np.complex128)
    for start in range(0, x.size, _POINT_CHUNK):
        xs = x[start : start + _POINT_CHUNK]
        b = np.exp(1j * inv_hbar * np.outer(xs, p)) * a
        out[start : start + xs.size] = c2 * ((b @ kernel) * b.conj()).sum(axis=1)
    return out


if HAS_NUMBA:

    @njit(cache=True, parallel=True)
    def _spectral_sum_jit(a, p, x, inv_hbar):  # pragma: no cover - compiled
        n_pts = x.shape[0]
        n = p.shape[0]
        out = np.empty(n_pts, dtype=np.complex128)
        for i in prange(n_pts):
            acc = 0.0 + 0.0j
            for j in range(n):
                acc += a[j] * np.exp(1j * inv_hbar * p[j] * x[i])
            out[i] = acc
        return out

    @njit(cache=True, parallel=True)
    def _direct_current_jit(a, p, energies, x, inv_hbar, c2):  # pragma: no cover
        n_pts = x.shape[0]
        n = p.shape[0]
        # hoist the momentum-pair kernel out of the point loop: N^2 divisions
        # once per call instead of once per point
        kernel = np.empty((n, n))
        for j in prange(n):
            for l in range(n):
                kernel[j, l] = (p[j] + p[l]) / (energies[j] + energies[l])
        out = np.empty(n_pts, dtype=np.complex128)
        for i in prange(n_pts):
            b = np.empty(n, dtype=np.complex128)
            for j in range(n):
                b[j] = a[j] * np.exp(1j * inv_hbar * p[j] * x[i])
            acc = 0.0 + 0.0j
            for j in range(n):
                row_dot = 0.0 + 0.0j
                for l in range(n):
                    row_dot += kernel[j, l] * np.conj(b[l])
                acc += b[j] * row_dot
            out[i] = c2 * acc
        return out

    def spectral_sum_numba(a, p, x, inv_hbar):
        return _spectral_sum_jit(
            np.ascontiguousarray(a, dtype=np.complex128),
            np.ascontiguousarray(p, dtype=np.float64),
            np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64),
            float(inv_hbar),
        )

    def direct_current_numba(a, p, energies, x, inv_hbar, c2):
        return _direct_current_jit(
            np.ascontiguousarray(a, dtype=np.complex128),
            np.ascontiguousarray(p, dtype=np.float64),
            np.ascontiguousarray(energies, dtype=np.float64),
            np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64),
            float(inv_hbar),
            float(c2),
        )

    spectral_sum = spectral_sum_numba
    direct_current = direct_current_numba
    BACKEND = "numba"
else:
    spectral_sum = spectral_sum_numpy
    direct_current = direct_current_numpy
    BACKEND = "numpy"


def backend_name() -> str:
    """Active kernel backend, 'numba' or 'numpy'."""
    return BACKEND
