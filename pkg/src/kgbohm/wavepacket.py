"""Grids, units, initial states and spectral superpositions.

A free spin-0 packet is stored as complex amplitudes g(p_j) on a uniform
momentum grid conjugate to the position grid. Every field quantity at any
(x, t) follows from the superposition

    phi(x, t) = sum_j w_j g_j exp(-i (E_j t - p_j x) / hbar)

with the relativistic dispersion E_j = sqrt(p_j^2 c^2 + m^2 c^4). The
quadrature weight is the phase-space measure w_j = dp / (2 pi hbar)
= 1 / (N dx), which makes the discrete sums satisfy Parseval exactly:
sum_n dx |phi(x_n)|^2 == sum_j w_j |g_j|^2. All objects are immutable
after construction and safe to share between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels

__all__ = [
    "SimulationParams",
    "DispersionTable",
    "ConjugateGrids",
    "SpectralAmplitudes",
    "conjugate_grids_from_axes",
    "make_conjugate_grids",
    "gaussian_spectral",
    "synthesize",
    "to_position",
    "to_momentum",
    "grid_derivative",
    "spectral_norm",
    "position_norm",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def default_x_span(p0: float, x0: float, sigma: float) -> tuple[float, float]:
    """Default box: 128 sigma wide, biased toward the propagation direction."""
    if p0 > 0:
        return (x0 - 40.0 * sigma, x0 + 88.0 * sigma)
    if p0 < 0:
        return (x0 - 88.0 * sigma, x0 + 40.0 * sigma)
    return (x0 - 64.0 * sigma, x0 + 64.0 * sigma)


@dataclass(frozen=True)
class SimulationParams:
    """Physical constants, initial-packet parameters and grid settings.

    sigma is the standard deviation of the position-space probability
    density |phi(x, 0)|^2; the momentum density then has width
    sigma_p = hbar / (2 sigma). x_span defaults to a 128-sigma box biased
    toward the propagation direction.
    """

    hbar: float = 1.0
    c: float = 1.0
    m: float = 1.0
    p0: float = 0.0
    x0: float = 0.0
    sigma: float = 1.0
    n_modes: int = 1024
    x_span: tuple[float, float] | None = None
    t_final: float = 2.0
    dt_out: float = 0.1

    def __post_init__(self) -> None:
        for name in ("hbar", "c", "m", "sigma"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not _is_power_of_two(self.n_modes):
            raise ValueError(f"n_modes must be a power of two, got {self.n_modes}")
        if self.n_modes < 64:
            raise ValueError(f"n_modes must be >= 64, got {self.n_modes}")
        if self.x_span is None:
            object.__setattr__(
                self, "x_span", default_x_span(self.p0, self.x0, self.sigma)
            )
        else:
            object.__setattr__(self, "x_span", (float(self.x_span[0]), float(self.x_span[1])))
        lo, hi = self.x_span
        if not hi > lo:
            raise ValueError("x_span must be nondegenerate")
        if lo > self.x0 - 6.0 * self.sigma or hi < self.x0 + 6.0 * self.sigma:
            raise ValueError("x_span must contain x0 +/- 6 sigma")
        if not self.t_final >= 0:
            raise ValueError("t_final must be nonnegative")
        if not self.dt_out > 0:
            raise ValueError("dt_out must be positive")

    @property
    def sigma_p(self) -> float:
        return self.hbar / (2.0 * self.sigma)


@dataclass(frozen=True, eq=False)
class DispersionTable:
    """Relativistic energies E_j = sqrt(p_j^2 c^2 + m^2 c^4) per momentum node."""

    energies: np.ndarray
    m: float
    c: float

    @property
    def rest_energy(self) -> float:
        return self.m * self.c**2


@dataclass(frozen=True, eq=False)
class ConjugateGrids:
    """Uniform position grid and its FFT-conjugate momentum grid.

    Conjugacy: dx * dp * N = 2 pi hbar. Weights are the phase-space
    quadrature measure dp/(2 pi hbar) = 1/(N dx), one per momentum node.
    Helper arrays (_alternating, _edge_phase) implement the offset between
    FFT index order and the physical, zero-centered momentum grid.
    """

    x: np.ndarray
    p: np.ndarray
    weights: np.ndarray
    dx: float
    dp: float
    hbar: float
    dispersion: DispersionTable
    _alternating: np.ndarray = field(repr=False, default=None)
    _edge_phase: np.ndarray = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def x_min(self) -> float:
        return float(self.x[0])

    @property
    def x_max(self) -> float:
        return float(self.x[-1])


def conjugate_grids_from_axes(
    n_modes: int,
    x_span: tuple[float, float],
    hbar: float = 1.0,
    m: float = 1.0,
    c: float = 1.0,
) -> ConjugateGrids:
    """Build conjugate grids from raw axis data (no packet-size checks)."""
    if not _is_power_of_two(n_modes):
        raise ValueError(f"n_modes must be a power of two, got {n_modes}")
    lo, hi = float(x_span[0]), float(x_span[1])
    if not hi > lo:
        raise ValueError("x_span must be nondegenerate")
    n = int(n_modes)
    dx = (hi - lo) / n
    dp = 2.0 * math.pi * hbar / (n * dx)
    x = lo + dx * np.arange(n)
    p = (np.arange(n) - n // 2) * dp
    # 1/(N dx) rather than dp/(2 pi hbar): ties the weight to dx exactly,
    # so Parseval holds to the last ulp.
    weights = np.full(n, 1.0 / (n * dx))
    energies = np.sqrt(p**2 * c**2 + (m * c**2) ** 2)
    dispersion = DispersionTable(_readonly(energies), m=float(m), c=float(c))
    alternating = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    edge_phase = np.exp(1j * p * lo / hbar)
    return ConjugateGrids(
        x=_readonly(x),
        p=_readonly(p),
        weights=_readonly(weights),
        dx=dx,
        dp=dp,
        hbar=float(hbar),
        dispersion=dispersion,
        _alternating=_readonly(alternating),
        _edge_phase=_readonly(edge_phase),
    )


def make_conjugate_grids(params: SimulationParams) -> ConjugateGrids:
    """Grids for a simulation, with the dispersion table computed once."""
    lo, hi = params.x_span
    if hi - lo < 12.0 * params.sigma:
        raise ValueError("x_span shorter than 12 sigma")
    return conjugate_grids_from_axes(
        params.n_modes, params.x_span, hbar=params.hbar, m=params.m, c=params.c
    )


@dataclass(frozen=True, eq=False)
class SpectralAmplitudes:
    """Complex amplitudes g(p_j); the state's exact representation for all time."""

    g: np.ndarray
    grids: ConjugateGrids

    @property
    def norm(self) -> float:
        return float(np.sum(self.grids.weights * np.abs(self.g) ** 2))


def spectral_norm(g: np.ndarray, grids: ConjugateGrids) -> float:
    return float(np.sum(grids.weights * np.abs(g) ** 2))


def position_norm(values: np.ndarray, grids: ConjugateGrids) -> float:
    return float(np.sum(grids.dx * np.abs(values) ** 2))


def gaussian_spectral(params: SimulationParams, grids: ConjugateGrids) -> SpectralAmplitudes:
    """Momentum amplitudes of the Gaussian packet

        phi(x, 0) = (2 pi sigma^2)^(-1/4) exp(-(x-x0)^2/(4 sigma^2)
                                              + i p0 (x-x0)/hbar),

    built in closed form in momentum space and renormalized on the grid.
    |g(p)|^2 is Gaussian with std sigma_p = hbar/(2 sigma) centered at p0.
    """
    sp = params.sigma_p
    p = grids.p
    if p[0] > params.p0 - 6.0 * sp or p[-1] < params.p0 + 6.0 * sp:
        raise ValueError(
            "momentum grid does not cover p0 +/- 6 sigma_p; "
            "increase n_modes or shrink dx (aliasing guard)"
        )
    g = np.exp(-((p - params.p0) ** 2) * params.sigma**2 / params.hbar**2) * np.exp(
        -1j * p * params.x0 / params.hbar
    )
    g = g / math.sqrt(spectral_norm(g, grids))
    return SpectralAmplitudes(g=_readonly(g), grids=grids)


def to_position(
    amps: np.ndarray,
    grids: ConjugateGrids,
    t: float = 0.0,
    time_derivative_order: int = 0,
) -> np.ndarray:
    """Evaluate sum_j w_j a_j (-i E_j/hbar)^order e^{-i(E_j t - p_j x)/hbar} on the grid.

    One FFT; exact for band-limited data (matches the pointwise sum to
    roundoff at every node).
    """
    e = grids.dispersion.energies
    a = grids.weights * np.asarray(amps, dtype=np.complex128)
    if t != 0.0:
        a = a * np.exp(-1j * e * (t / grids.hbar))
    if time_derivative_order == 1:
        a = a * (-1j * e / grids.hbar)
    elif time_derivative_order != 0:
        raise ValueError("time_derivative_order must be 0 or 1")
    return grids._alternating * (grids.n * np.fft.ifft(a * grids._edge_phase))


def to_momentum(values: np.ndarray, grids: ConjugateGrids) -> np.ndarray:
    """Inverse of to_position at t=0: recover amplitudes from grid samples."""
    a = np.fft.fft(np.asarray(values, dtype=np.complex128) * grids._alternating) / grids.n
    return a * np.conj(grids._edge_phase) / grids.weights


def grid_derivative(values: np.ndarray, grids: ConjugateGrids, order: int = 1) -> np.ndarray:
    """Spectral spatial derivative of band-limited grid samples."""
    spec = np.fft.fft(np.asarray(values, dtype=np.complex128) * grids._alternating)
    spec = spec * (1j * grids.p / grids.hbar) ** order
    return grids._alternating * np.fft.ifft(spec)


def synthesize(
    amplitudes: SpectralAmplitudes,
    x,
    t: float,
    time_derivative_order: int = 0,
):
    """Exact quadrature of the spectral superposition at arbitrary (x, t).

    Order 0 returns sum_j w_j g_j e^{-i(E_j t - p_j x)/hbar}; order 1
    multiplies each term by -i E_j / hbar (the time derivative). Usable
    off-grid; scalar x yields a scalar.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    xs = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(xs)):
        raise ValueError("x must be finite")
    grids = amplitudes.grids
    e = grids.dispersion.energies
    a = grids.weights * amplitudes.g * np.exp(-1j * e * (t / grids.hbar))
    if time_derivative_order == 1:
        a = a * (-1j * e / grids.hbar)
    elif time_derivative_order != 0:
        raise ValueError("time_derivative_order must be 0 or 1")
    out = _kernels.spectral_sum(a, grids.p, np.atleast_1d(xs), 1.0 / grids.hbar)
    if xs.ndim == 0:
        return complex(out[0])
    return out
