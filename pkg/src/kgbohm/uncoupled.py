"""Positive-energy (square-root Hamiltonian) sector: density, current, velocity.

In the representation where the two-component Hamiltonian is diagonal,
a particle packet is a single scalar amplitude obeying

    i hbar d_t phi = sqrt(P^2 c^2 + m^2 c^4) phi,

so phi(x, t) = sum_j w_j g_j e^{-i(E_j t - p_j x)/hbar} with the same
amplitudes for all time. The density rho_u = |phi|^2 is positive by
construction. The matching conserved current is nonlocal,

    J(x, t) = c^2 sum_jl w_j w_l (p_j + p_l)/(E_j + E_l)
                       g_l* g_j e^{-i(E_j - E_l) t/hbar} e^{i(p_j - p_l) x/hbar},

and satisfies d_t rho_u + d_x J = 0 together with
integral J dx = sum_j w_j |g_j|^2 p_j c^2 / E_j (the quantized classical
relativistic velocity). The O(N^2)-per-point double sum is kept as the
verification oracle; production slices use an O(N log N) path that
integrates -d_t rho_u spatially.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import EdgeAnchorError
from .fields import FieldSlice, ensure_boundary_clear, masked_velocity
from .wavepacket import ConjugateGrids, SpectralAmplitudes, to_position

__all__ = [
    "UncoupledState",
    "ScalarField",
    "evolve_uncoupled",
    "density_u",
    "current_u_direct",
    "current_u_direct_with_residue",
    "current_u_fast",
    "average_current",
    "uncoupled_velocity",
    "uncoupled_slice",
]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class UncoupledState:
    """Pure particle-sector state: time-independent spectral amplitudes."""

    amplitudes: SpectralAmplitudes

    @property
    def grids(self) -> ConjugateGrids:
        return self.amplitudes.grids

    @property
    def norm(self) -> float:
        return self.amplitudes.norm


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Complex scalar field samples on the position grid at one time."""

    values: np.ndarray
    t: float
    grids: ConjugateGrids


def evolve_uncoupled(state: UncoupledState, t: float, check_boundary: bool = True) -> ScalarField:
    """phi(x, t) on the grid by phase multiplication plus one FFT."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    grids = state.grids
    phi = to_position(state.amplitudes.g, grids, t=t)
    if check_boundary:
        ensure_boundary_clear(np.abs(phi) ** 2, f"uncoupled evolution at t={t}")
    return ScalarField(values=_readonly(phi), t=t, grids=grids)


def density_u(field: ScalarField) -> FieldSlice:
    """rho_u(x) = |phi(x)|^2 >= 0 at every node."""
    rho = np.abs(field.values) ** 2
    return FieldSlice(t=field.t, x=field.grids.x, density=_readonly(rho))


def _direct_complex(state: UncoupledState, x, t: float) -> np.ndarray:
    grids = state.grids
    e = grids.dispersion.energies
    a = grids.weights * state.amplitudes.g * np.exp(-1j * e * (t / grids.hbar))
    c2 = grids.dispersion.c ** 2
    return _kernels.direct_current(a, grids.p, e, np.atleast_1d(x), 1.0 / grids.hbar, c2)


def current_u_direct(state: UncoupledState, x, t: float):
    """Double mode sum for J at arbitrary points: the O(N^2)-per-point oracle.

    Returns the real part (the kernel is Hermitian, so J is real up to
    roundoff); scalar x yields a float.
    """
    vals = _direct_complex(state, x, t)
    out = np.real(vals)
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def current_u_direct_with_residue(state: UncoupledState, x, t: float):
    """Direct J plus the max |imaginary residue| as a roundoff diagnostic."""
    vals = _direct_complex(state, x, t)
    return np.real(vals), float(np.max(np.abs(np.imag(vals))))


def current_u_fast(
    state: UncoupledState,
    t: float,
    check_anchor: bool = True,
    anchor_rel_threshold: float = 1e-8,
) -> FieldSlice:
    """Full-grid J(x, t) in O(N log N) via the antiderivative of -d_t rho_u.

    d_t rho_u = 2 Re[phi* d_t phi] is evaluated spectrally on the grid; its
    spatial antiderivative is taken in momentum space (coefficients divided
    by i p / hbar, zero mean dropped) and anchored to J = 0 at the left box
    edge, which requires the density there to be below anchor_rel_threshold
    of the peak. Returns a slice carrying both the density and the current.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    grids = state.grids
    e = grids.dispersion.energies
    gt = state.amplitudes.g * np.exp(-1j * e * (t / grids.hbar))
    phi = to_position(gt, grids)
    dphi = to_position(gt * (-1j * e / grids.hbar), grids)
    rho = np.abs(phi) ** 2
    if check_anchor:
        peak = float(rho.max())
        if peak > 0 and rho[0] > anchor_rel_threshold * peak:
            raise EdgeAnchorError(
                f"left-edge density {rho[0]:.3e} exceeds {anchor_rel_threshold:.1e} "
                f"of peak {peak:.3e} at t={t}; the J=0 anchor is invalid"
            )
    drho_dt = 2.0 * np.real(np.conj(phi) * dphi)
    n = grids.n
    spec = np.fft.fft(drho_dt * grids._alternating)
    # antiderivative: divide by i p / hbar; the p = 0 coefficient is pure
    # roundoff (the exact d_t rho_u has zero mean) and is dropped
    with np.errstate(divide="ignore", invalid="ignore"):
        spec = np.where(grids.p == 0.0, 0.0, spec / (1j * grids.p / grids.hbar))
    anti = np.real(grids._alternating * np.fft.ifft(spec))
    j = -(anti - anti[0])
    return FieldSlice(
        t=t, x=grids.x, density=_readonly(rho), current=_readonly(j)
    )


def average_current(state: UncoupledState) -> float:
    """<J> = sum_j w_j |g_j|^2 p_j c^2 / E_j; time-independent under free evolution."""
    grids = state.grids
    e = grids.dispersion.energies
    c2 = grids.dispersion.c ** 2
    return float(
        np.sum(grids.weights * np.abs(state.amplitudes.g) ** 2 * grids.p * c2 / e)
    )


def uncoupled_velocity(
    density: FieldSlice, current: FieldSlice, eps_rel: float = 1e-12
) -> FieldSlice:
    """v = J / rho_u where rho_u >= eps_rel * peak, masked elsewhere."""
    return masked_velocity(density, current, eps_rel)


def uncoupled_slice(state: UncoupledState, t: float, eps_rel: float = 1e-12) -> FieldSlice:
    """Density, current and masked velocity in one slice (one fast-path pass)."""
    s = current_u_fast(state, t)
    return masked_velocity(
        FieldSlice(t=s.t, x=s.x, density=s.density),
        FieldSlice(t=s.t, x=s.x, current=s.current),
        eps_rel,
    )
