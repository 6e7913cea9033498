"""Coupled two-component form of the free Klein-Gordon equation.

The scalar equation (i hbar d_t)^2 psi = (P^2 c^2 + m^2 c^4) psi is
rewritten first order in time for Psi = (phi_c, chi_c):

    i hbar d_t Psi = [ (tau3 + i tau2) P^2 / 2m + tau3 m c^2 ] Psi,

with psi = phi_c + chi_c. The conserved charge density
rho = |phi_c|^2 - |chi_c|^2 is indefinite: chi_c carries negative charge
(anti-particle admixture), so an initial one-component packet generically
develops regions of negative rho, and the ratio current/density is
singular and superluminal there. That pathology is the quantity this
module exposes; it is never smoothed over.

Evolution is done per momentum node through the similarity transform
U(p) that diagonalizes the 2x2 Hamiltonian to tau3 E_p:

    U = [ (mc^2 + E_p) - tau1 (mc^2 - E_p) ] / sqrt(4 m c^2 E_p),

which is pseudo-unitary: U^-1 = tau3 U^dagger tau3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import FieldSlice, ensure_boundary_clear, masked_velocity
from .wavepacket import (
    ConjugateGrids,
    DispersionTable,
    SpectralAmplitudes,
    grid_derivative,
    to_position,
)

__all__ = [
    "TAU1",
    "TAU2",
    "TAU3",
    "FWMatrix",
    "CanonicalSpectralState",
    "SpinorField",
    "build_fw",
    "lift_initial",
    "charge",
    "evolve_canonical",
    "charge_density",
    "charge_current",
    "canonical_velocity",
]

TAU1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
TAU2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
TAU3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
TAU1.flags.writeable = False
TAU2.flags.writeable = False
TAU3.flags.writeable = False


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FWMatrix:
    """Per-node 2x2 decoupling matrix U(p_j) and its inverse.

    Both are real symmetric; u_inv = tau3 u^T tau3 flips the sign of the
    off-diagonal entries.
    """

    u: np.ndarray  # shape (n, 2, 2)
    u_inv: np.ndarray  # shape (n, 2, 2)

    @property
    def n(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True, eq=False)
class CanonicalSpectralState:
    """Momentum-space two-component state (phi_p, chi_p) over the grid."""

    phi_p: np.ndarray
    chi_p: np.ndarray
    grids: ConjugateGrids


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Position-space components (phi, chi) sampled on the grid at one time."""

    phi: np.ndarray
    chi: np.ndarray
    t: float
    grids: ConjugateGrids

    @property
    def psi(self) -> np.ndarray:
        """Scalar Klein-Gordon field psi = phi + chi."""
        return self.phi + self.chi


def build_fw(grids: ConjugateGrids, dispersion: DispersionTable | None = None) -> FWMatrix:
    """Decoupling matrix per momentum node; U(0) is the identity.

    E_p >= m c^2 > 0 keeps the denominator sqrt(4 m c^2 E_p) safe.
    """
    disp = dispersion if dispersion is not None else grids.dispersion
    e = disp.energies
    mc2 = disp.rest_energy
    denom = np.sqrt(4.0 * mc2 * e)
    diag = (mc2 + e) / denom
    off = -(mc2 - e) / denom
    n = e.size
    u = np.zeros((n, 2, 2))
    u[:, 0, 0] = diag
    u[:, 1, 1] = diag
    u[:, 0, 1] = off
    u[:, 1, 0] = off
    u_inv = np.zeros((n, 2, 2))
    u_inv[:, 0, 0] = diag
    u_inv[:, 1, 1] = diag
    u_inv[:, 0, 1] = -off
    u_inv[:, 1, 0] = -off
    return FWMatrix(u=_readonly(u), u_inv=_readonly(u_inv))


def lift_initial(amplitudes: SpectralAmplitudes) -> CanonicalSpectralState:
    """Lift a normalized scalar packet to (phi_p, chi_p) = (g, 0): unit charge."""
    g = amplitudes.g
    return CanonicalSpectralState(
        phi_p=_readonly(g.astype(np.complex128, copy=True)),
        chi_p=_readonly(np.zeros_like(g, dtype=np.complex128)),
        grids=amplitudes.grids,
    )


def charge(state: CanonicalSpectralState) -> float:
    """Total conserved charge sum_j w_j (|phi_p|^2 - |chi_p|^2)."""
    w = state.grids.weights
    return float(np.sum(w * (np.abs(state.phi_p) ** 2 - np.abs(state.chi_p) ** 2)))


def evolve_canonical(
    state: CanonicalSpectralState,
    fw: FWMatrix,
    t: float,
    check_boundary: bool = True,
) -> SpinorField:
    """Evolve to time t and return the position-space spinor field.

    Per node: Psi(p, t) = U^-1 diag(e^{-i E t/hbar}, e^{+i E t/hbar}) U Psi(p, 0),
    algebraically identical to exponentiating the coupled 2x2 Hamiltonian.
    t = 0 returns the initial fields exactly (identity evolution).

    check_boundary=False skips the wraparound guard; periodic states such
    as single plane-wave modes are legitimately box-filling.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    grids = state.grids
    if t == 0.0:
        phi_t, chi_t = state.phi_p, state.chi_p
    else:
        u, u_inv = fw.u, fw.u_inv
        a = u[:, 0, 0] * state.phi_p + u[:, 0, 1] * state.chi_p
        b = u[:, 1, 0] * state.phi_p + u[:, 1, 1] * state.chi_p
        phase = np.exp(-1j * grids.dispersion.energies * (t / grids.hbar))
        a = a * phase
        b = b * np.conj(phase)
        phi_t = u_inv[:, 0, 0] * a + u_inv[:, 0, 1] * b
        chi_t = u_inv[:, 1, 0] * a + u_inv[:, 1, 1] * b
    phi_x = to_position(phi_t, grids)
    chi_x = to_position(chi_t, grids)
    if check_boundary:
        ensure_boundary_clear(
            np.abs(phi_x) ** 2 + np.abs(chi_x) ** 2, f"canonical evolution at t={t}"
        )
    return SpinorField(phi=_readonly(phi_x), chi=_readonly(chi_x), t=t, grids=grids)


def charge_density(field: SpinorField) -> FieldSlice:
    """rho(x) = |phi(x)|^2 - |chi(x)|^2 per node; may be negative."""
    rho = np.abs(field.phi) ** 2 - np.abs(field.chi) ** 2
    return FieldSlice(t=field.t, x=field.grids.x, density=_readonly(rho))


def charge_current(field: SpinorField) -> FieldSlice:
    """Conserved charge current j(x) = (hbar/m) Im[psi* d_x psi], psi = phi + chi.

    Component reduction of the symmetrized two-component current: both of
    its terms collapse onto the scalar field because (tau3 + i tau2) maps
    (phi, chi) to (psi, -psi) and tau3 (tau3 + i tau2) to (psi, psi).
    The spatial derivative is spectral.
    """
    grids = field.grids
    psi = field.psi
    dpsi = grid_derivative(psi, grids)
    j = (grids.hbar / grids.dispersion.m) * np.imag(np.conj(psi) * dpsi)
    return FieldSlice(t=field.t, x=grids.x, current=_readonly(j))


def canonical_velocity(
    density: FieldSlice, current: FieldSlice, eps_rel: float = 1e-12
) -> FieldSlice:
    """v = j / rho with low-|rho| nodes masked, superluminal values kept.

    The divergence near rho = 0 crossings is the phenomenon under study;
    masked nodes are reported, never interpolated over.
    """
    return masked_velocity(density, current, eps_rel)
