"""Built-in invariant suite: the release gate behind `kgbohm validate`.

Each check evolves a reference scenario, measures a residual and compares
it to its pinned bound. Oracles are kept independent of the paths they
check: the nonlocal current uses the double mode sum, the evolution uses
the closed-form 2x2 propagator, time derivatives use centered finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bohm import superluminal_scan
from .canonical import (
    TAU3,
    build_fw,
    canonical_velocity,
    charge_current,
    charge_density,
    evolve_canonical,
    lift_initial,
)
from .uncoupled import (
    UncoupledState,
    average_current,
    current_u_direct,
    current_u_fast,
    density_u,
    evolve_uncoupled,
    uncoupled_slice,
)
from .wavepacket import (
    SimulationParams,
    gaussian_spectral,
    grid_derivative,
    make_conjugate_grids,
    position_norm,
    synthesize,
    to_position,
)

__all__ = [
    "CheckResult",
    "run_validation",
    "format_report",
    "canonical_continuity_residual",
    "uncoupled_continuity_residual",
]

CONTINUITY_DT = 1e-3
ORACLE_SEED = 42  # rng seed for picking the sample nodes


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    bound: float
    passed: bool
    note: str = ""


def _check(name: str, measured: float, bound: float, note: str = "") -> CheckResult:
    return CheckResult(name=name, measured=float(measured), bound=float(bound),
                       passed=bool(measured < bound), note=note)


def canonical_continuity_residual(state, fw, grids, t: float, dt: float = CONTINUITY_DT):
    """(max residual, max|dj/dx|) of d_t rho + d_x j with FD time derivative."""
    j = charge_current(evolve_canonical(state, fw, t)).current
    rho_p = charge_density(evolve_canonical(state, fw, t + dt)).density
    rho_m = charge_density(evolve_canonical(state, fw, max(t - dt, 0.0))).density
    drho = (rho_p - rho_m) / (2.0 * dt if t >= dt else dt)
    djdx = np.real(grid_derivative(j, grids))
    return float(np.max(np.abs(drho + djdx))), float(np.max(np.abs(djdx)))


def uncoupled_continuity_residual(state, grids, t: float, dt: float = CONTINUITY_DT):
    """(max residual, max|dJ/dx|) for the particle-sector continuity law."""
    j = current_u_fast(state, t).current
    rho_p = density_u(evolve_uncoupled(state, t + dt)).density
    rho_m = density_u(evolve_uncoupled(state, max(t - dt, 0.0))).density
    drho = (rho_p - rho_m) / (2.0 * dt if t >= dt else dt)
    djdx = np.real(grid_derivative(j, grids))
    return float(np.max(np.abs(drho + djdx))), float(np.max(np.abs(djdx)))


def _propagator_2x2(p: float, t: float, hbar: float, m: float, c: float) -> np.ndarray:
    """Closed-form exp(-i H t / hbar) for the coupled per-mode Hamiltonian.

    H = (tau3 + i tau2) p^2/2m + tau3 m c^2 squares to E_p^2, so
    exp(-i H t/hbar) = cos(E t/hbar) I - i sin(E t/hbar) H / E. Independent
    of the decoupling-transform route used by evolve_canonical.
    """
    mc2 = m * c**2
    kin = p**2 / (2.0 * m)
    h = np.array([[kin + mc2, kin], [-kin, -(kin + mc2)]], dtype=np.complex128)
    e = np.sqrt((p * c) ** 2 + mc2**2)
    arg = e * t / hbar
    return np.cos(arg) * np.eye(2) - 1j * np.sin(arg) * h / e


def run_validation(oracle_tol: float = 1e-6, continuity_dt: float = CONTINUITY_DT):
    """Run every invariant check on the built-in reference scenario."""
    results: list[CheckResult] = []
    params = SimulationParams(p0=3.0)
    grids = make_conjugate_grids(params)
    g = gaussian_spectral(params, grids)

    # --- algebraic identities -------------------------------------------
    fw = build_fw(grids)
    tau3 = np.real(TAU3)
    sandwich = np.einsum(
        "ij,njk,kl,nlm->nim", tau3, fw.u.transpose(0, 2, 1).conj(), tau3, fw.u
    )
    pu_err = np.max(np.abs(sandwich - np.eye(2)))
    results.append(_check("pseudo-unitarity tau3 U^T tau3 U = 1", pu_err, 1e-12))
    i0 = grids.n // 2
    results.append(
        _check("U(p=0) = identity", np.max(np.abs(fw.u[i0] - np.eye(2))), 1e-14)
    )

    # --- conservation laws ----------------------------------------------
    state = lift_initial(g)
    charge_drift = 0.0
    for t in (0.0, 1.0, 2.0):
        f = evolve_canonical(state, fw, t)
        rho = charge_density(f).density
        charge_drift = max(charge_drift, abs(float(np.sum(grids.dx * rho)) - 1.0))
    results.append(_check("canonical charge drift over t in [0,2]", charge_drift, 1e-10))

    ustate = UncoupledState(g)
    norm_drift = 0.0
    for t in (0.0, 1.0, 2.0):
        phi = evolve_uncoupled(ustate, t)
        norm_drift = max(norm_drift, abs(position_norm(phi.values, grids) - 1.0))
    results.append(_check("uncoupled norm drift over t in [0,2]", norm_drift, 1e-10))

    # --- evolution-path equivalence --------------------------------------
    # momentum-space comparison: the decoupling-transform route against the
    # closed-form per-mode propagator, every 8th node
    t_ref = 1.5
    u, ui = fw.u, fw.u_inv
    phase = np.exp(-1j * grids.dispersion.energies * (t_ref / grids.hbar))
    a = (u[:, 0, 0] * state.phi_p + u[:, 0, 1] * state.chi_p) * phase
    b = (u[:, 1, 0] * state.phi_p + u[:, 1, 1] * state.chi_p) * np.conj(phase)
    phi_fw = ui[:, 0, 0] * a + ui[:, 0, 1] * b
    chi_fw = ui[:, 1, 0] * a + ui[:, 1, 1] * b
    err = 0.0
    for idx in range(0, grids.n, 8):
        prop = _propagator_2x2(grids.p[idx], t_ref, grids.hbar, params.m, params.c)
        ref = prop @ np.array([state.phi_p[idx], state.chi_p[idx]])
        err = max(err, abs(ref[0] - phi_fw[idx]), abs(ref[1] - chi_fw[idx]))
    results.append(_check("evolution equals 2x2 matrix exponential", err, 1e-10,
                          note=f"t={t_ref}, every 8th node"))

    # --- continuity, both representations --------------------------------
    t_mid = 1.0
    resid_c, scale = canonical_continuity_residual(state, fw, grids, t_mid, continuity_dt)
    results.append(
        _check("canonical continuity residual", resid_c, 1e-3 * scale,
               note=f"bound = 1e-3 * max|dj/dx| = {1e-3 * scale:.3e}")
    )
    resid_u, scale_u = uncoupled_continuity_residual(ustate, grids, t_mid, continuity_dt)
    results.append(
        _check("uncoupled continuity residual", resid_u, 1e-3 * scale_u,
               note=f"bound = 1e-3 * max|dJ/dx| = {1e-3 * scale_u:.3e}")
    )

    # --- oracle equivalence for the nonlocal current ---------------------
    rng = np.random.default_rng(ORACLE_SEED)
    nodes = rng.integers(0, grids.n, size=16)
    worst = 0.0
    for t in (0.0, 1.0, 2.0):
        fast = current_u_fast(ustate, t)
        direct = current_u_direct(ustate, grids.x[nodes], t)
        scale_j = max(float(np.max(np.abs(fast.current))), float(np.max(np.abs(direct))))
        worst = max(worst, float(np.max(np.abs(fast.current[nodes] - direct))) / scale_j)
    results.append(_check("fast current vs double-sum oracle (rel Linf)", worst, oracle_tol,
                          note="16 fixed-seed random nodes, t in {0,1,2}"))

    # --- average-current identity ----------------------------------------
    av = average_current(ustate)
    integ = {t: float(np.sum(grids.dx * current_u_fast(ustate, t).current))
             for t in (0.0, 2.0)}
    id_err = max(abs(integ[t] - av) for t in integ)
    results.append(_check("integral of J equals <J>", id_err, 1e-8,
                          note=f"<J> = {av:.12f}"))
    results.append(_check("<J> constant in time", abs(integ[0.0] - integ[2.0]), 1e-8))

    # --- synthesis round trip --------------------------------------------
    phi_fft = to_position(g.g, grids)
    phi_pt = synthesize(g, grids.x, 0.0)
    conj_err = float(np.max(np.abs(phi_fft - phi_pt)) / np.max(np.abs(phi_fft)))
    results.append(_check("FFT reconstruction equals pointwise sum", conj_err, 1e-10))
    results.append(
        _check("Parseval: grid norm equals spectral norm",
               abs(position_norm(phi_fft, grids) - g.norm), 1e-10)
    )

    # --- velocity-field contrast ------------------------------------------
    f2 = evolve_canonical(state, fw, 2.0)
    v_can = canonical_velocity(charge_density(f2), charge_current(f2))
    can_scan = superluminal_scan([v_can], params.c)
    results.append(
        CheckResult(
            name="canonical velocity field is superluminal somewhere",
            measured=can_scan.max_ratio,
            bound=1.0,
            passed=can_scan.max_ratio > 1.0,
            note="pass condition is max|v|/c > 1 (pathology expected)",
        )
    )
    u_scan = superluminal_scan([uncoupled_slice(ustate, t, eps_rel=1e-3) for t in (0.0, 1.0, 2.0)],
                               params.c)
    results.append(
        CheckResult(
            name="uncoupled velocity subluminal on supported nodes",
            measured=u_scan.max_ratio,
            bound=1.0,
            passed=u_scan.is_empty,
            note="nodes with density > 1e-3 of peak, t in {0,1,2}",
        )
    )
    return results


def format_report(results) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"[{status}] {r.name}: measured={r.measured:.3e} bound={r.bound:.3e}"
        if r.note:
            line += f" ({r.note})"
        lines.append(line)
    n_fail = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
