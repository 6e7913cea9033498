"""Trajectories guided by the uncoupled velocity field.

A trajectory follows dx/dt = v(x(t), t) with v = J / rho_u, integrated by
classical fixed-step RK4. Grid slices of the field are computed once per
unique time (including the RK4 half-steps), cached, and evaluated off-grid
by linear interpolation; the cache is populate-once-then-read-only, so
trajectories sharing a flow may run concurrently. Seeds are placed at
equal-probability quantiles of the initial density for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainExitError, MaskedRegionError
from .fields import FieldSlice, grid_quantiles
from .uncoupled import UncoupledState, uncoupled_slice

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "SuperluminalReport",
    "UncoupledFlow",
    "sample_initial_positions",
    "integrate_trajectory",
    "integrate_trajectories",
    "check_non_crossing",
    "superluminal_scan",
]

TRAJECTORY_EPS_REL = 1e-10  # density mask for guidance; looser than map masking


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integrator settings; rk4 is the only scheme."""

    dt: float = 1e-2
    scheme: str = "rk4"
    cache_slices: bool = True

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.scheme != "rk4":
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One Bohmian path: seed plus (t, x, v) samples at output times."""

    seed: float
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray


@dataclass(frozen=True, eq=False)
class SuperluminalReport:
    """Unmasked grid cells with |v| >= c, and the field's max |v|/c."""

    cells: tuple
    max_ratio: float

    @property
    def is_empty(self) -> bool:
        return len(self.cells) == 0


class UncoupledFlow:
    """Velocity provider over an uncoupled state with per-time slice caching."""

    def __init__(self, state: UncoupledState, eps_rel: float = TRAJECTORY_EPS_REL,
                 cache_slices: bool = True):
        self.state = state
        self.eps_rel = eps_rel
        self.cache_slices = cache_slices
        self._cache: dict[float, np.ndarray] = {}
        self.x_grid = state.grids.x

    def slice_at(self, t: float) -> FieldSlice:
        return uncoupled_slice(self.state, t, eps_rel=self.eps_rel)

    def _velocity_grid(self, t: float) -> np.ndarray:
        v = self._cache.get(t)
        if v is None:
            v = self.slice_at(t).velocity
            if self.cache_slices:
                self._cache[t] = v
        return v

    def velocity_at(self, x, t: float) -> np.ndarray:
        """Linear interpolation of the masked velocity field at positions x.

        Aborts when any position lies outside the grid interior or touches
        a masked node (NaN propagates through the interpolation).
        """
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        grid = self.x_grid
        if np.any(xs < grid[0]) or np.any(xs > grid[-1]):
            bad = xs[(xs < grid[0]) | (xs > grid[-1])][0]
            raise DomainExitError(
                f"position {bad:.6g} left the grid interior "
                f"[{grid[0]:.6g}, {grid[-1]:.6g}] at t={t:.6g}"
            )
        v = np.interp(xs, grid, self._velocity_grid(t))
        if np.any(np.isnan(v)):
            bad = xs[np.isnan(v)][0]
            raise MaskedRegionError(
                f"trajectory entered a masked low-density region near "
                f"x={bad:.6g} at t={t:.6g}"
            )
        return v


def sample_initial_positions(rho0: FieldSlice, n: int) -> np.ndarray:
    """Deterministic seeds at the (k - 1/2)/n quantiles of rho0, k = 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > rho0.x.size:
        raise ValueError(f"n={n} exceeds the grid resolution {rho0.x.size}")
    q = (np.arange(n) + 0.5) / n
    return grid_quantiles(rho0, q)


def integrate_trajectories(
    flow: UncoupledFlow,
    seeds,
    t_final: float,
    config: IntegratorConfig = IntegratorConfig(),
    dt_out: float | None = None,
) -> list[Trajectory]:
    """RK4-integrate all seeds in lockstep so cached slices are shared.

    Samples (t, x, v) every dt_out (default: every step); dt_out must be an
    integer multiple of config.dt.
    """
    seeds = np.atleast_1d(np.asarray(seeds, dtype=np.float64))
    dt = config.dt
    n_steps = int(round(t_final / dt))
    if abs(n_steps * dt - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise ValueError("t_final must be an integer multiple of dt")
    if dt_out is None:
        record_every = 1
    else:
        record_every = int(round(dt_out / dt))
        if record_every < 1 or abs(record_every * dt - dt_out) > 1e-9 * dt_out:
            raise ValueError("dt_out must be a positive integer multiple of dt")

    xs = seeds.copy()
    t_rec = [0.0]
    x_rec = [xs.copy()]
    v_rec = [flow.velocity_at(xs, 0.0)]
    for step in range(n_steps):
        t = step * dt
        # t_next computed as (step+1)*dt, not t + dt: bitwise-identical floats
        # keep the k4 slice and the next step's k1 slice on one cache key
        t_next = (step + 1) * dt
        k1 = flow.velocity_at(xs, t)
        k2 = flow.velocity_at(xs + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = flow.velocity_at(xs + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = flow.velocity_at(xs + dt * k3, t_next)
        xs = xs + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (step + 1) % record_every == 0:
            t_rec.append(t_next)
            x_rec.append(xs.copy())
            v_rec.append(flow.velocity_at(xs, t_next))

    t_arr = np.array(t_rec)
    x_arr = np.stack(x_rec, axis=0)
    v_arr = np.stack(v_rec, axis=0)
    out = []
    for i, seed in enumerate(seeds):
        out.append(
            Trajectory(seed=float(seed), t=t_arr.copy(), x=x_arr[:, i].copy(), v=v_arr[:, i].copy())
        )
    return out


def integrate_trajectory(
    flow: UncoupledFlow,
    seed: float,
    t_final: float,
    config: IntegratorConfig = IntegratorConfig(),
    dt_out: float | None = None,
) -> Trajectory:
    """Integrate a single seed (see integrate_trajectories)."""
    return integrate_trajectories(flow, [seed], t_final, config, dt_out)[0]


def check_non_crossing(trajectories: list[Trajectory]):
    """True iff the spatial ordering of the paths is the same at every sample.

    All trajectories must share the time sampling. Returns (ok, report);
    report names the first violating pair and time, or is None.
    """
    if len(trajectories) < 2:
        return True, None
    t0 = trajectories[0].t
    for tr in trajectories[1:]:
        if tr.t.shape != t0.shape or not np.allclose(tr.t, t0, rtol=0.0, atol=1e-12):
            raise ValueError("trajectories do not share time sampling")
    order = np.argsort([tr.seed for tr in trajectories], kind="stable")
    xmat = np.stack([trajectories[i].x for i in order], axis=0)
    gaps = np.diff(xmat, axis=0)
    bad = np.argwhere(gaps < 0)
    if bad.size == 0:
        return True, None
    i, k = bad[0]
    return False, {
        "time_index": int(k),
        "t": float(t0[k]),
        "lower_seed": float(trajectories[order[i]].seed),
        "upper_seed": float(trajectories[order[i + 1]].seed),
        "x_lower": float(xmat[i, k]),
        "x_upper": float(xmat[i + 1, k]),
    }


def superluminal_scan(slices: list[FieldSlice], c: float) -> SuperluminalReport:
    """Enumerate unmasked cells with |v| >= c; summarize max |v|/c."""
    cells = []
    max_ratio = 0.0
    for s in slices:
        if s.velocity is None:
            raise ValueError("slice carries no velocity field")
        valid = s.valid if s.valid is not None else np.isfinite(s.velocity)
        v = s.velocity
        ratios = np.abs(v[valid]) / c
        if ratios.size:
            max_ratio = max(max_ratio, float(ratios.max()))
        hits = np.flatnonzero(valid & (np.abs(v) >= c))
        for idx in hits:
            cells.append((float(s.t), float(s.x[idx]), float(v[idx])))
    return SuperluminalReport(cells=tuple(cells), max_ratio=max_ratio)
