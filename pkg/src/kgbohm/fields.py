"""Field slices (density / current / velocity on the grid) and guards."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryContaminationError
from .wavepacket import ConjugateGrids

__all__ = ["FieldSlice", "masked_velocity", "ensure_boundary_clear", "cumulative_trapezoid"]


@dataclass(frozen=True, eq=False)
class FieldSlice:
    """Real-valued field samples on the position grid at one time.

    velocity is NaN wherever valid is False (masked-low-density nodes);
    masked nodes carry no velocity value. Slices holding only a density
    or only a current leave the other arrays None.
    """

    t: float
    x: np.ndarray
    density: np.ndarray | None = None
    current: np.ndarray | None = None
    velocity: np.ndarray | None = None
    valid: np.ndarray | None = None

    def __post_init__(self) -> None:
        for arr in (self.density, self.current, self.velocity, self.valid):
            if arr is not None and arr.shape != self.x.shape:
                raise ValueError("field arrays must match the grid length")

    @property
    def n_masked(self) -> int:
        return 0 if self.valid is None else int(np.sum(~self.valid))


def _same_slice_geometry(a: FieldSlice, b: FieldSlice) -> None:
    if not math.isclose(a.t, b.t, rel_tol=0.0, abs_tol=1e-12):
        raise ValueError(f"slices carry different timestamps: {a.t} vs {b.t}")
    if a.x.shape != b.x.shape or not np.array_equal(a.x, b.x):
        raise ValueError("slices live on different grids")


def masked_velocity(density: FieldSlice, current: FieldSlice, eps_rel: float) -> FieldSlice:
    """v = current/density where |density| >= eps_rel * max|density|, NaN elsewhere.

    Superluminal values are never clipped; an all-masked slice is legal.
    """
    _same_slice_geometry(density, current)
    rho = density.density
    j = current.current
    if rho is None or j is None:
        raise ValueError("need a density slice and a current slice")
    absrho = np.abs(rho)
    threshold = eps_rel * float(absrho.max(initial=0.0))
    valid = absrho >= threshold if threshold > 0 else absrho > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(valid, j / rho, np.nan)
    v.flags.writeable = False
    valid.flags.writeable = False
    return FieldSlice(
        t=density.t, x=density.x, density=rho, current=j, velocity=v, valid=valid
    )


def ensure_boundary_clear(
    density: np.ndarray,
    label: str,
    n_edge: int = 5,
    rel_threshold: float = 1e-8,
) -> None:
    """Abort when density within n_edge cells of either box edge exceeds
    rel_threshold of the peak (periodic wraparound would contaminate fields)."""
    peak = float(np.max(density))
    if peak <= 0:
        return
    edge = max(float(np.max(density[:n_edge])), float(np.max(density[-n_edge:])))
    if edge > rel_threshold * peak:
        raise BoundaryContaminationError(
            f"{label}: edge density {edge:.3e} exceeds {rel_threshold:.1e} of peak "
            f"{peak:.3e}; enlarge x_span or shorten t_final"
        )


def cumulative_trapezoid(y: np.ndarray, dx: float) -> np.ndarray:
    """Cumulative trapezoid antiderivative with value 0 at the first node."""
    out = np.empty_like(y, dtype=np.float64)
    out[0] = 0.0
    np.cumsum((y[1:] + y[:-1]) * (0.5 * dx), out=out[1:])
    return out


def grid_quantiles(density: FieldSlice, q: np.ndarray) -> np.ndarray:
    """Positions where the cumulative distribution of a density slice hits q."""
    rho = density.density
    if rho is None:
        raise ValueError("slice carries no density")
    dx = float(density.x[1] - density.x[0])
    cdf = cumulative_trapezoid(np.maximum(rho, 0.0), dx)
    total = cdf[-1]
    if total <= 0:
        raise ValueError("density has no mass")
    return np.interp(np.asarray(q, dtype=np.float64), cdf / total, density.x)


def slice_for_grids(grids: ConjugateGrids, t: float, **arrays) -> FieldSlice:
    """Convenience constructor wiring the grid's x axis into a FieldSlice."""
    return FieldSlice(t=t, x=grids.x, **arrays)
