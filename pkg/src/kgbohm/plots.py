"""Figure output: heatmaps of field slices and trajectory fans.

Images are a convenience layer on top of the data tables; their pixels are
not part of any acceptance contract.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bohm import Trajectory
from .fields import FieldSlice

__all__ = ["field_heatmap", "trajectory_figure"]


def field_heatmap(
    slices: list[FieldSlice],
    attr: str,
    path: Path,
    title: str,
    clip: float | None = None,
) -> None:
    """Space-time heatmap of one field attribute ('density' or 'velocity').

    Masked velocity nodes are NaN and render blank. clip symmetrically
    saturates the color range (used for the singular canonical velocity).
    """
    x = slices[0].x
    ts = np.array([s.t for s in slices])
    z = np.stack([getattr(s, attr) for s in slices], axis=0)
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    if clip is not None:
        vmin, vmax = -clip, clip
        cmap = "RdBu_r"
    else:
        vmin = vmax = None
        cmap = "viridis"
    mesh = ax.pcolormesh(x, ts, z, shading="nearest", cmap=cmap, vmin=vmin, vmax=vmax)
    fig.colorbar(mesh, ax=ax, label=attr)
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def trajectory_figure(trajectories: list[Trajectory], path: Path, c: float) -> None:
    """Two panels: paths x(t) and their velocities dx/dt with the +-c band."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.2))
    for tr in trajectories:
        ax1.plot(tr.t, tr.x, lw=0.9)
        ax2.plot(tr.t, tr.v, lw=0.9)
    ax1.set_xlabel("t")
    ax1.set_ylabel("x(t)")
    ax1.set_title("trajectories")
    ax2.axhline(c, color="k", ls="--", lw=0.8)
    ax2.axhline(-c, color="k", ls="--", lw=0.8)
    ax2.set_xlabel("t")
    ax2.set_ylabel("dx/dt")
    ax2.set_title("velocities")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
