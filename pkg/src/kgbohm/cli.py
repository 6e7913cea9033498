"""Scenario-driven command line front end.

Subcommands
    run <config>       run a scenario (JSON path or built-in name)
    validate           run the invariant suite, nonzero exit on failure
    list-scenarios     show the built-in scenarios

Data products are plain space-delimited text with 17-significant-digit
floats; identical configs reproduce byte-identical data files on one
platform (the manifest records their checksums). Exit codes: 0 success,
2 config error, 3 numerical-guard abort, 4 invariant failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import backend_name
from .bohm import (
    UncoupledFlow,
    check_non_crossing,
    integrate_trajectories,
    sample_initial_positions,
    superluminal_scan,
)
from .canonical import (
    build_fw,
    canonical_velocity,
    charge_current,
    charge_density,
    evolve_canonical,
    lift_initial,
)
from .config import (
    RunManifest,
    ScenarioConfig,
    load_config,
    sha256_file,
)
from .errors import ConfigError, NumericalGuardError
from .fields import FieldSlice
from .plots import field_heatmap, trajectory_figure
from .scenarios import BUILTIN_SCENARIOS
from .uncoupled import UncoupledState, average_current, density_u, evolve_uncoupled, uncoupled_slice
from .validate import (
    canonical_continuity_residual,
    format_report,
    run_validation,
    uncoupled_continuity_residual,
)
from .wavepacket import gaussian_spectral, make_conjugate_grids, position_norm

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_INVARIANT = 4


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_field_table(path: Path, slc: FieldSlice, attr: str) -> None:
    """One slice as rows 't x value mask' (mask 1 = valid, 0 = masked).

    Only velocities are ever masked (low-density nodes); density and
    current values are defined at every node.
    """
    values = getattr(slc, attr)
    if attr == "velocity" and slc.valid is not None:
        valid = slc.valid
    else:
        valid = np.ones(slc.x.size, dtype=bool)
    lines = ["t x value mask"]
    t_str = _fmt(slc.t)
    for xi, vi, ok in zip(slc.x, values, valid):
        lines.append(f"{t_str} {_fmt(xi)} {_fmt(vi)} {int(ok)}")
    path.write_text("\n".join(lines) + "\n", newline="\n")


def write_trajectory_table(path: Path, trajectories) -> None:
    lines = ["trajectory t x v"]
    for i, tr in enumerate(trajectories):
        for t, x, v in zip(tr.t, tr.x, tr.v):
            lines.append(f"{i} {_fmt(t)} {_fmt(x)} {_fmt(v)}")
    path.write_text("\n".join(lines) + "\n", newline="\n")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", newline="\n")


class _Runner:
    """Builds every requested product for one scenario."""

    SUPPORTED_EPS = 1e-3  # "supported region": nodes with density > 1e-3 of peak

    def __init__(self, cfg: ScenarioConfig, out_dir: Path):
        self.cfg = cfg
        self.out = out_dir
        self.params = cfg.params
        self.grids = make_conjugate_grids(cfg.params)
        self.g = gaussian_spectral(cfg.params, self.grids)
        self.reps = (
            ("canonical", "uncoupled") if cfg.representation == "both" else (cfg.representation,)
        )
        self._slices: dict[str, list[FieldSlice]] = {}
        self._canonical_state = None
        self._fw = None
        self._uncoupled_state = None
        self.data_files: list[Path] = []
        self.images: list[Path] = []
        self.summary: dict = {"scenario": cfg.name, "representations": list(self.reps)}
        self.timings: dict[str, float] = {}
        self.validation_failed = False

    # --- state ------------------------------------------------------------
    def canonical_state(self):
        if self._canonical_state is None:
            self._canonical_state = lift_initial(self.g)
            self._fw = build_fw(self.grids)
        return self._canonical_state, self._fw

    def uncoupled_state(self):
        if self._uncoupled_state is None:
            self._uncoupled_state = UncoupledState(self.g)
        return self._uncoupled_state

    def slice_at(self, rep: str, t: float, eps_rel: float | None = None) -> FieldSlice:
        eps = self.cfg.eps_rel if eps_rel is None else eps_rel
        if rep == "canonical":
            state, fw = self.canonical_state()
            f = evolve_canonical(state, fw, t)
            rho = charge_density(f)
            j = charge_current(f)
            return canonical_velocity(rho, j, eps_rel=eps)
        return uncoupled_slice(self.uncoupled_state(), t, eps_rel=eps)

    def map_slices(self, rep: str, eps_rel: float | None = None) -> list[FieldSlice]:
        eps = self.cfg.eps_rel if eps_rel is None else eps_rel
        key = f"{rep}@{eps:g}"
        if key not in self._slices:
            self._slices[key] = [self.slice_at(rep, t, eps) for t in self.cfg.map_times]
        return self._slices[key]

    # --- products -----------------------------------------------------------
    def product_density_maps(self) -> None:
        for rep in self.reps:
            for t in self.cfg.table_times:
                path = self.out / f"{rep}_density_t{t:.3f}.dat"
                write_field_table(path, self.slice_at(rep, t), "density")
                self.data_files.append(path)
            img = self.out / f"{rep}_density_map.png"
            field_heatmap(self.map_slices(rep), "density", img, f"{rep} density")
            self.images.append(img)

    def product_velocity_maps(self) -> None:
        for rep in self.reps:
            for t in self.cfg.table_times:
                path = self.out / f"{rep}_velocity_t{t:.3f}.dat"
                write_field_table(path, self.slice_at(rep, t), "velocity")
                self.data_files.append(path)
            img = self.out / f"{rep}_velocity_map.png"
            clip = 3.0 * self.params.c if rep == "canonical" else None
            field_heatmap(self.map_slices(rep), "velocity", img, f"{rep} velocity", clip=clip)
            self.images.append(img)

    def product_superluminal_report(self) -> None:
        """Scan at the configured mask plus a supported-region scan.

        With the default eps_rel = 1e-12 even the particle-sector field can
        show |v| >= c in the far halo (density at the noise/beyond-cone
        level); the supported-region scan at 1e-3 of peak carries the
        physically meaningful claim.
        """
        for rep in self.reps:
            full = superluminal_scan(self.map_slices(rep), self.params.c)
            supported = superluminal_scan(
                self.map_slices(rep, self.SUPPORTED_EPS), self.params.c
            )
            payload = {
                "representation": rep,
                "mask_eps_rel": self.cfg.eps_rel,
                "max_v_over_c": full.max_ratio,
                "cell_count": len(full.cells),
                "supported_region": {
                    "mask_eps_rel": self.SUPPORTED_EPS,
                    "max_v_over_c": supported.max_ratio,
                    "cell_count": len(supported.cells),
                },
                "cells": [
                    {"t": t, "x": x, "v": v} for (t, x, v) in full.cells[:10000]
                ],
            }
            path = self.out / f"superluminal_{rep}.json"
            _write_json(path, payload)
            self.data_files.append(path)
            self.summary.setdefault("superluminal", {})[rep] = {
                "max_v_over_c": full.max_ratio,
                "cell_count": len(full.cells),
                "supported_max_v_over_c": supported.max_ratio,
                "supported_cell_count": len(supported.cells),
            }

    def product_trajectories(self) -> None:
        us = self.uncoupled_state()
        rho0 = density_u(evolve_uncoupled(us, 0.0))
        seeds = sample_initial_positions(rho0, self.cfg.seeds)
        flow = UncoupledFlow(us, cache_slices=self.cfg.integrator.cache_slices)
        trajectories = integrate_trajectories(
            flow, seeds, self.params.t_final, self.cfg.integrator, dt_out=self.params.dt_out
        )
        path = self.out / "trajectories.dat"
        write_trajectory_table(path, trajectories)
        self.data_files.append(path)
        img = self.out / "trajectories.png"
        trajectory_figure(trajectories, img, self.params.c)
        self.images.append(img)
        ok, violation = check_non_crossing(trajectories)
        vmax = max(float(np.max(np.abs(tr.v))) for tr in trajectories)
        self.summary["trajectories"] = {
            "count": len(trajectories),
            "max_abs_velocity_over_c": vmax / self.params.c,
            "non_crossing": ok,
            "first_violation": violation,
        }

    def product_validation(self) -> None:
        results = run_validation()
        report = format_report(results)
        path = self.out / "validation.txt"
        path.write_text(report + "\n", newline="\n")
        self.data_files.append(path)
        self.summary["validation_passed"] = all(r.passed for r in results)
        if not self.summary["validation_passed"]:
            self.validation_failed = True

    # --- summary -------------------------------------------------------------
    def finish_summary(self) -> None:
        per_rep: dict[str, dict] = {}
        t_mid = 0.5 * self.params.t_final if self.params.t_final > 0 else 0.0
        for rep in self.reps:
            slices = self.map_slices(rep)
            info: dict = {}
            if rep == "canonical":
                drift = max(
                    abs(float(np.sum(self.grids.dx * s.density)) - 1.0) for s in slices
                )
                info["charge_drift"] = drift
                state, fw = self.canonical_state()
                resid, scale = canonical_continuity_residual(state, fw, self.grids, t_mid)
                info["continuity_residual"] = resid
                info["continuity_scale_max_djdx"] = scale
            else:
                us = self.uncoupled_state()
                drift = max(
                    abs(position_norm(evolve_uncoupled(us, t).values, self.grids) - 1.0)
                    for t in self.cfg.map_times
                )
                info["norm_drift"] = drift
                resid, scale = uncoupled_continuity_residual(us, self.grids, t_mid)
                info["continuity_residual"] = resid
                info["continuity_scale_max_djdx"] = scale
                info["average_current_spectral"] = average_current(us)
                info["average_current_integrated"] = {
                    f"{t:.3f}": float(np.sum(self.grids.dx * s.current))
                    for t, s in zip(self.cfg.map_times, slices)
                }
            scan = superluminal_scan(slices, self.params.c)
            info["max_v_over_c"] = scan.max_ratio
            per_rep[rep] = info
        self.summary["per_representation"] = per_rep

    def run(self) -> None:
        dispatch = {
            "density-maps": self.product_density_maps,
            "velocity-maps": self.product_velocity_maps,
            "superluminal-report": self.product_superluminal_report,
            "trajectories": self.product_trajectories,
            "validation": self.product_validation,
        }
        for output in self.cfg.outputs:
            t0 = time.perf_counter()
            dispatch[output]()
            self.timings[output] = time.perf_counter() - t0
        t0 = time.perf_counter()
        self.finish_summary()
        path = self.out / "summary.json"
        _write_json(path, self.summary)
        self.data_files.append(path)
        self.timings["summary"] = time.perf_counter() - t0


def run_scenario(cfg: ScenarioConfig) -> tuple[RunManifest, bool]:
    """Execute a scenario; returns (manifest, validation_failed)."""
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t_start = time.perf_counter()
    runner = _Runner(cfg, out_dir)
    runner.run()
    runner.timings["total"] = time.perf_counter() - t_start
    manifest = RunManifest(
        config=cfg.to_dict(),
        version=__version__,
        backend=backend_name(),
        grid_summary={
            "n_modes": runner.grids.n,
            "dx": runner.grids.dx,
            "dp": runner.grids.dp,
            "x_min": runner.grids.x_min,
            "x_max": runner.grids.x_max,
        },
        data_checksums={p.name: sha256_file(p) for p in sorted(runner.data_files)},
        images=[p.name for p in runner.images],
        timings_s=runner.timings,
    )
    manifest.write(out_dir / "manifest.json")
    return manifest, runner.validation_failed


def _resolve_config(name_or_path: str) -> ScenarioConfig:
    path = Path(name_or_path)
    if path.exists():
        return load_config(path)
    if name_or_path in BUILTIN_SCENARIOS:
        return ScenarioConfig.from_dict(BUILTIN_SCENARIOS[name_or_path])
    raise ConfigError(
        f"{name_or_path!r} is neither a config file nor a built-in scenario "
        f"(built-ins: {', '.join(sorted(BUILTIN_SCENARIOS))})"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgbohm",
        description="Densities, currents and Bohmian trajectories for free "
                    "relativistic spin-0 wavepackets.",
    )
    parser.add_argument("--version", action="version", version=f"kgbohm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a JSON config or built-in name")
    p_run.add_argument("config", help="path to a config file, or a built-in scenario name")
    p_run.add_argument("--output-dir", "-o", default=None, help="override the output directory")

    p_val = sub.add_parser("validate", help="run the built-in invariant suite")
    p_val.add_argument(
        "--oracle-tol",
        type=float,
        default=1e-6,
        help="tolerance for the fast-current vs double-sum oracle check (default 1e-6)",
    )

    sub.add_parser("list-scenarios", help="list the built-in scenarios")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = _resolve_config(args.config)
            if args.output_dir is not None:
                cfg = dataclasses.replace(cfg, output_dir=args.output_dir)
            manifest, validation_failed = run_scenario(cfg)
            out_dir = Path(cfg.output_dir)
            print(f"wrote {len(manifest.data_checksums)} data products to {out_dir}")
            if validation_failed:
                print("validation checks FAILED; see validation.txt", file=sys.stderr)
                return EXIT_INVARIANT
            return EXIT_OK
        if args.command == "validate":
            results = run_validation(oracle_tol=args.oracle_tol)
            print(format_report(results))
            return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT
        if args.command == "list-scenarios":
            for name in sorted(BUILTIN_SCENARIOS):
                print(f"{name:24s} {BUILTIN_SCENARIOS[name]['description']}")
            return EXIT_OK
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalGuardError as exc:
        print(f"numerical guard abort: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
