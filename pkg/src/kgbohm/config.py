"""Scenario configuration files and the run manifest.

Configs are JSON objects with the nested schema below. Every key has a
default; on load all defaults are materialized so the persisted snapshot
is self-contained. Unknown keys anywhere are errors.

    {
      "name": "custom",                  # free-form label
      "description": "",                 # free-form text
      "params": {                        # physical + grid settings
        "hbar": 1.0, "c": 1.0, "m": 1.0,
        "p0": 0.0, "x0": 0.0, "sigma": 1.0,
        "n_modes": 1024,
        "x_span": null,                  # [lo, hi); null = auto 128-sigma box
        "t_final": 2.0, "dt_out": 0.1
      },
      "representation": "uncoupled",     # canonical | uncoupled | both
      "outputs": ["density-maps"],       # any of: density-maps, velocity-maps,
                                         # trajectories, superluminal-report,
                                         # validation
      "output_dir": "out/<name>",
      "integrator": {"dt": 0.01, "scheme": "rk4", "cache_slices": true},
      "seeds": 16,                       # trajectory count
      "eps_rel": 1e-12,                  # velocity-map mask threshold
      "table_times": null                # field-table times; null = [0, t_final]
    }
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .bohm import IntegratorConfig
from .errors import ConfigError
from .wavepacket import SimulationParams

__all__ = ["ScenarioConfig", "RunManifest", "load_config", "sha256_file"]

REPRESENTATIONS = ("canonical", "uncoupled", "both")
OUTPUTS = (
    "density-maps",
    "velocity-maps",
    "trajectories",
    "superluminal-report",
    "validation",
)

_PARAM_DEFAULTS = {
    "hbar": 1.0,
    "c": 1.0,
    "m": 1.0,
    "p0": 0.0,
    "x0": 0.0,
    "sigma": 1.0,
    "n_modes": 1024,
    "x_span": None,
    "t_final": 2.0,
    "dt_out": 0.1,
}

_INTEGRATOR_DEFAULTS = {"dt": 0.01, "scheme": "rk4", "cache_slices": True}


def _reject_unknown(section: dict, allowed, where: str) -> None:
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully materialized scenario: every field explicit."""

    name: str
    description: str
    params: SimulationParams
    representation: str
    outputs: tuple[str, ...]
    output_dir: str
    integrator: IntegratorConfig
    seeds: int
    eps_rel: float
    table_times: tuple[float, ...]

    @staticmethod
    def from_dict(raw: dict) -> "ScenarioConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be an object")
        allowed = (
            "name", "description", "params", "representation", "outputs",
            "output_dir", "integrator", "seeds", "eps_rel", "table_times",
        )
        _reject_unknown(raw, allowed, "config root")

        name = raw.get("name", "custom")
        description = raw.get("description", "")

        param_sec = dict(raw.get("params", {}))
        if not isinstance(param_sec, dict):
            raise ConfigError("params must be an object")
        _reject_unknown(param_sec, _PARAM_DEFAULTS, "params")
        merged = {**_PARAM_DEFAULTS, **param_sec}
        if merged["x_span"] is not None:
            span = merged["x_span"]
            if not (isinstance(span, (list, tuple)) and len(span) == 2):
                raise ConfigError("params.x_span must be a [lo, hi] pair or null")
            merged["x_span"] = (float(span[0]), float(span[1]))
        try:
            params = SimulationParams(**merged)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid params: {exc}") from exc

        representation = raw.get("representation", "uncoupled")
        if representation not in REPRESENTATIONS:
            raise ConfigError(
                f"representation must be one of {REPRESENTATIONS}, got {representation!r}"
            )

        outputs = tuple(raw.get("outputs", ("density-maps",)))
        for out in outputs:
            if out not in OUTPUTS:
                raise ConfigError(f"unknown output {out!r}; allowed: {OUTPUTS}")
        if not outputs:
            raise ConfigError("outputs must not be empty")
        if "trajectories" in outputs and representation == "canonical":
            raise ConfigError(
                "trajectories require the uncoupled representation; the canonical "
                "velocity field is exposed for maps and scans only"
            )

        integ_sec = dict(raw.get("integrator", {}))
        if not isinstance(integ_sec, dict):
            raise ConfigError("integrator must be an object")
        _reject_unknown(integ_sec, _INTEGRATOR_DEFAULTS, "integrator")
        try:
            integrator = IntegratorConfig(**{**_INTEGRATOR_DEFAULTS, **integ_sec})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid integrator: {exc}") from exc
        if integrator.dt > params.dt_out:
            raise ConfigError("integrator.dt must not exceed params.dt_out")

        seeds = int(raw.get("seeds", 16))
        if seeds < 1:
            raise ConfigError("seeds must be >= 1")
        eps_rel = float(raw.get("eps_rel", 1e-12))
        if not 0 < eps_rel < 1:
            raise ConfigError("eps_rel must lie in (0, 1)")

        tt = raw.get("table_times")
        if tt is None:
            table_times = (0.0, params.t_final)
        else:
            table_times = tuple(float(t) for t in tt)
            for t in table_times:
                if t < 0 or t > params.t_final:
                    raise ConfigError(f"table time {t} outside [0, t_final]")
        output_dir = raw.get("output_dir", f"out/{name}")
        return ScenarioConfig(
            name=name,
            description=description,
            params=params,
            representation=representation,
            outputs=outputs,
            output_dir=output_dir,
            integrator=integrator,
            seeds=seeds,
            eps_rel=eps_rel,
            table_times=table_times,
        )

    def to_dict(self) -> dict:
        """Self-contained snapshot; feeding it back to from_dict is the identity."""
        p = self.params
        return {
            "name": self.name,
            "description": self.description,
            "params": {
                "hbar": p.hbar, "c": p.c, "m": p.m,
                "p0": p.p0, "x0": p.x0, "sigma": p.sigma,
                "n_modes": p.n_modes,
                "x_span": list(p.x_span),
                "t_final": p.t_final, "dt_out": p.dt_out,
            },
            "representation": self.representation,
            "outputs": list(self.outputs),
            "output_dir": self.output_dir,
            "integrator": asdict(self.integrator),
            "seeds": self.seeds,
            "eps_rel": self.eps_rel,
            "table_times": list(self.table_times),
        }

    @property
    def map_times(self) -> tuple[float, ...]:
        """Output-time ladder 0, dt_out, ... never exceeding t_final."""
        p = self.params
        n = int(p.t_final / p.dt_out + 1e-9)
        return tuple(k * p.dt_out for k in range(n + 1))


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return ScenarioConfig.from_dict(raw)


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


@dataclass
class RunManifest:
    """Written once at the end of a run; data checksums are the determinism
    contract (identical config => identical checksums on one platform)."""

    config: dict
    version: str
    backend: str
    grid_summary: dict
    data_checksums: dict = field(default_factory=dict)
    images: list = field(default_factory=list)
    timings_s: dict = field(default_factory=dict)

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
