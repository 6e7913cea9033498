"""Built-in scenario configurations.

Each entry is a plain dict in the documented config schema; `kgbohm run`
accepts either one of these names or a path to a JSON file with the same
layout. Defaults use natural units (hbar = c = m = 1) and the sigma = 1
Gaussian packet.
"""

from __future__ import annotations

BUILTIN_SCENARIOS: dict[str, dict] = {
    "canonical-density": {
        "name": "canonical-density",
        "description": "Charge density of the ultra-relativistic p0=3 packet: "
                       "positive at t=0, negative regions by t=2.",
        "params": {"p0": 3.0, "t_final": 2.0},
        "representation": "canonical",
        "outputs": ["density-maps"],
        "table_times": [0.0, 2.0],
    },
    "canonical-velocity": {
        "name": "canonical-velocity",
        "description": "Guidance velocity j/rho of the p0=3 packet over t in [0,2]; "
                       "singular and superluminal where rho changes sign.",
        "params": {"p0": 3.0, "t_final": 2.0},
        "representation": "canonical",
        "outputs": ["velocity-maps", "superluminal-report"],
        "table_times": [0.0, 2.0],
    },
    "uncoupled-density": {
        "name": "uncoupled-density",
        "description": "Particle-sector density for the same initial packet: "
                       "positive at all times.",
        "params": {"p0": 3.0, "t_final": 2.0},
        "representation": "uncoupled",
        "outputs": ["density-maps"],
        "table_times": [0.0, 1.0, 2.0],
    },
    "uncoupled-velocity": {
        "name": "uncoupled-velocity",
        "description": "Particle-sector velocity J/rho for p0=3: stays near the "
                       "classical value p0 c^2/E and subluminal.",
        "params": {"p0": 3.0, "t_final": 2.0},
        "representation": "uncoupled",
        "outputs": ["velocity-maps", "superluminal-report"],
        "table_times": [0.0, 2.0],
    },
    "free-trajectories": {
        "name": "free-trajectories",
        "description": "16 quantile-seeded trajectories of the p0=0 packet to "
                       "t=10: symmetric spreading, all velocities subluminal.",
        "params": {"p0": 0.0, "t_final": 10.0},
        "representation": "uncoupled",
        "outputs": ["trajectories", "superluminal-report"],
        "seeds": 16,
    },
    "validation": {
        "name": "validation",
        "description": "Run the built-in invariant suite and write its report.",
        "params": {"p0": 3.0, "t_final": 2.0},
        "representation": "both",
        "outputs": ["validation"],
    },
}
