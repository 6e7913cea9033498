"""Shared fixtures: the two reference packets used across the suite."""

import numpy as np
import pytest

from kgbohm.canonical import build_fw, lift_initial
from kgbohm.uncoupled import UncoupledState
from kgbohm.wavepacket import SimulationParams, gaussian_spectral, make_conjugate_grids


@pytest.fixture(scope="session")
def params3():
    """Ultra-relativistic packet: p0 = 3, sigma = 1, natural units."""
    return SimulationParams(p0=3.0)


@pytest.fixture(scope="session")
def grids3(params3):
    return make_conjugate_grids(params3)


@pytest.fixture(scope="session")
def g3(params3, grids3):
    return gaussian_spectral(params3, grids3)


@pytest.fixture(scope="session")
def fw3(grids3):
    return build_fw(grids3)


@pytest.fixture(scope="session")
def canonical3(g3):
    return lift_initial(g3)


@pytest.fixture(scope="session")
def ustate3(g3):
    return UncoupledState(g3)


@pytest.fixture(scope="session")
def params0():
    """Packet at rest: p0 = 0, symmetric box, long horizon."""
    return SimulationParams(p0=0.0, t_final=10.0)


@pytest.fixture(scope="session")
def grids0(params0):
    return make_conjugate_grids(params0)


@pytest.fixture(scope="session")
def g0(params0, grids0):
    return gaussian_spectral(params0, grids0)


@pytest.fixture(scope="session")
def ustate0(g0):
    return UncoupledState(g0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
